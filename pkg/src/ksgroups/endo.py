"""Normal endomorphisms, pointwise sums, Fitting splits and the automorphism/nilpotent dichotomy."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    InternalContradiction,
    NoAutomorphicSummand,
    NotNormal,
    OrderBudgetExceeded,
    PreconditionViolated,
    SourceTargetMismatch,
)
from .groups import FiniteGroup, GroupHom, NormalSubgroup
from .search import NodeCounter, dividing_order_candidates, greedy_generators, iter_homs

DEFAULT_ENDO_BUDGET = 16


class EndoKind(enum.Enum):
    AUTOMORPHISM = "Automorphism"
    NILPOTENT = "Nilpotent"
    NEITHER = "Neither"


@dataclass(frozen=True)
class EndoClassification:
    kind: EndoKind
    nilpotency_index: int | None
    fitting_exponent: int


@dataclass(frozen=True)
class FittingSplit:
    kernel_part: NormalSubgroup
    image_part: NormalSubgroup
    exponent: int


def _require_endo(*fs: GroupHom) -> FiniteGroup:
    G = fs[0].source
    for f in fs:
        if f.source is not G or f.target is not G:
            raise SourceTargetMismatch("expected endomorphisms of one group")
    return G


def is_normal_endomorphism(f: GroupHom) -> bool:
    """True iff a f(b) a^-1 == f(a b a^-1) for all a, b."""
    G = _require_endo(f)
    if G.is_abelian:
        return True
    T, inv, img = G.table, G.inverse, f.image_of
    ar = np.arange(G.order)
    lhs = T[T[ar[:, None], img[None, :]], inv[:, None]]
    rhs = img[T[T[ar[:, None], ar[None, :]], inv[:, None]]]
    return bool((lhs == rhs).all())


def endo_sum(phi: GroupHom, psi: GroupHom) -> GroupHom | None:
    """The pointwise product a -> phi(a) psi(a) if it is a homomorphism, else None."""
    G = _require_endo(phi, psi)
    f = GroupHom(G, G, G.table[phi.image_of, psi.image_of], check=False)
    return f if f.first_violation() is None else None


def endo_sum_all(fs: Sequence[GroupHom]) -> list[GroupHom | None]:
    """Left-to-right partial sums f1, f1+f2, ...; None from the first undefined one onwards."""
    out: list[GroupHom | None] = []
    acc: GroupHom | None = None
    for k, f in enumerate(fs):
        if k == 0:
            acc = f
        elif acc is not None:
            acc = endo_sum(acc, f)
        out.append(acc)
    return out


def enumerate_endomorphisms(G: FiniteGroup, normal_only: bool = False,
                            max_order: int = DEFAULT_ENDO_BUDGET,
                            counter: NodeCounter | None = None) -> list[GroupHom]:
    """All endomorphisms of G, ordered lexicographically by the images of its greedy generators."""
    if G.order > max_order:
        raise OrderBudgetExceeded(f"group order {G.order} exceeds endomorphism budget {max_order}")
    key = ("endos", normal_only)
    memo = G._memo.get(key)
    if memo is not None:
        return list(memo)
    gens = greedy_generators(G)
    cands = dividing_order_candidates(G, G, gens)
    out = []
    for img in iter_homs(G, G, cands, gens, counter=counter):
        f = GroupHom(G, G, img, check=False)
        if not normal_only or is_normal_endomorphism(f):
            out.append(f)
    G._memo[key] = tuple(out)
    return out


def _fitting_chain(f: GroupHom) -> tuple[int, GroupHom]:
    """Least n >= 1 with ker f^n = ker f^(n+1) and Im f^n = Im f^(n+1), and f^n."""
    G = f.source
    cur = f
    n = 1
    while True:
        nxt = GroupHom(G, G, f.image_of[cur.image_of], check=False)
        same_ker = np.array_equal(cur.image_of == 0, nxt.image_of == 0)
        same_im = np.unique(cur.image_of).size == np.unique(nxt.image_of).size
        if same_ker and same_im:
            return n, cur
        cur = nxt
        n += 1


def is_internal_direct_sum(G: FiniteGroup, A: NormalSubgroup, B: NormalSubgroup) -> bool:
    """A and B normal, trivially intersecting, with |A||B| = |G| (so G = A x B)."""
    if A.order * B.order != G.order:
        return False
    if int(np.count_nonzero(A.mask & B.mask)) != 1:
        return False
    a, b = np.asarray(A.members), np.asarray(B.members)
    return bool((G.table[np.ix_(a, b)] == G.table[np.ix_(b, a)].T).all())


def fitting_decomposition(f: GroupHom) -> FittingSplit:
    G = _require_endo(f)
    if not is_normal_endomorphism(f):
        raise NotNormal("Fitting decomposition requires a normal endomorphism")
    n, fn = _fitting_chain(f)
    K = fn.kernel()
    im = fn.image()
    I = NormalSubgroup(G, im.members)
    if not I.is_normal() or not is_internal_direct_sum(G, K, I):
        raise InternalContradiction(f"ker f^{n} and Im f^{n} do not split the group")
    return FittingSplit(K, I, n)


def classify_normal_endo(f: GroupHom) -> EndoClassification:
    """Automorphism, Nilpotent (with index) or Neither, read off the Fitting split."""
    split = fitting_decomposition(f)
    G = f.source
    if split.image_part.order == G.order:
        return EndoClassification(EndoKind.AUTOMORPHISM, None, split.exponent)
    if split.image_part.order == 1:
        k, cur = 1, f
        while not cur.is_trivial():
            cur = GroupHom(G, G, f.image_of[cur.image_of], check=False)
            k += 1
        return EndoClassification(EndoKind.NILPOTENT, k, split.exponent)
    # both parts nontrivial: the split itself decomposes G
    return EndoClassification(EndoKind.NEITHER, None, split.exponent)


def automorphic_summand(fs: Sequence[GroupHom]) -> int:
    """Index of the first automorphism among normal endomorphisms whose sum is an automorphism.

    G must be indecomposable and every left-to-right partial sum an endomorphism.
    """
    if not fs:
        raise PreconditionViolated("empty family of endomorphisms")
    G = _require_endo(*fs)
    if not _indecomposable_cached(G):
        raise PreconditionViolated("group is decomposable")
    for k, f in enumerate(fs):
        if not is_normal_endomorphism(f):
            raise PreconditionViolated(f"summand {k} is not a normal endomorphism")
    partial = endo_sum_all(fs)
    for k, s in enumerate(partial):
        if s is None:
            raise PreconditionViolated(f"partial sum up to summand {k} is not an endomorphism")
    total = partial[-1]
    assert total is not None
    if not total.is_bijective():
        raise PreconditionViolated("the total sum is not an automorphism")
    for k, f in enumerate(fs):
        if f.is_bijective():
            return k
    raise NoAutomorphicSummand("no summand is an automorphism although the sum is one")


def _indecomposable_cached(G: FiniteGroup) -> bool:
    from .krull_schmidt import is_indecomposable

    memo = G._memo.get("is_indecomposable")
    if memo is None:
        memo = G._memo["is_indecomposable"] = is_indecomposable(G)
    return memo
