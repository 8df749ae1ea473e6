"""Direct decompositions into indecomposable factors, their matching, and cancellation of factors."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from .endo import automorphic_summand, endo_sum_all, is_normal_endomorphism
from .errors import (
    CancellationFailure,
    InternalContradiction,
    NotADecomposition,
    NotIsomorphicAmbient,
    PreconditionViolated,
    UniquenessViolation,
)
from .groups import (
    DEFAULT_ORDER_BUDGET,
    FiniteGroup,
    GroupHom,
    NormalSubgroup,
    Subgroup,
    induced_group,
    make_normal_subgroup,
    normal_subgroups,
)
from .iso import find_isomorphism
from .search import DEFAULT_SEARCH_BUDGET, NodeCounter


@dataclass(frozen=True)
class InternalDecomposition:
    parent: FiniteGroup
    factors: tuple[NormalSubgroup, ...]

    @classmethod
    def from_members(cls, G: FiniteGroup, factors: Iterable[Iterable[int]]) -> "InternalDecomposition":
        return cls(G, tuple(make_normal_subgroup(G, f) for f in factors))

    def __len__(self) -> int:
        return len(self.factors)

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(f.order for f in self.factors)

    def canonical(self) -> "InternalDecomposition":
        return InternalDecomposition(self.parent, tuple(sorted(self.factors, key=lambda f: f.key)))

    def violation(self) -> str | None:
        """Why this is not an internal direct decomposition, or None if it is."""
        return self._violation

    @cached_property
    def _violation(self) -> str | None:
        G = self.parent
        for k, A in enumerate(self.factors):
            if A.parent is not G:
                return f"factor {k} lives in another group"
            if not A.is_normal():
                return f"factor {k} is not normal"
            if A.is_trivial():
                return f"factor {k} is trivial"
        if int(np.prod(self.orders, dtype=np.int64)) != G.order:
            return "factor orders do not multiply to the group order"
        arrays = [np.asarray(F.members) for F in self.factors]
        for a in range(len(arrays)):
            for b in range(a + 1, len(arrays)):
                A, B = arrays[a], arrays[b]
                if not (G.table[A[:, None], B[None, :]] == G.table[B[:, None], A[None, :]].T).all():
                    return f"factors {a} and {b} do not commute"
        # with normal, commuting factors the product of a subfamily is its element-wise product set
        for k, A in enumerate(self.factors):
            rest = np.zeros(1, dtype=np.int64)
            for j, m in enumerate(arrays):
                if j != k:
                    rest = np.unique(G.table[rest[:, None], m[None, :]])
            if int(np.count_nonzero(A.mask[rest])) != 1:
                return f"factor {k} meets the product of the others nontrivially"
        everything = np.zeros(1, dtype=np.int64)
        for m in arrays:
            everything = np.unique(G.table[everything[:, None], m[None, :]])
        if everything.size != G.order:
            return "factors do not generate the group"
        return None

    def validate(self) -> None:
        why = self.violation()
        if why is not None:
            raise NotADecomposition(why)

    @cached_property
    def _components(self) -> tuple[np.ndarray, ...]:
        return tuple(self._compute_components())

    def components(self) -> list[np.ndarray]:
        return list(self._components)

    def _compute_components(self) -> list[np.ndarray]:
        """``comps[k][g]`` is the factor-k component of g (an element of G)."""
        G = self.parent
        prods = np.zeros(1, dtype=np.int64)
        parts: list[np.ndarray] = []
        for F in self.factors:
            m = np.asarray(F.members)
            new = G.table[prods[:, None], m[None, :]].ravel()
            parts = [np.repeat(p, m.size) for p in parts] + [np.tile(m, prods.size)]
            prods = new
        comps = []
        for p in parts:
            c = np.empty(G.order, dtype=np.int64)
            c[prods] = p
            comps.append(c)
        return comps


@dataclass(frozen=True)
class IndecomposabilityReport:
    indecomposable: bool
    trivial: bool
    split: tuple[NormalSubgroup, NormalSubgroup] | None = None


@dataclass(frozen=True)
class MatchResult:
    """``bijection[i]`` is the d2-index matched with d1 factor i; ``witnesses[i]`` maps one to the other."""

    bijection: tuple[int, ...]
    witnesses: tuple[GroupHom, ...]


def factor_group(S: Subgroup) -> tuple[FiniteGroup, GroupHom]:
    """Standalone copy of a subgroup (cached on the parent) with its embedding."""
    G = S.parent
    key = ("induced", S.members)
    memo = G._memo.get(key)
    if memo is None:
        memo = induced_group(S, f"{G.label or 'G'}[{S.order}]" if S.order != G.order else G.label)
        G._memo[key] = memo
    return memo


def _position(G: FiniteGroup, emb: GroupHom) -> np.ndarray:
    pos = np.full(G.order, -1, dtype=np.int64)
    pos[emb.image_of] = np.arange(emb.source.order)
    return pos


# ---------------------------------------------------------------------------
# splits and decompositions, computed inside the normal-subgroup lattice of G.
# A normal subgroup of a direct factor of G is normal in G, so every factor
# met while refining is one of normal_subgroups(G).


class _Lattice:
    def __init__(self, G: FiniteGroup, budget: int):
        self.G = G
        self.subs = normal_subgroups(G, budget)
        self.bits = [sum(1 << x for x in s.members) for s in self.subs]
        self.orders = [s.order for s in self.subs]
        self._splits: dict[int, list[tuple[int, int]]] = {}
        self._decs: dict[int, list[tuple[int, ...]]] = {}

    def below(self, s: int) -> list[int]:
        b = self.bits[s]
        return [t for t in range(len(self.subs)) if self.bits[t] & b == self.bits[t]]

    def splits(self, s: int) -> list[tuple[int, int]]:
        """Unordered complementary pairs (a, b), a < b, of nontrivial normal subgroups inside s."""
        if s in self._splits:
            return self._splits[s]
        n = self.orders[s]
        inside = [t for t in self.below(s) if 1 < self.orders[t] < n]
        out = []
        for x, a in enumerate(inside):
            for b in inside[x + 1:]:
                if self.orders[a] * self.orders[b] == n and (self.bits[a] & self.bits[b]) == 1:
                    out.append((a, b))
        self._splits[s] = out
        return out

    def decompositions(self, s: int) -> list[tuple[int, ...]]:
        """Every decomposition of s into indecomposables, each generated exactly once.

        A decomposition is produced from its smallest factor a and the product
        k of the remaining ones.
        """
        if s in self._decs:
            return self._decs[s]
        if self.orders[s] == 1:
            result: list[tuple[int, ...]] = [()]
        elif not self.splits(s):
            result = [(s,)]
        else:
            result = []
            for a, b in self.splits(s):
                for first, rest in ((a, b), (b, a)):
                    if self.splits(first):
                        continue
                    for d in self.decompositions(rest):
                        if first < d[0]:
                            result.append((first,) + d)
            result.sort()
        self._decs[s] = result
        return result


def _lattice(G: FiniteGroup, budget: int = DEFAULT_ORDER_BUDGET) -> _Lattice:
    lat = G._memo.get("lattice")
    if lat is None:
        lat = _Lattice(G, budget)
        G._memo["lattice"] = lat
    return lat


def complement_splits(G: FiniteGroup, budget: int = DEFAULT_ORDER_BUDGET
                      ) -> list[tuple[NormalSubgroup, NormalSubgroup]]:
    """All unordered pairs (N, K) of nontrivial normal subgroups with G = N x K."""
    lat = _lattice(G, budget)
    top = len(lat.subs) - 1
    return [(lat.subs[a], lat.subs[b]) for a, b in lat.splits(top)]


def indecomposability(G: FiniteGroup) -> IndecomposabilityReport:
    if G.order == 1:
        return IndecomposabilityReport(True, True)
    splits = complement_splits(G)
    return IndecomposabilityReport(not splits, False, splits[0] if splits else None)


def is_indecomposable(G: FiniteGroup) -> bool:
    """True iff G has no complement split.  The trivial group counts as indecomposable;
    use :func:`indecomposability` to tell it apart."""
    return indecomposability(G).indecomposable


def all_decompositions(G: FiniteGroup, budget: int = DEFAULT_ORDER_BUDGET) -> list[InternalDecomposition]:
    """Every decomposition of G into nontrivial indecomposable normal subgroups, canonically ordered."""
    lat = _lattice(G, budget)
    top = len(lat.subs) - 1
    return [InternalDecomposition(G, tuple(lat.subs[i] for i in d)) for d in lat.decompositions(top)]


def decompose(G: FiniteGroup, budget: int = DEFAULT_ORDER_BUDGET) -> InternalDecomposition:
    """Split along the first complement split, recursively, until all factors are indecomposable."""
    lat = _lattice(G, budget)

    def rec(s: int) -> list[int]:
        if lat.orders[s] == 1:
            return []
        sp = lat.splits(s)
        if not sp:
            return [s]
        a, b = sp[0]
        return rec(a) + rec(b)

    factors = sorted(rec(len(lat.subs) - 1))
    return InternalDecomposition(G, tuple(lat.subs[i] for i in factors))


def _check_indecomposable_decomposition(d: InternalDecomposition, which: str) -> None:
    why = d.violation()
    if why is not None:
        raise NotADecomposition(f"{which}: {why}")
    for k, F in enumerate(d.factors):
        if not is_indecomposable(factor_group(F)[0]):
            raise NotADecomposition(f"{which}: factor {k} is decomposable")


def match_decompositions(G: FiniteGroup, d1: InternalDecomposition, d2: InternalDecomposition,
                         budget: int = DEFAULT_SEARCH_BUDGET) -> MatchResult:
    """Pair the factors of two indecomposable decompositions by isomorphism type."""
    if d1.parent is not G or d2.parent is not G:
        raise NotADecomposition("decomposition of a different group")
    _check_indecomposable_decomposition(d1, "first decomposition")
    _check_indecomposable_decomposition(d2, "second decomposition")
    return match_decompositions_unchecked(d1, d2, NodeCounter(budget))


def property_p_match(G: FiniteGroup, d1: InternalDecomposition, d2: InternalDecomposition,
                     i: int) -> tuple[int, GroupHom]:
    """Find the d2 factor isomorphic to d1 factor ``i`` through projection endomorphisms.

    For each k, f_k = pi_i . incl'_k . pi'_k . incl_i is a normal endomorphism
    of H = d1.factors[i]; the f_k sum to the identity, so one of them is an
    automorphism, say f_j, and pi'_j . incl_i : H -> d2.factors[j] is then an
    isomorphism.
    """
    for d, which in ((d1, "first"), (d2, "second")):
        why = d.parent is not G and "different group" or d.violation()
        if why:
            raise PreconditionViolated(f"{which} decomposition invalid: {why}")
    if not 0 <= i < len(d1):
        raise PreconditionViolated(f"factor index {i} out of range")
    H, emb = factor_group(d1.factors[i])
    rep = _indecomposable_report(H)
    if rep.trivial or not rep.indecomposable:
        raise PreconditionViolated(f"factor {i} must be nontrivial and indecomposable")
    pos_h = _position(G, emb)
    c1, c2 = d1.components(), d2.components()
    x = emb.image_of
    fs = [GroupHom(H, H, pos_h[c1[i][c2[k][x]]]) for k in range(len(d2))]
    total = endo_sum_all(fs)[-1]
    if total is None or not np.array_equal(total.image_of, np.arange(H.order)):
        raise InternalContradiction("the f_k do not sum to the identity")
    try:
        j = automorphic_summand(fs)
    except PreconditionViolated as exc:
        raise InternalContradiction(f"projection endomorphisms violate a summand precondition: {exc}") from None

    Gj, emb_j = factor_group(d2.factors[j])
    pos_j = _position(G, emb_j)
    iso = GroupHom(H, Gj, pos_j[c2[j][x]])
    if not iso.is_bijective():
        raise InternalContradiction(f"projection onto factor {j} is not an isomorphism")
    # sigma = (pi'_j incl_i)(gamma pi_i incl'_j) is an idempotent normal endomorphism of G_j;
    # indecomposability forces it to be the identity
    gamma = fs[j].inverse()
    back = GroupHom(Gj, H, gamma.image_of[pos_h[c1[i][emb_j.image_of]]])
    sigma = iso.compose(back)
    if not np.array_equal(sigma.image_of[sigma.image_of], sigma.image_of):
        raise InternalContradiction("sigma is not idempotent")
    if not is_normal_endomorphism(sigma):
        raise InternalContradiction("sigma is not normal")
    if not np.array_equal(sigma.image_of, np.arange(Gj.order)):
        raise InternalContradiction("sigma is not the identity on an indecomposable factor")
    return j, iso


def _indecomposable_report(H: FiniteGroup) -> IndecomposabilityReport:
    rep = H._memo.get("indecomposability")
    if rep is None:
        rep = indecomposability(H)
        H._memo["indecomposability"] = rep
    return rep


def _complement(d: InternalDecomposition, index: int) -> Subgroup:
    G = d.parent
    members = G.generate([x for k, F in enumerate(d.factors) if k != index for x in F.members])
    return Subgroup(G, members)


def cancel_factor(X: FiniteGroup, dX: InternalDecomposition, x_index: int,
                  Y: FiniteGroup, dY: InternalDecomposition, y_index: int,
                  budget: int = DEFAULT_SEARCH_BUDGET) -> GroupHom:
    """Given X = G x A and Y = G' x B with X ~ Y and G ~ G', return an isomorphism A -> B.

    A (resp. B) is the product of the factors of dX (resp. dY) other than the
    distinguished one, as a standalone group (see :func:`factor_group`).
    """
    counter = NodeCounter(budget)
    for d, grp, which in ((dX, X, "X"), (dY, Y, "Y")):
        if d.parent is not grp:
            raise NotADecomposition(f"decomposition of {which} belongs to another group")
        d.validate()
    if not 0 <= x_index < len(dX) or not 0 <= y_index < len(dY):
        raise PreconditionViolated("distinguished factor index out of range")
    if find_isomorphism(X, Y, counter=counter) is None:
        raise NotIsomorphicAmbient("the ambient groups are not isomorphic")
    GX = factor_group(dX.factors[x_index])[0]
    GY = factor_group(dY.factors[y_index])[0]
    if find_isomorphism(GX, GY, counter=counter) is None:
        raise PreconditionViolated("the distinguished factors are not isomorphic")

    A, _ = factor_group(_complement(dX, x_index))
    B, _ = factor_group(_complement(dY, y_index))
    eA, eB = decompose(A), decompose(B)
    try:
        match = match_decompositions_unchecked(eA, eB, counter)
    except UniquenessViolation as exc:
        raise CancellationFailure(f"complements do not match: {exc}") from None
    comps = eA.components()
    img = np.zeros(A.order, dtype=np.int64)
    for i, j in enumerate(match.bijection):
        _, embA = factor_group(eA.factors[i])
        _, embB = factor_group(eB.factors[j])
        posA = _position(A, embA)
        part = embB.image_of[match.witnesses[i].image_of[posA[comps[i]]]]
        img = B.table[img, part]
    iso = GroupHom(A, B, img, check=False)
    if iso.first_violation() is not None or not iso.is_bijective():
        raise CancellationFailure("assembled map is not an isomorphism")
    return iso


def match_decompositions_unchecked(d1: InternalDecomposition, d2: InternalDecomposition,
                                   counter: NodeCounter | None = None) -> MatchResult:
    """Factor matching without re-validating the decompositions (both come from :func:`decompose`)."""
    if len(d1) != len(d2):
        raise UniquenessViolation(f"factor counts differ: {len(d1)} vs {len(d2)}")
    counter = counter or NodeCounter()
    used = [False] * len(d2)
    bijection, witnesses = [], []
    for i, A in enumerate(d1.factors):
        GA = factor_group(A)[0]
        for j, B in enumerate(d2.factors):
            if used[j] or B.order != A.order:
                continue
            iso = _cached_isomorphism(GA, factor_group(B)[0], counter)
            if iso is not None:
                used[j] = True
                bijection.append(j)
                witnesses.append(iso)
                break
        else:
            raise UniquenessViolation(f"factor {i} of order {A.order} has no isomorphic partner")
    return MatchResult(tuple(bijection), tuple(witnesses))


def _cached_isomorphism(GA: FiniteGroup, GB: FiniteGroup, counter: NodeCounter) -> GroupHom | None:
    # factor groups are cached on their parent, so identical factors share these objects
    key = ("iso_to", GB)
    if key not in GA._memo:
        GA._memo[key] = find_isomorphism(GA, GB, counter=counter)
    return GA._memo[key]


def split_with_factor(X: FiniteGroup, order: int, like: FiniteGroup | None = None
                      ) -> tuple[InternalDecomposition, int] | None:
    """First two-factor decomposition of X with a factor of the given order (isomorphic to ``like`` if given)."""
    for N, K in complement_splits(X):
        for idx, F in enumerate((N, K)):
            if F.order != order:
                continue
            if like is not None and find_isomorphism(factor_group(F)[0], like) is None:
                continue
            return InternalDecomposition(X, (N, K)), idx
    return None
