"""Finite groups stored as Cayley tables, subgroups, homomorphisms and basic constructions.

Element 0 is always the identity.  Groups, subgroups and homomorphisms are
immutable once built; derived data is cached on first use.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .errors import (
    NotAGroup,
    NotAHomomorphism,
    NotAPermutation,
    NotNormal,
    OrderBudgetExceeded,
    PreconditionViolated,
    InternalContradiction,
    SourceTargetMismatch,
)

DEFAULT_ORDER_BUDGET = 20000

# rows of (a*b)*c are compared in blocks of roughly this many entries
_ASSOC_BLOCK = 1 << 22


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=np.int64)
    arr.setflags(write=False)
    return arr


class FiniteGroup:
    """A fully enumerated finite group.

    ``table[a, b]`` is the index of ``a * b``.  Use :func:`build_group_from_table`
    or :func:`build_group_from_permutations` to construct one from untrusted
    data; the bare constructor assumes the table is already a group table.
    """

    identity = 0

    def __init__(self, table: np.ndarray, label: str | None = None):
        self.table = _frozen(table)
        self.order = int(self.table.shape[0])
        self.label = label
        inv = np.argmin(self.table, axis=1)  # position of the 0 entry in each row
        self.inverse = _frozen(inv)
        # per-group memo used by higher modules (normal subgroups, fingerprints, ...)
        self._memo: dict = {}

    def __repr__(self) -> str:
        name = f" {self.label!r}" if self.label else ""
        return f"<FiniteGroup{name} of order {self.order}>"

    def __len__(self) -> int:
        return self.order

    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def conj(self, g: int, x: int) -> int:
        """g x g^-1"""
        return int(self.table[self.table[g, x], self.inverse[g]])

    def power_map(self, m: int) -> np.ndarray:
        """Vector sending every element g to g**m (m >= 0)."""
        if m < 0:
            return self.power_map(-m)[self.inverse]
        result = np.zeros(self.order, dtype=np.int64)
        base = np.arange(self.order)
        while m:
            if m & 1:
                result = self.table[result, base]
            base = self.table[base, base]
            m >>= 1
        return result

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        orders = np.zeros(n, dtype=np.int64)
        ar = np.arange(n)
        cur = ar.copy()
        k = 1
        while True:
            hit = (cur == 0) & (orders == 0)
            orders[hit] = k
            if orders.all():
                break
            cur = self.table[cur, ar]
            k += 1
        orders.setflags(write=False)
        return orders

    @cached_property
    def exponent(self) -> int:
        return int(np.lcm.reduce(self.element_orders))

    @cached_property
    def is_abelian(self) -> bool:
        return bool((self.table == self.table.T).all())

    @cached_property
    def center(self) -> "NormalSubgroup":
        commutes = (self.table == self.table.T).all(axis=1)
        return NormalSubgroup(self, tuple(int(x) for x in np.flatnonzero(commutes)))

    def generate(self, gens: Iterable[int]) -> tuple[int, ...]:
        """Sorted members of the subgroup generated by ``gens``."""
        return tuple(int(x) for x in np.flatnonzero(self._generate_mask(gens)))

    def _generate_mask(self, gens: Iterable[int]) -> np.ndarray:
        gens = np.unique(np.asarray(list(gens), dtype=np.int64))
        mask = np.zeros(self.order, dtype=bool)
        mask[0] = True
        frontier = np.array([0], dtype=np.int64)
        if gens.size == 0:
            return mask
        while frontier.size:
            prod = self.table[np.ix_(frontier, gens)].ravel()
            prod = np.unique(prod[~mask[prod]])
            mask[prod] = True
            frontier = prod
        return mask

    @cached_property
    def whole(self) -> "NormalSubgroup":
        return NormalSubgroup(self, tuple(range(self.order)))

    @cached_property
    def trivial(self) -> "NormalSubgroup":
        return NormalSubgroup(self, (0,))


# ---------------------------------------------------------------------------
# subgroups


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    members: tuple[int, ...]

    def __repr__(self) -> str:
        return f"{type(self).__name__}(order={self.order}, members={list(self.members)})"

    @property
    def order(self) -> int:
        return len(self.members)

    @property
    def key(self) -> tuple[int, tuple[int, ...]]:
        """Canonical sort key: order, then member set."""
        return (len(self.members), self.members)

    def __contains__(self, x: int) -> bool:
        return x in self.member_set

    @cached_property
    def member_set(self) -> frozenset[int]:
        return frozenset(self.members)

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[list(self.members)] = True
        m.setflags(write=False)
        return m

    def is_trivial(self) -> bool:
        return len(self.members) == 1

    def is_whole(self) -> bool:
        return len(self.members) == self.parent.order

    def is_normal(self) -> bool:
        G = self.parent
        m = np.asarray(self.members)
        conj = G.table[G.table[:, m], G.inverse[:, None]]
        return bool(self.mask[conj].all())

    def issubset(self, other: "Subgroup") -> bool:
        return bool(other.mask[list(self.members)].all())


class NormalSubgroup(Subgroup):
    """A subgroup closed under conjugation by its parent."""


def _check_closed(G: FiniteGroup, members: Sequence[int]) -> tuple[int, ...]:
    ms = tuple(sorted({int(x) for x in members}))
    if not ms or ms[0] != 0:
        raise PreconditionViolated("subgroup must contain the identity")
    if ms[-1] >= G.order or ms[0] < 0:
        raise PreconditionViolated("member index out of range")
    mask = np.zeros(G.order, dtype=bool)
    mask[list(ms)] = True
    m = np.asarray(ms)
    if not mask[G.table[np.ix_(m, m)]].all() or not mask[G.inverse[m]].all():
        raise PreconditionViolated("member set is not closed under multiplication and inverses")
    return ms


def make_subgroup(G: FiniteGroup, members: Iterable[int]) -> Subgroup:
    return Subgroup(G, _check_closed(G, list(members)))


def make_normal_subgroup(G: FiniteGroup, members: Iterable[int]) -> NormalSubgroup:
    S = Subgroup(G, _check_closed(G, list(members)))
    if not S.is_normal():
        raise NotNormal(f"subgroup of order {S.order} is not normal")
    return NormalSubgroup(G, S.members)


def as_normal(S: Subgroup) -> NormalSubgroup:
    if isinstance(S, NormalSubgroup):
        return S
    if not S.is_normal():
        raise NotNormal(f"subgroup of order {S.order} is not normal")
    return NormalSubgroup(S.parent, S.members)


def subgroup_product(G: FiniteGroup, subgroups: Iterable[Subgroup]) -> tuple[int, ...]:
    """Members of the subgroup generated by a family of subgroups."""
    gens: list[int] = []
    for S in subgroups:
        gens.extend(S.members)
    return G.generate(gens)


# ---------------------------------------------------------------------------
# homomorphisms


class GroupHom:
    """Total element-wise map ``source -> target`` respecting multiplication."""

    def __init__(self, source: FiniteGroup, target: FiniteGroup, image_of: Sequence[int] | np.ndarray,
                 *, check: bool = True):
        self.source = source
        self.target = target
        self.image_of = _frozen(np.asarray(image_of, dtype=np.int64))
        if check:
            bad = self.first_violation()
            if bad is not None:
                raise NotAHomomorphism("map does not respect multiplication", bad)

    def first_violation(self) -> tuple[int, int] | None:
        """First pair (a, b) with f(ab) != f(a) f(b), or a shape error as (-1, -1)."""
        img = self.image_of
        if img.shape != (self.source.order,) or (img.size and (img.min() < 0 or img.max() >= self.target.order)):
            return (-1, -1)
        lhs = img[self.source.table]
        rhs = self.target.table[img[:, None], img[None, :]]
        diff = lhs != rhs
        if not diff.any():
            return None
        a, b = np.argwhere(diff)[0]
        return (int(a), int(b))

    def __repr__(self) -> str:
        return f"GroupHom({self.source.order} -> {self.target.order}: {self.image_of.tolist()})"

    def __call__(self, x: int) -> int:
        return int(self.image_of[x])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupHom):
            return NotImplemented
        return (self.source is other.source and self.target is other.target
                and bool(np.array_equal(self.image_of, other.image_of)))

    def __hash__(self) -> int:
        return hash((id(self.source), id(self.target), self.image_of.tobytes()))

    @property
    def is_endomorphism(self) -> bool:
        return self.source is self.target

    def compose(self, inner: "GroupHom") -> "GroupHom":
        """``self o inner``: apply ``inner`` first."""
        if inner.target is not self.source:
            raise SourceTargetMismatch("composition of maps with mismatched groups")
        return GroupHom(inner.source, self.target, self.image_of[inner.image_of], check=False)

    def iterate(self, k: int) -> "GroupHom":
        if not self.is_endomorphism:
            raise SourceTargetMismatch("only endomorphisms can be iterated")
        img = np.arange(self.source.order)
        for _ in range(k):
            img = self.image_of[img]
        return GroupHom(self.source, self.source, img, check=False)

    def kernel(self) -> NormalSubgroup:
        return NormalSubgroup(self.source, tuple(int(x) for x in np.flatnonzero(self.image_of == 0)))

    def image(self) -> Subgroup:
        return Subgroup(self.target, tuple(int(x) for x in np.unique(self.image_of)))

    def is_injective(self) -> bool:
        return int(np.count_nonzero(self.image_of == 0)) == 1

    def is_surjective(self) -> bool:
        return np.unique(self.image_of).size == self.target.order

    def is_bijective(self) -> bool:
        return self.source.order == self.target.order and self.is_injective()

    def is_trivial(self) -> bool:
        return not self.image_of.any()

    def inverse(self) -> "GroupHom":
        if not self.is_bijective():
            raise PreconditionViolated("only bijective homomorphisms can be inverted")
        inv = np.empty_like(self.image_of)
        inv[self.image_of] = np.arange(self.source.order)
        return GroupHom(self.target, self.source, inv, check=False)


def identity_hom(G: FiniteGroup) -> GroupHom:
    return GroupHom(G, G, np.arange(G.order), check=False)


def trivial_hom(G: FiniteGroup, H: FiniteGroup) -> GroupHom:
    return GroupHom(G, H, np.zeros(G.order, dtype=np.int64), check=False)


class _ExtensionPlan:
    """BFS spanning tree of <gens> plus all of its Cayley-graph edges.

    Built once per generator tuple; extending a set of images is then one
    vectorized step per BFS layer followed by one vectorized edge check.
    """

    def __init__(self, G: FiniteGroup, gens: Sequence[int]):
        self.gens = np.asarray(gens, dtype=np.int64)
        GT = G.table
        seen = np.zeros(G.order, dtype=bool)
        seen[0] = True
        frontier = np.array([0], dtype=np.int64)
        order = [frontier]
        self.layers: list[tuple[np.ndarray, np.ndarray, np.ndarray]] = []
        while frontier.size and self.gens.size:
            nodes, parents, which = [], [], []
            for k, s in enumerate(self.gens):
                ys = GT[frontier, s]
                fresh = ~seen[ys]
                ys_f, par_f = ys[fresh], frontier[fresh]
                ys_f, first = np.unique(ys_f, return_index=True)
                seen[ys_f] = True
                nodes.append(ys_f)
                parents.append(par_f[first])
                which.append(np.full(ys_f.size, k, dtype=np.int64))
            nodes_a = np.concatenate(nodes)
            if not nodes_a.size:
                break
            self.layers.append((nodes_a, np.concatenate(parents), np.concatenate(which)))
            frontier = np.unique(nodes_a)
            order.append(frontier)
        self.members = np.concatenate(order)
        self.targets = GT[self.members][:, self.gens] if self.gens.size else np.empty((1, 0), dtype=np.int64)


def _plan(G: FiniteGroup, gens: Sequence[int]) -> _ExtensionPlan:
    key = ("extension_plan", tuple(int(g) for g in gens))
    plan = G._memo.get(key)
    if plan is None:
        plan = G._memo[key] = _ExtensionPlan(G, gens)
    return plan


def extend_on_generators(G: FiniteGroup, H: FiniteGroup, gens: Sequence[int], imgs: Sequence[int]
                         ) -> tuple[np.ndarray | None, tuple[int, int] | None]:
    """Propagate ``gens[i] -> imgs[i]`` along the Cayley graph of <gens>.

    Returns ``(img, None)`` where ``img`` is -1 outside the generated subgroup,
    or ``(None, (x, s))`` for the first edge x -> x*s whose image disagrees.
    Agreement on every Cayley-graph edge is equivalent to being a homomorphism.
    """
    plan = _plan(G, gens)
    himg = np.asarray(imgs, dtype=np.int64)
    HT = H.table
    img = np.full(G.order, -1, dtype=np.int64)
    img[0] = 0
    for nodes, parents, which in plan.layers:
        img[nodes] = HT[img[parents], himg[which]]
    if not himg.size:
        return img, None
    bad = img[plan.targets] != HT[img[plan.members][:, None], himg[None, :]]
    if bad.any():
        r, c = np.argwhere(bad)[0]
        return None, (int(plan.members[r]), int(plan.gens[c]))
    return img, None


def hom_from_images(G: FiniteGroup, H: FiniteGroup, generator_images: Mapping[int, int]) -> GroupHom:
    """Extend an assignment on a generating set of G to a homomorphism G -> H."""
    gens = sorted(int(g) for g in generator_images)
    imgs = [int(generator_images[g]) for g in gens]
    if any(not 0 <= h < H.order for h in imgs):
        raise PreconditionViolated("generator image out of range")
    img, clash = extend_on_generators(G, H, gens, imgs)
    if clash is not None:
        raise NotAHomomorphism("generator images violate a relation of the source", clash)
    assert img is not None
    if (img < 0).any():
        raise PreconditionViolated("the given elements do not generate the source group")
    return GroupHom(G, H, img)


# ---------------------------------------------------------------------------
# construction


def build_group_from_table(order: int, table: Sequence[Sequence[int]] | np.ndarray,
                           label: str | None = None) -> FiniteGroup:
    """Validate a Cayley table and wrap it as a group.

    Checks run in the order closure, identity, invertibility, cancellation,
    associativity; the first failure raises :class:`NotAGroup` with a witness.
    """
    if order < 1:
        raise NotAGroup("closure: order must be positive")
    try:
        T = np.asarray(table, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise NotAGroup(f"closure: table is not a rectangular integer matrix ({exc})") from None
    if T.shape != (order, order):
        raise NotAGroup(f"closure: table shape {T.shape} does not match order {order}")
    bad = np.argwhere((T < 0) | (T >= order))
    if bad.size:
        a, b = (int(v) for v in bad[0])
        raise NotAGroup("closure: product outside the element range", (a, b, int(T[a, b])))
    ar = np.arange(order)
    for a in range(order):
        if T[0, a] != a:
            raise NotAGroup("identity: element 0 is not a left identity", (0, a, int(T[0, a])))
        if T[a, 0] != a:
            raise NotAGroup("identity: element 0 is not a right identity", (a, 0, int(T[a, 0])))
    for a in range(order):
        if not (T[a] == 0).any():
            raise NotAGroup("invertibility: element has no right inverse", (a,))
        if not (T[:, a] == 0).any():
            raise NotAGroup("invertibility: element has no left inverse", (a,))
    for a in range(order):
        for line, what in ((T[a], "left"), (T[:, a], "right")):
            if np.unique(line).size != order:
                _, first = np.unique(line, return_index=True)
                dup = min(set(range(order)) - set(first.tolist()))
                orig = int(np.flatnonzero(line == line[dup])[0])
                witness = (a, orig, dup) if what == "left" else (orig, dup, a)
                raise NotAGroup(f"cancellation: {what} multiplication is not injective", witness)
    step = max(1, _ASSOC_BLOCK // (order * order))
    for start in range(0, order, step):
        blk = ar[start:start + step]
        lhs = T[T[blk]]                       # (a*b)*c  indexed [a, b, c]
        rhs = np.take(T[blk], T, axis=1)      # a*(b*c)
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            a, b, c = (int(v) for v in bad[0])
            raise NotAGroup("associativity", (a + start, b, c))
    return FiniteGroup(T, label)


def build_group_from_permutations(degree: int, generators: Sequence[Sequence[int]],
                                  label: str | None = None,
                                  budget: int = DEFAULT_ORDER_BUDGET) -> FiniteGroup:
    """Close a set of permutations of ``0..degree-1`` under composition.

    Elements are numbered in breadth-first discovery order starting from the
    identity.  The product ``p * q`` applies ``p`` first, then ``q``.
    """
    if degree < 1:
        raise NotAPermutation("degree must be positive")
    gens = []
    for g in generators:
        arr = np.asarray(g, dtype=np.int64)
        if arr.shape != (degree,) or sorted(arr.tolist()) != list(range(degree)):
            raise NotAPermutation(f"{list(g)} is not a permutation of 0..{degree - 1}")
        gens.append(arr)
    ident = np.arange(degree)
    elems = [ident]
    index = {ident.tobytes(): 0}
    head = 0
    while head < len(elems):
        p = elems[head]
        head += 1
        for g in gens:
            q = g[p]
            key = q.tobytes()
            if key not in index:
                if len(elems) >= budget:
                    raise OrderBudgetExceeded(f"permutation closure exceeds {budget} elements")
                index[key] = len(elems)
                elems.append(q)
    E = np.stack(elems)
    n = len(elems)
    T = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        rows = E[:, E[i]]  # row j: apply i, then j
        T[i] = [index[r.tobytes()] for r in rows]
    return FiniteGroup(T, label)


class Product(NamedTuple):
    group: FiniteGroup
    inclusions: tuple[GroupHom, GroupHom]
    projections: tuple[GroupHom, GroupHom]


def direct_product(G: FiniteGroup, H: FiniteGroup, label: str | None = None,
                   budget: int = DEFAULT_ORDER_BUDGET) -> Product:
    """G x H with (g, h) stored at index g*|H| + h."""
    n, m = G.order, H.order
    if n * m > budget:
        raise OrderBudgetExceeded(f"product order {n * m} exceeds budget {budget}")
    T = (G.table[:, None, :, None] * m + H.table[None, :, None, :]).reshape(n * m, n * m)
    P = FiniteGroup(T, label or _product_label(G, H))
    ar = np.arange(n * m)
    inc = (GroupHom(G, P, np.arange(n) * m, check=False), GroupHom(H, P, np.arange(m), check=False))
    proj = (GroupHom(P, G, ar // m, check=False), GroupHom(P, H, ar % m, check=False))
    return Product(P, inc, proj)


def _product_label(G: FiniteGroup, H: FiniteGroup) -> str | None:
    if G.label and H.label:
        return f"{G.label} x {H.label}"
    return None


def induced_group(S: Subgroup, label: str | None = None) -> tuple[FiniteGroup, GroupHom]:
    """Turn a subgroup into a standalone group plus its embedding into the parent.

    Members keep their relative order, so the identity stays at index 0.
    """
    G = S.parent
    m = np.asarray(S.members, dtype=np.int64)
    pos = np.full(G.order, -1, dtype=np.int64)
    pos[m] = np.arange(m.size)
    H = FiniteGroup(pos[G.table[np.ix_(m, m)]], label)
    return H, GroupHom(H, G, m, check=False)


def conjugacy_classes(G: FiniteGroup) -> tuple[tuple[int, ...], ...]:
    """Conjugation orbits, ordered by smallest member (so the identity class comes first)."""
    memo = G._memo.get("classes")
    if memo is not None:
        return memo
    seen = np.zeros(G.order, dtype=bool)
    classes = []
    for x in range(G.order):
        if seen[x]:
            continue
        orbit = np.unique(G.table[G.table[:, x], G.inverse])
        seen[orbit] = True
        classes.append(tuple(int(v) for v in orbit))
    result = tuple(classes)
    G._memo["classes"] = result
    return result


def normal_subgroups(G: FiniteGroup, budget: int = DEFAULT_ORDER_BUDGET) -> tuple[NormalSubgroup, ...]:
    """All normal subgroups, sorted by (order, member tuple).

    Every normal subgroup is generated by the conjugacy classes it contains, so
    joining one class at a time starting from the trivial subgroup reaches all
    of them.
    """
    if G.order > budget:
        raise OrderBudgetExceeded(f"group order {G.order} exceeds budget {budget}")
    memo = G._memo.get("normal_subgroups")
    if memo is not None:
        return memo
    classes = conjugacy_classes(G)
    found: dict[bytes, np.ndarray] = {}
    start = np.zeros(G.order, dtype=bool)
    start[0] = True
    found[start.tobytes()] = start
    queue = [start]
    while queue:
        mask = queue.pop()
        for cls in classes[1:]:
            if mask[cls[0]]:
                continue
            joined = G._generate_mask(list(np.flatnonzero(mask)) + list(cls))
            key = joined.tobytes()
            if key not in found:
                found[key] = joined
                queue.append(joined)
    subs = [NormalSubgroup(G, tuple(int(x) for x in np.flatnonzero(m))) for m in found.values()]
    subs.sort(key=lambda s: s.key)
    result = tuple(subs)
    G._memo["normal_subgroups"] = result
    return result


class Quotient(NamedTuple):
    group: FiniteGroup
    projection: GroupHom


def quotient(G: FiniteGroup, N: Subgroup, label: str | None = None) -> Quotient:
    """G/N with cosets numbered by smallest representative; N itself is the identity coset."""
    if N.parent is not G:
        raise SourceTargetMismatch("subgroup belongs to a different group")
    if not N.is_normal():
        raise NotNormal(f"cannot form a quotient by a non-normal subgroup of order {N.order}")
    coset_of = np.full(G.order, -1, dtype=np.int64)
    reps = []
    m = np.asarray(N.members)
    for g in range(G.order):
        if coset_of[g] < 0:
            coset_of[G.table[g, m]] = len(reps)
            reps.append(g)
    r = np.asarray(reps)
    Q = FiniteGroup(coset_of[G.table[np.ix_(r, r)]], label)
    return Quotient(Q, GroupHom(G, Q, coset_of, check=False))


def verbal_power_subgroup(G: FiniteGroup, m: int) -> NormalSubgroup:
    """The subgroup generated by all m-th powers."""
    if m < 1:
        raise PreconditionViolated("exponent must be a positive integer")
    key = ("verbal", m)
    memo = G._memo.get(key)
    if memo is not None:
        return memo
    powers = np.unique(G.power_map(m))
    S = Subgroup(G, G.generate(powers.tolist()))
    if not S.is_normal():
        raise InternalContradiction(f"verbal subgroup for exponent {m} is not normal")
    result = NormalSubgroup(G, S.members)
    G._memo[key] = result
    return result


def commutator_subgroup(G: FiniteGroup, S: Subgroup | None = None) -> tuple[int, ...]:
    """Members of [S, S] (S defaults to G)."""
    s = np.arange(G.order) if S is None else np.asarray(S.members)
    T, inv = G.table, G.inverse
    comm = T[T[inv[s][:, None], inv[s][None, :]], T[s[:, None], s[None, :]]]
    return G.generate(np.unique(comm).tolist())


def derived_series_orders(G: FiniteGroup) -> tuple[int, ...]:
    orders = [G.order]
    S: Subgroup = G.whole
    while True:
        D = Subgroup(G, commutator_subgroup(G, S))
        if D.order == S.order:
            return tuple(orders)
        orders.append(D.order)
        S = D


@dataclass(frozen=True)
class IsoFingerprint:
    """Isomorphism invariants; equal for isomorphic groups, not conversely."""

    order: int
    element_order_histogram: tuple[tuple[int, int], ...]
    abelian: bool
    center_order: int
    derived_series_orders: tuple[int, ...]
    conjugacy_class_sizes: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "element_order_histogram": [list(p) for p in self.element_order_histogram],
            "abelian": self.abelian,
            "center_order": self.center_order,
            "derived_series_orders": list(self.derived_series_orders),
            "conjugacy_class_sizes": list(self.conjugacy_class_sizes),
        }
