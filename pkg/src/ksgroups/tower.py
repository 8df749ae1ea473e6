"""Finite truncations of inverse systems of finite groups.

A tower is a list of finite groups, coarsest first, with surjective maps
``connecting[k] : levels[k+1] -> levels[k]``.  Everything here is computed
on the truncation; statements about inverse limits are only checked through
these finite shadows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    ContainmentViolated,
    DivisibilityViolated,
    InternalContradiction,
    NoCoherentChain,
    OrderBudgetExceeded,
    PreconditionViolated,
    SearchBudgetExceeded,
)
from .groups import (
    DEFAULT_ORDER_BUDGET,
    FiniteGroup,
    GroupHom,
    IsoFingerprint,
    Subgroup,
    commutator_subgroup,
    identity_hom,
    normal_subgroups,
    quotient,
    verbal_power_subgroup,
)
from .iso import find_isomorphism, fingerprint
from .krull_schmidt import (
    InternalDecomposition,
    all_decompositions,
    cancel_factor,
    complement_splits,
    factor_group,
)
from .search import DEFAULT_SEARCH_BUDGET, NodeCounter, dividing_order_candidates, greedy_generators, iter_homs


@dataclass(frozen=True)
class ProfiniteTower:
    levels: tuple[FiniteGroup, ...]
    connecting: tuple[GroupHom, ...] = ()

    def __post_init__(self) -> None:
        if not self.levels:
            raise PreconditionViolated("a tower needs at least one level")
        if len(self.connecting) != len(self.levels) - 1:
            raise PreconditionViolated("need exactly one connecting map between adjacent levels")

    def __len__(self) -> int:
        return len(self.levels)

    def map_between(self, lower: int, upper: int) -> GroupHom:
        """Composite of connecting maps from ``levels[upper]`` down to ``levels[lower]``."""
        if not 0 <= lower <= upper < len(self.levels):
            raise PreconditionViolated("level indices out of range")
        f = identity_hom(self.levels[upper])
        for k in range(upper - 1, lower - 1, -1):
            f = self.connecting[k].compose(f)
        return f


def tower_from_maps(levels: Sequence[FiniteGroup], maps: Sequence[Sequence[int]], check: bool = False
                    ) -> ProfiniteTower:
    homs = tuple(GroupHom(levels[k + 1], levels[k], m, check=check) for k, m in enumerate(maps))
    return ProfiniteTower(tuple(levels), homs)


@dataclass(frozen=True)
class TowerReport:
    valid: bool
    violations: tuple[str, ...] = ()


def validate_tower(t: ProfiniteTower) -> TowerReport:
    """Check every connecting map is a surjective homomorphism between the right levels."""
    problems = []
    for k, f in enumerate(t.connecting):
        where = f"map from level {k + 2} to level {k + 1}"
        if f.source is not t.levels[k + 1] or f.target is not t.levels[k]:
            problems.append(f"{where}: wrong source or target group")
            continue
        bad = f.first_violation()
        if bad == (-1, -1):
            problems.append(f"{where}: image vector has wrong length or out-of-range entries")
            continue
        if bad is not None:
            problems.append(f"{where}: not a homomorphism (witness pair {bad})")
        if not f.is_surjective():
            problems.append(f"{where}: not surjective")
    return TowerReport(not problems, tuple(problems))


def verbal_quotient_tower(G: FiniteGroup, exponents: Sequence[int]) -> ProfiniteTower:
    """Levels G / G^m for m in ``exponents``, each dividing the next."""
    if not exponents:
        raise PreconditionViolated("at least one exponent is required")
    for m in exponents:
        if m < 1:
            raise DivisibilityViolated("exponents must be positive")
    for a, b in zip(exponents, exponents[1:]):
        if b % a:
            raise DivisibilityViolated(f"{a} does not divide {b}")
    quots = [quotient(G, verbal_power_subgroup(G, m), f"{G.label or 'G'}/{G.label or 'G'}^{m}") for m in exponents]
    maps = []
    for lo, hi in zip(quots, quots[1:]):
        reps = np.full(hi.group.order, -1, dtype=np.int64)
        for g in range(G.order - 1, -1, -1):
            reps[hi.projection.image_of[g]] = g
        maps.append(GroupHom(hi.group, lo.group, lo.projection.image_of[reps], check=False))
    return ProfiniteTower(tuple(q.group for q in quots), tuple(maps))


# ---------------------------------------------------------------------------
# coherent decompositions


@dataclass(frozen=True)
class CoherentDecomposition:
    """One indecomposable decomposition per level.

    ``correspondence[k][j]`` is the level-k factor receiving the image of
    level-(k+1) factor j.  A factor whose image is trivial is assigned to the
    first level-k factor (or -1 when level k is trivial).
    """

    per_level: tuple[InternalDecomposition, ...]
    correspondence: tuple[tuple[int, ...], ...]


def _correspondence(f: GroupHom, upper: InternalDecomposition, lower: InternalDecomposition
                    ) -> tuple[int, ...] | None:
    out = []
    for B in upper.factors:
        img = np.unique(f.image_of[list(B.members)])
        if img.size == 1:
            out.append(0 if lower.factors else -1)
            continue
        for i, A in enumerate(lower.factors):
            if A.mask[img].all():
                out.append(i)
                break
        else:
            return None
    return tuple(out)


def coherence_violation(t: ProfiniteTower, cd: CoherentDecomposition) -> str | None:
    """Check the correspondence invariants of a coherent decomposition."""
    if len(cd.per_level) != len(t.levels):
        return "one decomposition per level is required"
    for k, f in enumerate(t.connecting):
        upper, lower = cd.per_level[k + 1], cd.per_level[k]
        corr = cd.correspondence[k]
        if len(corr) != len(upper.factors):
            return f"level {k + 2}: correspondence length mismatch"
        for j, B in enumerate(upper.factors):
            img = f.image_of[list(B.members)]
            i = corr[j]
            if i < 0:
                if lower.factors or (img != 0).any():
                    return f"level {k + 2}: factor {j} is unassigned"
            elif not lower.factors[i].mask[img].all():
                return f"level {k + 2}: factor {j} does not map into factor {i}"
        for i, A in enumerate(lower.factors):
            src = [x for j, B in enumerate(upper.factors) if corr[j] == i for x in B.members]
            if not src:
                return f"level {k + 1}: factor {i} is not hit by the correspondence"
            gen = t.levels[k].generate(np.unique(f.image_of[src]).tolist())
            if len(gen) != A.order:
                return f"level {k + 1}: factor {i} is not generated by the images assigned to it"
    return None


def tower_decompose(t: ProfiniteTower, budget: int = DEFAULT_SEARCH_BUDGET) -> CoherentDecomposition:
    """First coherent chain of indecomposable decompositions, searching from the deepest level up."""
    decs = [all_decompositions(G) for G in t.levels]
    counter = NodeCounter(budget)
    top = len(t.levels) - 1
    chain: list[InternalDecomposition] = [None] * len(t.levels)  # type: ignore[list-item]
    corrs: list[tuple[int, ...]] = [()] * max(0, top)

    def rec(k: int) -> bool:
        # chain[k + 1] fixed; choose chain[k]
        if k < 0:
            return True
        for d in decs[k]:
            counter.tick()
            corr = _correspondence(t.connecting[k], chain[k + 1], d)
            if corr is None:
                continue
            chain[k], corrs[k] = d, corr
            if rec(k - 1):
                return True
        return False

    try:
        for d in decs[top]:
            counter.tick()
            chain[top] = d
            if rec(top - 1):
                cd = CoherentDecomposition(tuple(chain), tuple(corrs))
                why = coherence_violation(t, cd)
                if why is not None:
                    raise InternalContradiction(f"coherent chain fails its invariants: {why}")
                return cd
    except SearchBudgetExceeded:
        raise NoCoherentChain(f"no coherent chain found within {budget} search nodes") from None
    raise NoCoherentChain("no coherent chain exists among the enumerated decompositions")


@dataclass(frozen=True)
class WBoundRow:
    level: int
    exponent: int
    escaping: int
    bound: float

    @property
    def ok(self) -> bool:
        return self.escaping <= self.bound + 1e-12


def w_bound(t: ProfiniteTower, cd: CoherentDecomposition, exponents: Sequence[int]) -> list[WBoundRow]:
    """Per level and exponent m: number of factors not inside the level's m-th verbal subgroup,
    against log2 of the index of that subgroup."""
    rows = []
    for k, (G, d) in enumerate(zip(t.levels, cd.per_level)):
        for m in exponents:
            V = verbal_power_subgroup(G, m)
            escaping = sum(1 for A in d.factors if not A.issubset(V))
            rows.append(WBoundRow(k, m, escaping, math.log2(G.order // V.order)))
    return rows


# ---------------------------------------------------------------------------
# finite images


@dataclass(frozen=True)
class FinSet:
    """Isomorphism classes of quotients of the tower levels with order <= max_order."""

    max_order: int
    classes: tuple[tuple[IsoFingerprint, FiniteGroup], ...] = field(default=())

    def __len__(self) -> int:
        return len(self.classes)

    def find(self, H: FiniteGroup) -> FiniteGroup | None:
        fp = fingerprint(H)
        for f, R in self.classes:
            if f == fp and find_isomorphism(H, R) is not None:
                return R
        return None

    def __contains__(self, H: FiniteGroup) -> bool:
        return self.find(H) is not None


def _dedup_add(classes: list[tuple[IsoFingerprint, FiniteGroup]], Q: FiniteGroup) -> None:
    fp = fingerprint(Q)
    for f, R in classes:
        if f == fp and find_isomorphism(Q, R) is not None:
            return
    classes.append((fp, Q))


def fin_images(t: ProfiniteTower, max_order: int, budget: int = DEFAULT_ORDER_BUDGET) -> FinSet:
    classes: list[tuple[IsoFingerprint, FiniteGroup]] = []
    for G in t.levels:
        for N in normal_subgroups(G, budget):
            if G.order // N.order <= max_order:
                _dedup_add(classes, quotient(G, N).group)
    classes.sort(key=lambda c: c[1].order)
    return FinSet(max_order, tuple(classes))


@dataclass(frozen=True)
class SameFinReport:
    equal: bool
    only_in_first: tuple[FiniteGroup, ...] = ()
    only_in_second: tuple[FiniteGroup, ...] = ()

    @property
    def witness(self) -> FiniteGroup | None:
        for side in (self.only_in_first, self.only_in_second):
            if side:
                return side[0]
        return None


def same_fin(t1: ProfiniteTower, t2: ProfiniteTower, max_order: int) -> SameFinReport:
    f1, f2 = fin_images(t1, max_order), fin_images(t2, max_order)
    a = tuple(R for _, R in f1.classes if R not in f2)
    b = tuple(R for _, R in f2.classes if R not in f1)
    return SameFinReport(not a and not b, a, b)


# ---------------------------------------------------------------------------
# fiber powers


@dataclass(frozen=True)
class FiberPowerSpec:
    G: FiniteGroup
    G0: Subgroup
    M0: Subgroup
    n: int
    N: Subgroup


@dataclass(frozen=True)
class FiberPower:
    group: FiniteGroup
    description: str
    # element k of ``group`` is (coset of N, coset of M0, ..., coset of M0)
    coordinates: np.ndarray


def _check_spec(spec: FiberPowerSpec) -> None:
    G = spec.G
    for name, S in (("G0", spec.G0), ("M0", spec.M0), ("N", spec.N)):
        if S.parent is not G:
            raise ContainmentViolated(f"{name} is not a subgroup of G")
        if not S.is_normal():
            raise ContainmentViolated(f"{name} is not normal in G")
    if not spec.M0.issubset(spec.G0):
        raise ContainmentViolated("M0 is not contained in G0")
    if not spec.N.issubset(spec.G0):
        raise ContainmentViolated("N is not contained in G0")
    if spec.n < 0:
        raise ContainmentViolated("n must be non-negative")


def fiber_power(spec: FiberPowerSpec, budget: int = DEFAULT_ORDER_BUDGET) -> FiberPower:
    """Tuples (gN, g_1 M0, ..., g_n M0) in G/N x (G/M0)^n with every g_j congruent to g mod G0."""
    _check_spec(spec)
    G, n = spec.G, spec.n
    QN, pN = quotient(G, spec.N)
    QM, pM = quotient(G, spec.M0)
    _, p0 = quotient(G, spec.G0)
    fiber = spec.G0.order // spec.M0.order
    expected = QN.order * fiber ** n
    if expected > budget:
        raise OrderBudgetExceeded(f"fiber power of order {expected} exceeds budget {budget}")

    # G0-class of each coset (well defined because N and M0 lie in G0)
    cls_n = np.zeros(QN.order, dtype=np.int64)
    cls_n[pN.image_of] = p0.image_of
    cls_m = np.zeros(QM.order, dtype=np.int64)
    cls_m[pM.image_of] = p0.image_of
    by_class = {c: np.flatnonzero(cls_m == c) for c in np.unique(cls_m)}

    rows = []
    for c in range(QN.order):
        fibre = by_class[int(cls_n[c])]
        for combo in np.array(np.meshgrid(*([fibre] * n), indexing="ij")).reshape(n, -1).T if n else [()]:
            rows.append((c, *(int(x) for x in combo)))
    E = np.asarray(rows, dtype=np.int64).reshape(len(rows), n + 1)
    if len(rows) != expected:
        raise InternalContradiction(f"fiber power has {len(rows)} elements, expected {expected}")

    radix = [QN.order] + [QM.order] * n
    weights = np.array([math.prod(radix[j + 1:]) for j in range(n + 1)], dtype=object)
    keys = [sum(int(v) * int(w) for v, w in zip(row, weights)) for row in rows]
    index = {k: i for i, k in enumerate(keys)}
    size = len(rows)
    prod = np.empty((size, size, n + 1), dtype=np.int64)
    prod[:, :, 0] = QN.table[E[:, None, 0], E[None, :, 0]]
    for j in range(1, n + 1):
        prod[:, :, j] = QM.table[E[:, None, j], E[None, :, j]]
    flat = prod.reshape(-1, n + 1)
    if math.prod(radix) < 2**62:
        w = np.array([int(x) for x in weights], dtype=np.int64)
        codes = flat @ w
        lookup = np.array(keys, dtype=np.int64)
        order = np.argsort(lookup)
        table = order[np.searchsorted(lookup[order], codes)].reshape(size, size)
    else:
        table = np.array([index[sum(int(v) * int(wt) for v, wt in zip(r, weights))] for r in flat],
                         dtype=np.int64).reshape(size, size)
    label = f"fiber({G.label or 'G'}; n={n})"
    H = FiniteGroup(table, label)
    desc = (f"subgroup of G/N x (G/M0)^{n} with |G/N|={QN.order}, |G0/M0|={fiber}; "
            f"order {size} = {QN.order} * {fiber}^{n}")
    return FiberPower(H, desc, E)


# ---------------------------------------------------------------------------
# image verification


@dataclass(frozen=True)
class ImageWitness:
    level: int
    surjection: GroupHom


def find_surjection(G: FiniteGroup, H: FiniteGroup, counter: NodeCounter) -> GroupHom | None:
    if G.order % H.order or G.exponent % H.exponent:
        return None
    if H.is_abelian:
        ab = G.order // len(commutator_subgroup(G))
        if ab % H.order:
            return None
    gens = greedy_generators(G)
    cands = dividing_order_candidates(G, H, gens)
    for img in iter_homs(G, H, cands, gens, surjective=True, counter=counter):
        return GroupHom(G, H, img, check=False)
    return None


def verify_image(t: ProfiniteTower, H: FiniteGroup, budget: int = DEFAULT_SEARCH_BUDGET) -> ImageWitness | None:
    """First level (0-based, coarsest first) admitting a surjection onto H."""
    counter = NodeCounter(budget)
    for k, L in enumerate(t.levels):
        f = find_surjection(L, H, counter)
        if f is not None:
            return ImageWitness(k, f)
    return None


# ---------------------------------------------------------------------------
# levelwise cancellation


@dataclass(frozen=True)
class LevelwiseCancellation:
    per_level: tuple[GroupHom, ...]      # cancel_factor witness A_k -> B_k at each level
    coherent: tuple[GroupHom, ...]       # isomorphisms induced from the deepest witness
    complements_x: tuple[GroupHom, ...]  # A_{k+1} -> A_k
    complements_y: tuple[GroupHom, ...]  # B_{k+1} -> B_k


def _split_like(L: FiniteGroup, like: FiniteGroup) -> tuple[InternalDecomposition, int]:
    if like.order == 1:
        factors = (L.whole,) if L.order > 1 else ()
        return InternalDecomposition(L, factors), -1
    for N, K in complement_splits(L):
        for idx, F in enumerate((N, K)):
            if F.order == like.order and find_isomorphism(factor_group(F)[0], like) is not None:
                return InternalDecomposition(L, (N, K)), idx
    if L.order == like.order and find_isomorphism(L, like) is not None:
        return InternalDecomposition(L, (L.whole,)), 0
    raise PreconditionViolated(f"level of order {L.order} has no direct factor like the given group")


def _complement_of(d: InternalDecomposition, idx: int) -> tuple[Subgroup, np.ndarray]:
    """Complement subgroup of factor idx and the projection G -> complement (as G elements)."""
    G = d.parent
    if idx < 0:
        return G.whole, np.arange(G.order)
    comps = d.components()
    others = [k for k in range(len(d)) if k != idx]
    if not others:
        return G.trivial, np.zeros(G.order, dtype=np.int64)
    proj = comps[others[0]]
    for k in others[1:]:
        proj = G.table[proj, comps[k]]
    return Subgroup(G, tuple(int(x) for x in np.unique(proj))), proj


def _pushed_splits(t: ProfiniteTower, tG: ProfiniteTower) -> list[tuple[InternalDecomposition, int]]:
    """Split the deepest level, then carry both parts down the connecting maps.

    Independent splits per level need not line up with the connecting maps,
    so only the deepest level is chosen freely.
    """
    depth = len(t)
    out: list[tuple[InternalDecomposition, int]] = [None] * depth  # type: ignore[list-item]
    out[-1] = _split_like(t.levels[-1], tG.levels[-1])
    for k in range(depth - 2, -1, -1):
        d, idx = out[k + 1]
        L, f = t.levels[k], t.connecting[k]
        if idx < 0:
            out[k] = _split_like(L, tG.levels[k])
            continue
        parts = []
        for j, F in enumerate(d.factors):
            parts.append(tuple(int(x) for x in np.unique(f.image_of[list(F.members)])))
        gpart = parts[idx]
        if len(gpart) != tG.levels[k].order or find_isomorphism(factor_group(Subgroup(L, gpart))[0],
                                                                 tG.levels[k]) is None:
            raise PreconditionViolated(f"level {k + 1}: image of the G-part is not like the given group")
        keep = [(j, m) for j, m in enumerate(parts) if len(m) > 1 or j == idx]
        new_idx = [j for j, _ in keep].index(idx)
        dk = InternalDecomposition.from_members(L, [m for _, m in keep])
        if dk.violation() is not None:
            raise PreconditionViolated(f"level {k + 1}: images of the split do not decompose the level")
        out[k] = (dk, new_idx)
    return out


def levelwise_cancellation(tX: ProfiniteTower, tY: ProfiniteTower, tG: ProfiniteTower,
                           budget: int = DEFAULT_SEARCH_BUDGET) -> LevelwiseCancellation:
    """Cancel the G-part level by level from towers X_k = G_k x A_k and Y_k = G_k x B_k.

    Each level is cancelled independently with :func:`cancel_factor`; in
    addition a family of isomorphisms commuting with the connecting maps is
    induced from the deepest witness and verified.
    """
    if not len(tX) == len(tY) == len(tG):
        raise PreconditionViolated("towers must have the same depth")
    depth = len(tX)
    splits_x = _pushed_splits(tX, tG)
    splits_y = _pushed_splits(tY, tG)
    per_level = []
    A_groups, B_groups, projx, projy = [], [], [], []
    for k in range(depth):
        (dx, ix), (dy, iy) = splits_x[k], splits_y[k]
        Asub, px = _complement_of(dx, ix)
        Bsub, py = _complement_of(dy, iy)
        A, embA = factor_group(Asub)
        B, embB = factor_group(Bsub)
        if ix >= 0 and iy >= 0 and len(dx) > 1 and len(dy) > 1:
            w = cancel_factor(tX.levels[k], dx, ix, tY.levels[k], dy, iy, budget)
        else:
            w = find_isomorphism(A, B, budget)
            if w is None:
                raise PreconditionViolated(f"level {k + 1}: complements are not isomorphic")
        per_level.append(w)
        A_groups.append((A, embA))
        B_groups.append((B, embB))
        projx.append(px)
        projy.append(py)

    def restriction(groups, projs, t, k):
        (hi, emb_hi), (lo, emb_lo) = groups[k + 1], groups[k]
        pos_lo = np.full(t.levels[k].order, -1, dtype=np.int64)
        pos_lo[emb_lo.image_of] = np.arange(lo.order)
        img = pos_lo[projs[k][t.connecting[k].image_of[emb_hi.image_of]]]
        return GroupHom(hi, lo, img)

    rx = [restriction(A_groups, projx, tX, k) for k in range(depth - 1)]
    ry = [restriction(B_groups, projy, tY, k) for k in range(depth - 1)]
    coherent: list[GroupHom] = [None] * depth  # type: ignore[list-item]
    coherent[-1] = per_level[-1]
    for k in range(depth - 2, -1, -1):
        up = coherent[k + 1]
        A, B = A_groups[k][0], B_groups[k][0]
        img = np.full(A.order, -1, dtype=np.int64)
        src = rx[k].image_of
        dst = ry[k].image_of[up.image_of]
        for a_hi in range(len(src)):
            a, b = src[a_hi], dst[a_hi]
            if img[a] < 0:
                img[a] = b
            elif img[a] != b:
                raise PreconditionViolated(f"level {k + 1}: deepest witness does not descend")
        if (img < 0).any():
            raise PreconditionViolated(f"level {k + 1}: complement map is not surjective")
        phi = GroupHom(A, B, img)
        if not phi.is_bijective():
            raise InternalContradiction(f"level {k + 1}: induced map is not an isomorphism")
        coherent[k] = phi
    for k in range(depth - 1):
        if not np.array_equal(coherent[k].image_of[rx[k].image_of], ry[k].image_of[coherent[k + 1].image_of]):
            raise InternalContradiction(f"level {k + 1}: induced isomorphisms do not commute")
    return LevelwiseCancellation(tuple(per_level), tuple(coherent), tuple(rx), tuple(ry))
