"""Invariant sweeps over the corpus and the tower suite.

Every check returns a :class:`CheckResult`; ``selftest`` in the CLI and the
acceptance tests both run them from :data:`CHECKS`.
"""

from __future__ import annotations

import itertools
from collections import Counter
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .corpus import corpus, cyclic, elementary_abelian, symmetric
from .endo import (
    EndoKind,
    automorphic_summand,
    classify_normal_endo,
    endo_sum,
    endo_sum_all,
    enumerate_endomorphisms,
    fitting_decomposition,
    is_normal_endomorphism,
)
from .errors import GroupError, NoCoherentChain
from .groups import (
    FiniteGroup,
    GroupHom,
    direct_product,
    make_normal_subgroup,
    normal_subgroups,
    verbal_power_subgroup,
)
from .iso import find_isomorphism, fingerprint
from .krull_schmidt import (
    InternalDecomposition,
    all_decompositions,
    cancel_factor,
    decompose,
    factor_group,
    is_indecomposable,
    match_decompositions,
    property_p_match,
)
from .oracles import ORACLE_MAX_ORDER, brute_is_indecomposable, brute_isomorphism, brute_normal_subgroups
from .tower import (
    FiberPowerSpec,
    ProfiniteTower,
    fiber_power,
    fin_images,
    levelwise_cancellation,
    same_fin,
    tower_decompose,
    tower_from_maps,
    validate_tower,
    verbal_quotient_tower,
    verify_image,
    w_bound,
)

MAX_FAILURES_KEPT = 20


@dataclass
class CheckResult:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    failure_count: int = 0
    notes: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.failure_count == 0

    def expect(self, cond: bool, msg: str | Callable[[], str]) -> bool:
        self.checked += 1
        if not cond:
            self.failure_count += 1
            if len(self.failures) < MAX_FAILURES_KEPT:
                self.failures.append(msg() if callable(msg) else msg)
        return cond

    def to_json(self, timing: bool = False) -> dict:
        out = {"name": self.name, "ok": self.ok, "checked": self.checked,
               "failure_count": self.failure_count, "failures": self.failures, "notes": self.notes}
        if timing:
            out["seconds"] = round(self.seconds, 3)
        return out


@dataclass(frozen=True)
class Check:
    name: str
    run: Callable[[int], CheckResult]
    default_max_order: int | None
    lemma_ref: str
    description: str


@lru_cache(maxsize=None)
def _corpus(max_order: int) -> tuple[tuple[str, FiniteGroup], ...]:
    return tuple(corpus(max_order))


def shared_corpus(max_order: int) -> list[tuple[str, FiniteGroup]]:
    """Corpus groups up to max_order, built once per process so caches are shared."""
    full = _corpus(max(max_order, 48))
    return [(n, G) for n, G in full if G.order <= max_order]


def iso_class_representatives(groups: list[tuple[str, FiniteGroup]]) -> list[tuple[str, FiniteGroup, list[str]]]:
    """First corpus entry of every isomorphism class, with the names it stands for."""
    reps: list[tuple[str, FiniteGroup, list[str]]] = []
    for name, G in groups:
        fp = fingerprint(G)
        for rname, R, names in reps:
            if R.order == G.order and fingerprint(R) == fp and find_isomorphism(R, G) is not None:
                names.append(name)
                break
        else:
            reps.append((name, G, [name]))
    return reps


def _timed(fn: Callable[[CheckResult, int], None], name: str) -> Callable[[int], CheckResult]:
    def run(max_order: int) -> CheckResult:
        res = CheckResult(name)
        t0 = time.perf_counter()
        fn(res, max_order)
        res.seconds = time.perf_counter() - t0
        return res
    return run


# ---------------------------------------------------------------------------
# group-core and isomorphism


def _group_axioms(res: CheckResult, max_order: int) -> None:
    for name, G in shared_corpus(max_order):
        T = G.table
        ar = np.arange(G.order)
        res.expect(bool((T[0] == ar).all() and (T[:, 0] == ar).all()), f"{name}: identity law")
        res.expect(bool((T[ar, G.inverse] == 0).all()), f"{name}: inverse law")
        srt = np.sort(T, axis=1)
        res.expect(bool((srt == ar).all() and (np.sort(T, axis=0) == ar[:, None]).all()), f"{name}: Latin square")
        res.expect(bool((T[T[:, :, None], ar[None, None, :]] == T[ar[:, None, None], T[None, :, :]]).all()),
                   f"{name}: associativity")
    res.notes["groups"] = len(shared_corpus(max_order))


def _verbal_product(res: CheckResult, max_order: int) -> None:
    groups = [(n, G) for n, G in shared_corpus(max_order) if G.order > 1]
    pairs = 0
    for (na, A), (nb, B) in itertools.combinations_with_replacement(groups, 2):
        if A.order * B.order > max_order:
            continue
        pairs += 1
        P = direct_product(A, B).group
        for m in range(1, 13):
            lhs = np.asarray(verbal_power_subgroup(P, m).members)
            a = np.asarray(verbal_power_subgroup(A, m).members)
            b = np.asarray(verbal_power_subgroup(B, m).members)
            rhs = np.sort((a[:, None] * B.order + b[None, :]).ravel())
            res.expect(np.array_equal(lhs, rhs), f"({na} x {nb})^{m} differs from {na}^{m} x {nb}^{m}")
    res.notes["pairs"] = pairs


def _oracle_equivalence(res: CheckResult, max_order: int) -> None:
    groups = shared_corpus(min(max_order, ORACLE_MAX_ORDER))
    for name, G in groups:
        ours = [S.members for S in normal_subgroups(G)]
        res.expect(ours == brute_normal_subgroups(G), f"{name}: normal subgroups differ from subset enumeration")
        res.expect(is_indecomposable(G) == brute_is_indecomposable(G), f"{name}: indecomposability differs")
    pairs = 0
    for (na, G), (nb, H) in itertools.combinations_with_replacement(groups, 2):
        if G.order != H.order:
            continue
        pairs += 1
        w = find_isomorphism(G, H)
        res.expect((w is None) == (brute_isomorphism(G, H) is None), f"{na} vs {nb}: isomorphism verdict differs")
        if w is not None:
            res.expect(w.first_violation() is None and w.is_bijective(), f"{na} vs {nb}: invalid witness")
    res.notes.update(groups=len(groups), same_order_pairs=pairs)


def _iso_symmetry(res: CheckResult, max_order: int) -> None:
    groups = shared_corpus(max_order)
    found = 0
    for (na, G), (nb, H) in itertools.combinations(groups, 2):
        if G.order != H.order:
            continue
        f, g = find_isomorphism(G, H), find_isomorphism(H, G)
        res.expect((f is None) == (g is None), f"{na} vs {nb}: asymmetric verdict")
        for w in (f, g):
            if w is not None:
                res.expect(w.first_violation() is None and w.is_bijective(), f"{na} vs {nb}: invalid witness")
        found += f is not None
    for name, G in groups:
        w = find_isomorphism(G, G)
        res.expect(w is not None and w.is_bijective(), f"{name}: no self-isomorphism")
    res.notes["isomorphic_pairs"] = found


# ---------------------------------------------------------------------------
# endomorphism calculus


def _normal_endos(G: FiniteGroup) -> list[GroupHom]:
    return enumerate_endomorphisms(G, normal_only=True, max_order=max(G.order, 16))


def _kernel_mask(img: np.ndarray) -> np.ndarray:
    return img == 0


def _image_mask(img: np.ndarray, n: int) -> np.ndarray:
    m = np.zeros(n, dtype=bool)
    m[img] = True
    return m


def _is_internal_direct_product(G: FiniteGroup, K: np.ndarray, I: np.ndarray) -> bool:
    """Masks K, I: both normal, trivially intersecting, commuting, |K||I| = |G|."""
    if int(K.sum()) * int(I.sum()) != G.order or int((K & I).sum()) != 1:
        return False
    T, inv = G.table, G.inverse
    for M in (K, I):
        x = np.flatnonzero(M)
        conj = T[T[:, x], inv[:, None]]
        if not M[conj].all():
            return False
    k, i = np.flatnonzero(K), np.flatnonzero(I)
    return bool((T[np.ix_(k, i)] == T[np.ix_(i, k)].T).all())


def _fitting_equivalence(res: CheckResult, max_order: int) -> None:
    endos = 0
    for name, G in shared_corpus(min(max_order, 16)):
        for f in _normal_endos(G):
            endos += 1
            powers = [f.image_of]
            while True:  # iterate until kernel and image both repeat
                nxt = f.image_of[powers[-1]]
                if np.array_equal(nxt == 0, powers[-1] == 0) and \
                        np.unique(nxt).size == np.unique(powers[-1]).size:
                    break
                powers.append(nxt)
            stable = len(powers)  # f^stable is the first power whose chain has stopped
            powers.append(f.image_of[powers[-1]])
            kers = [_kernel_mask(p) for p in powers]
            ims = [_image_mask(p, G.order) for p in powers]
            for n in range(1, len(powers) + 1):
                split = _is_internal_direct_product(G, kers[n - 1], ims[n - 1])
                chain = all(np.array_equal(kers[n - 1], kers[k - 1]) and np.array_equal(ims[n - 1], ims[k - 1])
                            for k in range(n, len(powers) + 1))
                res.expect(split == chain, lambda: f"{name}, f={f.image_of.tolist()}, n={n}: "
                                                   f"direct split {split} but stable chain {chain}")
            fs = fitting_decomposition(f)
            res.expect(fs.exponent == stable and np.array_equal(fs.kernel_part.mask, kers[stable - 1])
                       and np.array_equal(fs.image_part.mask, ims[stable - 1]),
                       lambda: f"{name}, f={f.image_of.tolist()}: fitting_decomposition disagrees")
    res.notes["normal_endomorphisms"] = endos


def _dichotomy(res: CheckResult, max_order: int) -> None:
    seen = {"Automorphism": 0, "Nilpotent": 0, "Neither": 0}
    for name, G in shared_corpus(min(max_order, 16)):
        indec = is_indecomposable(G)
        for f in _normal_endos(G):
            c = classify_normal_endo(f)
            seen[c.kind.value] += 1
            if indec:
                res.expect(c.kind is not EndoKind.NEITHER,
                           lambda: f"{name}: f={f.image_of.tolist()} is neither automorphism nor nilpotent")
            if c.kind is EndoKind.AUTOMORPHISM:
                res.expect(f.is_bijective(), f"{name}: non-bijective map classified as automorphism")
            elif c.kind is EndoKind.NILPOTENT:
                res.expect(f.iterate(c.nilpotency_index).is_trivial()
                           and not f.iterate(c.nilpotency_index - 1).is_trivial()
                           if c.nilpotency_index > 1 else f.is_trivial(),
                           f"{name}: wrong nilpotency index")
            else:
                res.expect(not indec, f"{name}: Neither on an indecomposable group")
    res.notes["kinds"] = seen


def _endo_closure(res: CheckResult, max_order: int) -> None:
    sums = 0
    for name, G in shared_corpus(min(max_order, 12)):
        N = _normal_endos(G)
        for phi in N:
            if phi.is_bijective():
                inv = phi.inverse()
                res.expect(inv.first_violation() is None and is_normal_endomorphism(inv),
                           f"{name}: inverse of a normal automorphism is not normal")
            for psi in N:
                s = endo_sum(phi, psi)
                if s is not None:
                    sums += 1
                    res.expect(is_normal_endomorphism(s), f"{name}: a present sum of normal endos is not normal")
                c = phi.compose(psi)
                res.expect(c.first_violation() is None and is_normal_endomorphism(c),
                           f"{name}: a composition of normal endos is not normal")
    res.notes["present_sums"] = sums


def projection_endos(d: InternalDecomposition) -> list[GroupHom]:
    """The idempotents incl_j . pi_j of a decomposition, as endomorphisms of the parent."""
    G = d.parent
    return [GroupHom(G, G, c) for c in d.components()]


def _every_sum_normal(res: CheckResult, max_order: int) -> None:
    products = 0
    for name, G in shared_corpus(min(max_order, 12)):
        d = decompose(G)
        if not 2 <= len(d) <= 3:
            continue
        products += 1
        es = projection_endos(d)
        for r in range(1, len(es) + 1):
            for subset in itertools.combinations(es, r):
                partial = endo_sum_all(subset)
                res.expect(all(p is not None and is_normal_endomorphism(p) for p in partial),
                           f"{name}: a partial sum of projections is not a normal endomorphism")
        total = endo_sum_all(es)[-1]
        res.expect(total is not None and np.array_equal(total.image_of, np.arange(G.order)),
                   f"{name}: the projections do not sum to the identity")
    res.notes["products"] = products


def _two_summands(res: CheckResult, max_order: int) -> None:
    hits = 0
    for name, G in shared_corpus(min(max_order, 16)):
        if not is_indecomposable(G):
            continue
        N = _normal_endos(G)
        for phi, psi in itertools.product(N, repeat=2):
            s = endo_sum(phi, psi)
            if s is None or not s.is_bijective():
                continue
            hits += 1
            if res.expect(phi.is_bijective() or psi.is_bijective(),
                          f"{name}: automorphic sum with no automorphic summand"):
                k = automorphic_summand([phi, psi])
                res.expect((phi, psi)[k].is_bijective() and (k == 0 or not phi.is_bijective()),
                           f"{name}: automorphic_summand returned the wrong index")
    res.notes["automorphic_sums"] = hits


def _two_summands_unrestricted(res: CheckResult, max_order: int) -> None:
    """Exploratory: the same statement with 'normal' dropped.  Counterexamples are
    recorded in the notes and never count as failures."""
    examples = []
    tried = 0
    for name, G in shared_corpus(min(max_order, 16)):
        if not is_indecomposable(G) or G.is_abelian:
            continue
        E = enumerate_endomorphisms(G, max_order=max(G.order, 16))
        for phi, psi in itertools.product(E, repeat=2):
            s = endo_sum(phi, psi)
            if s is None or not s.is_bijective():
                continue
            tried += 1
            res.checked += 1
            if not (phi.is_bijective() or psi.is_bijective()):
                examples.append({"group": name, "phi": phi.image_of.tolist(), "psi": psi.image_of.tolist(),
                                 "phi_normal": is_normal_endomorphism(phi),
                                 "psi_normal": is_normal_endomorphism(psi)})
    res.notes.update(automorphic_sums=tried, counterexamples=len(examples), first_examples=examples[:3])


# ---------------------------------------------------------------------------
# Krull-Schmidt


def _decompose_existence(res: CheckResult, max_order: int) -> None:
    for name, G in shared_corpus(max_order):
        d = decompose(G)
        res.expect(d.violation() is None, lambda: f"{name}: {d.violation()}")
        res.expect(int(np.prod(d.orders)) == G.order, f"{name}: factor orders do not multiply to |G|")
        res.expect(all(is_indecomposable(factor_group(F)[0]) for F in d.factors),
                   f"{name}: a factor is decomposable")


ALL_PAIRS_LIMIT = 40


def _ks_uniqueness(res: CheckResult, max_order: int) -> None:
    """All decompositions of each isomorphism class are matched.  Classes with many
    decompositions are matched against the canonical one (matching is transitive);
    smaller ones pair by pair."""
    reps = iso_class_representatives(shared_corpus(max_order))
    total_decs = 0
    pp_calls = 0
    for name, G, _ in reps:
        decs = all_decompositions(G)
        total_decs += len(decs)
        canon = decompose(G)
        res.expect(any(d.factors == canon.factors for d in decs) or G.order == 1,
                   f"{name}: decompose result missing from the exhaustive list")
        if len(decs) <= ALL_PAIRS_LIMIT:
            pairs = list(itertools.combinations_with_replacement(decs, 2))
        else:
            pairs = [(d, canon) for d in decs]
        fp_canon = Counter(fingerprint(factor_group(F)[0]) for F in canon.factors)
        for d1, d2 in pairs:
            m = match_decompositions(G, d1, d2)
            ok = sorted(m.bijection) == list(range(len(d2)))
            for i, (j, w) in enumerate(zip(m.bijection, m.witnesses)):
                ok &= w.first_violation() is None and w.is_bijective()
            res.expect(ok, f"{name}: invalid match between two decompositions")
            fp = Counter(fingerprint(factor_group(F)[0]) for F in d1.factors)
            res.expect(fp == fp_canon, f"{name}: fingerprint multisets differ")
            for i in range(len(d1)):
                pp_calls += 1
                j, iso = property_p_match(G, d1, d2, i)
                target = factor_group(d2.factors[j])[0]
                partner = factor_group(d2.factors[m.bijection[i]])[0]
                res.expect(iso.first_violation() is None and iso.is_bijective()
                           and find_isomorphism(target, partner) is not None,
                           f"{name}: property-P target differs in isomorphism class from the matched factor")
    res.notes.update(iso_classes=len(reps), decompositions=total_decs, property_p_calls=pp_calls)


def _cancellation(res: CheckResult, max_order: int) -> None:
    rest = shared_corpus(max_order)
    cancelled = 0
    for gs, Gp in rest:
        if Gp.order == 1:
            continue
        for (na, A), (nb, B) in itertools.combinations_with_replacement(rest, 2):
            if A.order != B.order or Gp.order * A.order > max_order:
                continue
            PX, PY = direct_product(Gp, A), direct_product(Gp, B)
            X, Y = PX.group, PY.group
            if find_isomorphism(X, Y) is None:
                res.expect(find_isomorphism(A, B) is None, f"{gs} x {na} not iso to {gs} x {nb} yet {na} ~ {nb}")
                continue
            res.expect(find_isomorphism(A, B) is not None, f"{gs} x {na} ~ {gs} x {nb} but {na} !~ {nb}")
            dX = _product_decomposition(PX)
            dY = _product_decomposition(PY)
            try:
                w = cancel_factor(X, dX, 0, Y, dY, 0)
            except GroupError as exc:
                res.expect(False, f"{gs}: cancelling from {na} / {nb} raised {exc.name}: {exc}")
                continue
            cancelled += 1
            res.expect(w.first_violation() is None and w.is_bijective() and w.source.order == A.order,
                       f"{gs}: {na} -> {nb} witness invalid")
    res.notes["cancelled_triples"] = cancelled


def _product_decomposition(P) -> InternalDecomposition:
    """The two factors of an external product, as normal subgroups (G-part first).

    A trivial right factor is dropped so the decomposition stays valid."""
    X = P.group
    parts = [tuple(sorted(int(x) for x in inc.image_of)) for inc in P.inclusions]
    parts = [p for p in parts if len(p) > 1] or [(0,)]
    return InternalDecomposition.from_members(X, parts)


# ---------------------------------------------------------------------------
# towers


def rank_tower(p: int, rank: int) -> ProfiniteTower:
    """(C_p)^1 <- (C_p)^2 <- ... <- (C_p)^rank, each map dropping the last coordinate."""
    levels = [elementary_abelian(p, r) for r in range(1, rank + 1)]
    maps = [[x // p for x in range(p ** (r + 1))] for r in range(1, rank)]
    return tower_from_maps(levels, maps, check=True)


def tower_suite() -> list[tuple[str, ProfiniteTower, tuple[int, ...]]]:
    """Named towers with the exponents used for verbal-subgroup bounds."""
    C8xC27 = direct_product(cyclic(8), cyclic(27)).group
    S3xC4 = direct_product(symmetric(3), cyclic(4)).group
    C2xC8 = direct_product(cyclic(2), cyclic(8)).group
    return [
        ("C8 verbal (2,4,8)", verbal_quotient_tower(cyclic(8), (2, 4, 8)), (2, 4, 8)),
        ("C36 verbal (6,36)", verbal_quotient_tower(cyclic(36), (6, 36)), (2, 3, 6, 36)),
        ("C8xC27 verbal (6,36,216)", verbal_quotient_tower(C8xC27, (6, 36, 216)), (2, 3, 4, 6, 8, 9, 12)),
        ("C2xC8 verbal (2,4,8)", verbal_quotient_tower(C2xC8, (2, 4, 8)), (2, 4, 8)),
        ("S3xC4 verbal (6,12)", verbal_quotient_tower(S3xC4, (6, 12)), (2, 3, 4, 6, 12)),
        ("C2 rank tower to 4", rank_tower(2, 4), (2, 4)),
        ("C3 rank tower to 3", rank_tower(3, 3), (3, 9)),
    ]


def _tower_validity(res: CheckResult, max_order: int) -> None:
    for name, t, _ in tower_suite():
        res.expect(validate_tower(t).valid, f"{name}: invalid tower")
    C2 = cyclic(2)
    bad = tower_from_maps([C2, C2], [[0, 0]])
    rep = validate_tower(bad)
    res.expect(not rep.valid and "level" in " ".join(rep.violations), "trivial map C2 <- C2 not reported")


def _w_bound(res: CheckResult, max_order: int) -> None:
    rows = 0
    for name, t, exps in tower_suite():
        try:
            cd = tower_decompose(t)
        except NoCoherentChain as exc:
            res.expect(False, f"{name}: no coherent chain ({exc})")
            continue
        for row in w_bound(t, cd, exps):
            rows += 1
            res.expect(row.ok, f"{name}, level {row.level + 1}, m={row.exponent}: "
                               f"{row.escaping} escaping factors > bound {row.bound:.3f}")
    res.notes["rows"] = rows


def _fin_sets(res: CheckResult, max_order: int) -> None:
    suite = {name: t for name, t, _ in tower_suite()}
    for name, t in suite.items():
        prev = None
        for M in (1, 2, 4, 8, 16):
            fs = fin_images(t, M)
            res.expect(all(R.order <= M for _, R in fs.classes), f"{name}: class above max_order {M}")
            if prev is not None:
                res.expect(all(R in fs for _, R in prev.classes), f"{name}: fin not monotone at {M}")
            prev = fs
    t8 = suite["C8 verbal (2,4,8)"]
    res.expect(sorted(R.order for _, R in fin_images(t8, 8).classes) == [1, 2, 4, 8], "fin(C8 tower) wrong")
    r2, r3 = rank_tower(2, 2), rank_tower(2, 3)
    rep = same_fin(t8, r3, 4)
    res.expect(not rep.equal and rep.witness is not None and rep.witness.order == 4 and
               fingerprint(rep.witness) == fingerprint(cyclic(4)), "C8 vs rank towers: expected witness C4")
    res.expect(same_fin(r3, rank_tower(2, 4), 8).equal, "shifted rank towers differ at max_order 8")
    res.expect(same_fin(r2, r2, 4).equal, "a tower differs from itself")


def fiber_power_specs() -> list[tuple[str, FiberPowerSpec]]:
    """Specs over elementary abelian 2-groups (all outputs have order <= 16)."""
    V2, V3, C2 = elementary_abelian(2, 2), elementary_abelian(2, 3), cyclic(2)
    N = make_normal_subgroup

    def spec(G, G0, M0, n, Nn):
        return FiberPowerSpec(G, N(G, G0), N(G, M0), n, N(G, Nn))

    return [
        ("V2, |G0|=2, n=1", spec(V2, (0, 2), (0,), 1, (0,))),
        ("V2, G0=V2, n=1", spec(V2, range(4), (0,), 1, (0,))),
        ("V2, G0=V2, M0=N=C2, n=1", spec(V2, range(4), (0, 1), 1, (0, 2))),
        ("V2, |G0|=2, N=G0, n=2", spec(V2, (0, 1), (0,), 2, (0, 1))),
        ("V3, |G0|=2, n=1", spec(V3, (0, 1), (0,), 1, (0,))),
        ("V3, |G0|=4, M0=C2, N=C2, n=2", spec(V3, (0, 1, 2, 3), (0, 1), 2, (0, 2))),
        ("V3, |G0|=2, N=G0, n=0", spec(V3, (0, 1), (0,), 0, (0, 1))),
        ("C2, G0=C2, n=3", spec(C2, (0, 1), (0,), 3, (0,))),
    ]


def other_fiber_power_specs() -> list[tuple[str, FiberPowerSpec]]:
    C4, S3 = cyclic(4), symmetric(3)
    N = make_normal_subgroup
    A3 = tuple(verbal_power_subgroup(S3, 2).members)
    return [
        ("C4, |G0|=2, n=1", FiberPowerSpec(C4, N(C4, (0, 2)), N(C4, (0,)), 1, N(C4, (0,)))),
        ("S3, G0=A3, n=1", FiberPowerSpec(S3, N(S3, A3), N(S3, (0,)), 1, N(S3, (0,)))),
        ("S3, G0=A3, N=A3, n=2", FiberPowerSpec(S3, N(S3, A3), N(S3, (0,)), 2, N(S3, A3))),
        ("S3, G0=S3, M0=A3, n=2", FiberPowerSpec(S3, N(S3, range(6)), N(S3, A3), 2, N(S3, (0,)))),
    ]


def _fiber_power(res: CheckResult, max_order: int) -> None:
    tower = rank_tower(2, 4)
    located = 0
    for name, spec in fiber_power_specs() + other_fiber_power_specs():
        fp = fiber_power(spec)
        law = (spec.G.order // spec.N.order) * (spec.G0.order // spec.M0.order) ** spec.n
        res.expect(fp.group.order == law, f"{name}: order {fp.group.order} != {law}")
    for name, spec in fiber_power_specs():
        fp = fiber_power(spec)
        w = verify_image(tower, fp.group)
        if res.expect(w is not None, f"{name}: no level of the rank-4 tower maps onto the fiber power"):
            located += 1
            res.expect(w.surjection.first_violation() is None and w.surjection.is_surjective()
                       and tower.levels[w.level].order >= fp.group.order,
                       f"{name}: invalid surjection witness")
    res.notes["located"] = located


def cancellation_towers() -> list[tuple[str, ProfiniteTower, ProfiniteTower, ProfiniteTower]]:
    def v(G, e):
        return verbal_quotient_tower(G, e)

    C2, C4, C8, S3 = cyclic(2), cyclic(4), cyclic(8), symmetric(3)
    dp = lambda a, b: direct_product(a, b).group  # noqa: E731
    return [
        ("C2xC8 vs C8xC2, G=C2", v(dp(C2, C8), (2, 4, 8)), v(dp(C8, C2), (2, 4, 8)), v(C2, (2, 4, 8))),
        ("S3xC4 vs C4xS3, G=S3", v(dp(S3, C4), (6, 12)), v(dp(C4, S3), (6, 12)), v(S3, (6, 12))),
        ("C2xC2xC4 vs C4xC2xC2, G=C2", v(dp(dp(C2, C2), C4), (2, 4)), v(dp(C4, dp(C2, C2)), (2, 4)),
         v(C2, (2, 4))),
        ("C4xC8 vs C8xC4, G=C4", v(dp(C4, C8), (2, 4, 8)), v(dp(C8, C4), (2, 4, 8)), v(C4, (2, 4, 8))),
    ]


def _levelwise_cancellation(res: CheckResult, max_order: int) -> None:
    for name, tX, tY, tG in cancellation_towers():
        try:
            lc = levelwise_cancellation(tX, tY, tG)
        except GroupError as exc:
            res.expect(False, f"{name}: {exc.name}: {exc}")
            continue
        for k, w in enumerate(lc.per_level):
            res.expect(w.first_violation() is None and w.is_bijective(), f"{name}: level {k + 1} witness invalid")
        for k in range(len(lc.coherent) - 1):
            lhs = lc.coherent[k].image_of[lc.complements_x[k].image_of]
            rhs = lc.complements_y[k].image_of[lc.coherent[k + 1].image_of]
            res.expect(np.array_equal(lhs, rhs), f"{name}: witnesses at levels {k + 1},{k + 2} do not commute")


CHECKS: dict[str, Check] = {c.name: c for c in [
    Check("group-axioms", _timed(_group_axioms, "group-axioms"), 64, "group axioms",
          "identity, inverse, Latin-square and associativity laws on every corpus table"),
    Check("oracle-equivalence", _timed(_oracle_equivalence, "oracle-equivalence"), 12, "brute-force oracles",
          "normal subgroups, indecomposability and isomorphism agree with brute force"),
    Check("iso-symmetry", _timed(_iso_symmetry, "iso-symmetry"), 48, "isomorphism symmetry",
          "find_isomorphism(G,H) present iff find_isomorphism(H,G); witnesses bijective"),
    Check("verbal-product", _timed(_verbal_product, "verbal-product"), 48, "verbal subgroups of products",
          "(A x B)^m = A^m x B^m setwise for m <= 12"),
    Check("fitting", _timed(_fitting_equivalence, "fitting"), 16, "Fitting's lemma",
          "G = ker f^n (+) Im f^n iff the kernel and image chains are stable from n"),
    Check("dichotomy", _timed(_dichotomy, "dichotomy"), 16, "automorphism-or-nilpotent dichotomy",
          "normal endomorphisms of indecomposable groups are automorphisms or nilpotent"),
    Check("endo-closure", _timed(_endo_closure, "endo-closure"), 12, "closure of normal endomorphisms",
          "sums, compositions and inverses of normal endomorphisms are normal"),
    Check("projection-sums", _timed(_every_sum_normal, "projection-sums"), 12, "sums of projection idempotents",
          "partial sums of the idempotents of a decomposition are normal; the full sum is the identity"),
    Check("two-summands", _timed(_two_summands, "two-summands"), 16, "automorphic summand of two normal endomorphisms",
          "an automorphic sum of two normal endomorphisms has an automorphic summand"),
    Check("two-summands-unrestricted", _timed(_two_summands_unrestricted, "two-summands-unrestricted"), 16,
          "automorphic summand, normality dropped (exploratory)",
          "records sums of arbitrary endomorphisms with no automorphic summand; never fails"),
    Check("decompose", _timed(_decompose_existence, "decompose"), 64, "Krull-Schmidt existence",
          "decompose returns a valid decomposition into indecomposables"),
    Check("ks-uniqueness", _timed(_ks_uniqueness, "ks-uniqueness"), 32, "Krull-Schmidt uniqueness",
          "all decompositions match, both by isomorphism search and through projection endomorphisms"),
    Check("cancellation", _timed(_cancellation, "cancellation"), 48, "cancellation of finite direct factors",
          "G x A ~ G x B gives an explicit isomorphism A -> B"),
    Check("towers", _timed(_tower_validity, "towers"), None, "inverse systems",
          "suite towers validate; a non-surjective map is reported"),
    Check("w-bound", _timed(_w_bound, "w-bound"), None, "escaping-factor bound",
          "factors escaping a verbal subgroup are at most log2 of the quotient order"),
    Check("fin", _timed(_fin_sets, "fin"), None, "finite image sets",
          "fin_images examples, monotonicity in max_order, same_fin witnesses"),
    Check("fiber-power", _timed(_fiber_power, "fiber-power"), None, "fiber powers and their images",
          "order law on every spec; verify_image locates each elementary abelian fiber power"),
    Check("levelwise-cancellation", _timed(_levelwise_cancellation, "levelwise-cancellation"), None,
          "levelwise cancellation on towers", "cancellation witnesses commute with connecting maps"),
]}


def run_checks(names: list[str] | None = None, max_order: int | None = None) -> list[CheckResult]:
    """Run the named checks (all by default).  ``max_order`` caps each check's own default."""
    out = []
    for name in names or list(CHECKS):
        c = CHECKS[name]
        mo = c.default_max_order or 0
        if max_order is not None and c.default_max_order is not None:
            mo = min(mo, max_order)
        out.append(c.run(mo))
    return out
