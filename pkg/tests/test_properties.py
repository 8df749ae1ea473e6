from __future__ import annotations

from collections import Counter

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from ksgroups.checks import shared_corpus
from ksgroups.endo import EndoKind, classify_normal_endo, enumerate_endomorphisms, fitting_decomposition
from ksgroups.groups import FiniteGroup, GroupHom, direct_product, normal_subgroups, quotient, verbal_power_subgroup
from ksgroups.iso import find_isomorphism, fingerprint
from ksgroups.krull_schmidt import decompose, factor_group, is_indecomposable

GROUPS = [G for _, G in shared_corpus(16)]
TINY = [G for G in GROUPS if G.order <= 8]

groups = st.sampled_from(GROUPS)


@st.composite
def relabelled(draw, pool=GROUPS):
    """(G, H, p) where H is G with old element x renamed p[x]; p fixes the identity."""
    G = draw(st.sampled_from(pool))
    rest = draw(st.permutations(range(1, G.order)))
    p = np.array([0, *rest], dtype=np.int64)
    q = np.argsort(p)
    return G, FiniteGroup(p[G.table[np.ix_(q, q)]]), p


@given(relabelled())
def test_fingerprint_is_relabel_invariant(case):
    G, H, _ = case
    assert fingerprint(G) == fingerprint(H)


@given(relabelled())
def test_isomorphism_found_both_ways(case):
    G, H, _ = case
    f, g = find_isomorphism(G, H), find_isomorphism(H, G)
    assert f is not None and g is not None
    assert f.is_bijective() and f.first_violation() is None
    assert f.compose(g).is_bijective()


@given(relabelled(), st.integers(1, 12))
def test_verbal_subgroups_are_transported(case, m):
    G, H, p = case
    moved = sorted(int(p[x]) for x in verbal_power_subgroup(G, m).members)
    assert moved == sorted(verbal_power_subgroup(H, m).members)


@given(groups, st.data())
def test_quotient_projection(G, data):
    N = data.draw(st.sampled_from(normal_subgroups(G)))
    Q = quotient(G, N)
    pi = Q.projection
    assert pi.first_violation() is None and pi.is_surjective()
    assert pi.kernel().members == N.members
    assert Q.group.order * N.order == G.order


@given(st.sampled_from(TINY), st.data())
def test_endomorphisms_compose(G, data):
    endos = enumerate_endomorphisms(G)
    f, g = data.draw(st.sampled_from(endos)), data.draw(st.sampled_from(endos))
    h = f.compose(g)
    assert GroupHom(G, G, h.image_of).first_violation() is None
    assert h in set(endos)


@given(st.sampled_from(TINY), st.data())
def test_fitting_split_of_normal_endos(G, data):
    f = data.draw(st.sampled_from(enumerate_endomorphisms(G, normal_only=True)))
    split = fitting_decomposition(f)
    K, I = split.kernel_part, split.image_part
    assert set(K.members) & set(I.members) == {0}
    assert K.order * I.order == G.order
    kind = classify_normal_endo(f).kind
    if kind is EndoKind.AUTOMORPHISM:
        assert K.order == 1
    if kind is EndoKind.NILPOTENT:
        assert I.order == 1


@given(relabelled())
def test_decomposition_is_relabel_invariant(case):
    G, H, _ = case
    dG, dH = decompose(G), decompose(H)
    assert dG.violation() is None and dH.violation() is None
    assert int(np.prod(dG.orders)) == G.order
    fps = lambda d: Counter(fingerprint(factor_group(F)[0]) for F in d.factors)  # noqa: E731
    assert fps(dG) == fps(dH)
    assert all(is_indecomposable(factor_group(F)[0]) for F in dG.factors)


@given(st.sampled_from([G for G in GROUPS if G.order <= 8]), st.sampled_from([G for G in GROUPS if G.order <= 6]),
       st.integers(1, 12))
def test_verbal_power_of_product(A, B, m):
    P = direct_product(A, B)
    lhs = set(verbal_power_subgroup(P.group, m).members)
    rhs = {a * B.order + b for a in verbal_power_subgroup(A, m).members for b in verbal_power_subgroup(B, m).members}
    assert lhs == rhs
