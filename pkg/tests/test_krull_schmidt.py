from __future__ import annotations

from collections import Counter
import itertools

import numpy as np
import pytest

from ksgroups.corpus import cyclic, named_group, quaternion, symmetric
from ksgroups.errors import NotADecomposition, NotIsomorphicAmbient, PreconditionViolated
from ksgroups.groups import direct_product, normal_subgroups
from ksgroups.iso import find_isomorphism, fingerprint
from ksgroups.krull_schmidt import (
    InternalDecomposition,
    all_decompositions,
    cancel_factor,
    complement_splits,
    decompose,
    factor_group,
    indecomposability,
    is_indecomposable,
    match_decompositions,
    property_p_match,
    split_with_factor,
)
from ksgroups.oracles import brute_is_indecomposable


def dec(G, *factors):
    return InternalDecomposition.from_members(G, factors)


def brute_split_count(G):
    subs = [N for N in normal_subgroups(G) if 1 < N.order < G.order]
    return sum(1 for N, K in itertools.combinations(subs, 2)
               if N.order * K.order == G.order and not set(N.members) & set(K.members) - {0})


class TestSplits:
    def test_c6(self):
        (N, K), = complement_splits(cyclic(6))
        assert (N.order, K.order) == (2, 3)

    def test_q8(self):
        assert complement_splits(quaternion()) == [] and brute_split_count(quaternion()) == 0

    def test_klein(self):
        V = named_group("elementary_abelian:2:2")
        assert len(complement_splits(V)) == 3 == brute_split_count(V)


class TestIndecomposable:
    @pytest.mark.parametrize("name, expected", [
        ("cyclic:4", True), ("cyclic:6", False), ("dihedral:4", True), ("quaternion:8", True),
        ("symmetric:3", True), ("dihedral:6", False), ("symmetric:4", True), ("cyclic:2*cyclic:2", False),
    ])
    def test_examples(self, name, expected):
        G = named_group(name)
        assert is_indecomposable(G) == expected
        if G.order <= 12:
            assert brute_is_indecomposable(G) == expected

    def test_trivial_flag(self):
        rep = indecomposability(named_group("trivial"))
        assert rep.indecomposable and rep.trivial
        assert not indecomposability(cyclic(2)).trivial


class TestDecompose:
    def test_trivial(self):
        assert len(decompose(named_group("trivial"))) == 0

    def test_c6(self):
        assert sorted(decompose(cyclic(6)).orders) == [2, 3]

    @pytest.mark.parametrize("spec", ["cyclic:2*cyclic:2*symmetric:3", "cyclic:2*dihedral:6",
                                      "dihedral:6*cyclic:2"])
    def test_c2_c2_s3_regroupings(self, spec):
        G = named_group(spec)
        d = decompose(G)
        got = Counter(fingerprint(factor_group(F)[0]) for F in d.factors)
        want = Counter(fingerprint(H) for H in (cyclic(2), cyclic(2), symmetric(3)))
        assert got == want
        assert d.violation() is None

    def test_canonical_order(self):
        d = decompose(named_group("symmetric:3*cyclic:4"))
        assert list(d.factors) == sorted(d.factors, key=lambda F: F.key)

    def test_invalid_decomposition(self):
        G = cyclic(4)
        with pytest.raises(NotADecomposition):
            dec(G, (0, 2), (0, 2)).validate()


class TestAllDecompositions:
    def test_counts(self):
        # C2^2: 3 unordered pairs of lines; C2^3: 168 ordered bases / 3! = 28
        assert len(all_decompositions(named_group("elementary_abelian:2:2"))) == 3
        assert len(all_decompositions(named_group("elementary_abelian:2:3"))) == 28
        assert len(all_decompositions(cyclic(30))) == 1

    def test_each_once_and_valid(self):
        G = named_group("cyclic:2*cyclic:2*symmetric:3")
        ds = all_decompositions(G)
        assert len({d.factors for d in ds}) == len(ds)
        assert all(d.violation() is None for d in ds)


class TestMatch:
    def test_self(self):
        G = named_group("cyclic:2*symmetric:3")
        d = decompose(G)
        assert match_decompositions(G, d, d).bijection == (0, 1)

    def test_klein_two_splits(self):
        V = named_group("elementary_abelian:2:2")
        m = match_decompositions(V, dec(V, (0, 2), (0, 1)), dec(V, (0, 3), (0, 1)))
        assert sorted(m.bijection) == [0, 1]
        assert all(w.is_bijective() and w.source.order == 2 for w in m.witnesses)

    def test_reordered(self):
        G = cyclic(6)
        d = decompose(G)
        rev = InternalDecomposition(G, d.factors[::-1])
        assert match_decompositions(G, d, rev).bijection == (1, 0)

    def test_rejects_decomposable_factor(self):
        G = named_group("cyclic:2*cyclic:6")
        coarse = dec(G, (0, 6), tuple(range(6)))
        with pytest.raises(NotADecomposition):
            match_decompositions(G, coarse, decompose(G))


class TestPropertyP:
    def test_klein_example(self):
        V = named_group("elementary_abelian:2:2")
        d1, d2 = dec(V, (0, 2), (0, 1)), dec(V, (0, 3), (0, 1))
        j, iso = property_p_match(V, d1, d2, 0)
        assert j == 0 and iso.image_of.tolist() == [0, 1]

    def test_c2_c3_identity(self):
        G = direct_product(cyclic(2), cyclic(3)).group
        d = decompose(G)
        for i in range(2):
            j, iso = property_p_match(G, d, d, i)
            assert j == i and np.array_equal(iso.image_of, np.arange(iso.source.order))

    def test_sheared_basis_of_c2_cubed(self):
        G = named_group("elementary_abelian:2:3")
        std = dec(G, (0, 4), (0, 2), (0, 1))
        for other in all_decompositions(G):
            m = match_decompositions(G, std, other)
            for i in range(3):
                j, iso = property_p_match(G, std, other, i)
                assert iso.is_bijective() and iso.first_violation() is None
                assert other.factors[j].order == other.factors[m.bijection[i]].order

    def test_nonabelian(self):
        G = named_group("symmetric:3*cyclic:2*cyclic:2")
        ds = all_decompositions(G)
        for d1, d2 in itertools.product(ds[:4], repeat=2):
            for i in range(len(d1)):
                j, iso = property_p_match(G, d1, d2, i)
                assert find_isomorphism(factor_group(d1.factors[i])[0], factor_group(d2.factors[j])[0])

    def test_decomposable_factor(self):
        G = named_group("cyclic:2*cyclic:6")
        coarse = dec(G, (0, 6), tuple(range(6)))
        with pytest.raises(PreconditionViolated):
            property_p_match(G, coarse, decompose(G), 1)


class TestCancel:
    def _cancel(self, xs, ys, g_order):
        X, Y = named_group(xs), named_group(ys)
        dx, ix = split_with_factor(X, g_order)
        dy, iy = split_with_factor(Y, g_order, like=factor_group(dx.factors[ix])[0])
        return cancel_factor(X, dx, ix, Y, dy, iy)

    @pytest.mark.parametrize("xs, ys, g, a", [
        ("cyclic:2*cyclic:4", "cyclic:2*cyclic:4", 2, "cyclic:4"),
        ("cyclic:2*elementary_abelian:2:2", "elementary_abelian:2:2*cyclic:2", 2, "elementary_abelian:2:2"),
        ("symmetric:3*cyclic:4", "cyclic:4*symmetric:3", 6, "cyclic:4"),
    ])
    def test_examples(self, xs, ys, g, a):
        w = self._cancel(xs, ys, g)
        assert w.is_bijective() and w.first_violation() is None
        assert find_isomorphism(w.source, named_group(a)) is not None

    def test_not_isomorphic_ambient(self):
        X, Y = named_group("cyclic:2*cyclic:4"), named_group("elementary_abelian:2:3")
        dx, ix = split_with_factor(X, 2)
        dy, iy = split_with_factor(Y, 2)
        with pytest.raises(NotIsomorphicAmbient):
            cancel_factor(X, dx, ix, Y, dy, iy)
