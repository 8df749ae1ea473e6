from __future__ import annotations

import itertools

import numpy as np
import pytest

from ksgroups.corpus import cyclic, dihedral, named_group, quaternion, symmetric
from ksgroups.errors import NotAGroup, NotAHomomorphism, NotAPermutation, NotNormal, OrderBudgetExceeded
from ksgroups.groups import (
    FiniteGroup,
    GroupHom,
    build_group_from_permutations,
    build_group_from_table,
    conjugacy_classes,
    direct_product,
    hom_from_images,
    make_normal_subgroup,
    make_subgroup,
    normal_subgroups,
    quotient,
    verbal_power_subgroup,
)
from ksgroups.iso import find_isomorphism, fingerprint
from ksgroups.oracles import brute_is_homomorphism


def histogram(G):
    return dict(fingerprint(G).element_order_histogram)


class TestBuildFromTable:
    def test_trivial(self):
        G = build_group_from_table(1, [[0]])
        assert G.order == 1 and G.inverse.tolist() == [0]

    def test_c2(self):
        G = build_group_from_table(2, [[0, 1], [1, 0]])
        assert G.order == 2 and G.is_abelian

    def test_c3(self):
        G = build_group_from_table(3, [[0, 1, 2], [1, 2, 0], [2, 0, 1]])
        assert G.inverse.tolist() == [0, 2, 1]
        assert find_isomorphism(G, cyclic(3)) is not None

    def test_rejects_missing_identity(self):
        with pytest.raises(NotAGroup, match="identity"):
            build_group_from_table(2, [[1, 0], [0, 1]])

    def test_rejects_out_of_range(self):
        with pytest.raises(NotAGroup, match="closure"):
            build_group_from_table(2, [[0, 1], [1, 2]])

    def test_rejects_non_associative_loop(self):
        # a Latin square with identity 0 that is not associative (order-5 loop)
        loop = [[0, 1, 2, 3, 4],
                [1, 0, 3, 4, 2],
                [2, 4, 0, 1, 3],
                [3, 2, 4, 0, 1],
                [4, 3, 1, 2, 0]]
        with pytest.raises(NotAGroup) as info:
            build_group_from_table(5, loop)
        exc = info.value
        assert "associativ" in str(exc)
        a, b, c = exc.witness
        T = np.array(loop)
        assert T[T[a, b], c] != T[a, T[b, c]]

    def test_rejects_repeated_row_entry(self):
        with pytest.raises(NotAGroup):
            build_group_from_table(3, [[0, 1, 2], [1, 1, 0], [2, 0, 1]])


class TestPermutations:
    def test_three_cycle(self):
        assert build_group_from_permutations(3, [[1, 2, 0]]).order == 3

    def test_s3(self):
        G = build_group_from_permutations(3, [[1, 0, 2], [0, 2, 1]])
        assert G.order == 6 and not G.is_abelian
        assert find_isomorphism(G, symmetric(3)) is not None

    def test_four_cycle_is_cyclic(self):
        G = build_group_from_permutations(4, [[1, 2, 3, 0]])
        assert G.order == 4 and histogram(G) == {1: 1, 2: 1, 4: 2}

    def test_not_a_permutation(self):
        with pytest.raises(NotAPermutation):
            build_group_from_permutations(3, [[0, 0, 1]])

    def test_budget(self):
        with pytest.raises(OrderBudgetExceeded):
            build_group_from_permutations(5, [[1, 2, 3, 4, 0], [1, 0, 2, 3, 4]], budget=50)


class TestProducts:
    def test_c2_c3_histogram(self):
        P = direct_product(cyclic(2), cyclic(3))
        assert P.group.order == 6
        assert histogram(P.group) == {1: 1, 2: 1, 3: 2, 6: 2}

    def test_trivial_factor(self):
        G = dihedral(4)
        P = direct_product(named_group("trivial"), G)
        assert find_isomorphism(P.group, G) is not None

    def test_klein(self):
        P = direct_product(cyclic(2), cyclic(2))
        assert histogram(P.group) == {1: 1, 2: 3}

    def test_projection_after_inclusion_is_identity(self):
        G, H = symmetric(3), cyclic(4)
        P = direct_product(G, H)
        for inc, proj, F in zip(P.inclusions, P.projections, (G, H)):
            assert np.array_equal(proj.compose(inc).image_of, np.arange(F.order))
            assert inc.first_violation() is None and proj.first_violation() is None

    def test_row_major_indexing(self):
        G, H = cyclic(3), cyclic(4)
        P = direct_product(G, H).group
        for g, h, g2, h2 in itertools.product(range(3), range(4), range(3), range(4)):
            assert P.table[g * 4 + h, g2 * 4 + h2] == G.table[g, g2] * 4 + H.table[h, h2]

    def test_budget(self):
        with pytest.raises(OrderBudgetExceeded):
            direct_product(cyclic(100), cyclic(300))


class TestClasses:
    def test_abelian_singletons(self):
        assert all(len(c) == 1 for c in conjugacy_classes(cyclic(6)))

    def test_s3(self):
        assert sorted(len(c) for c in conjugacy_classes(symmetric(3))) == [1, 2, 3]

    def test_q8(self):
        assert sorted(len(c) for c in conjugacy_classes(quaternion())) == [1, 1, 2, 2, 2]

    def test_identity_first(self):
        assert conjugacy_classes(symmetric(4))[0] == (0,)


class TestNormalSubgroups:
    def test_counts(self):
        assert len(normal_subgroups(cyclic(2))) == 2
        assert [N.order for N in normal_subgroups(symmetric(3))] == [1, 3, 6]
        assert len(normal_subgroups(named_group("elementary_abelian:2:2"))) == 5

    def test_sorted_and_normal(self):
        subs = normal_subgroups(symmetric(4))
        assert [N.key for N in subs] == sorted(N.key for N in subs)
        assert [N.order for N in subs] == [1, 4, 12, 24]
        assert all(N.is_normal() for N in subs)

    def test_not_normal(self):
        with pytest.raises(NotNormal):
            make_normal_subgroup(symmetric(3), (0, 1))


class TestQuotient:
    def test_by_whole(self):
        G = dihedral(5)
        assert quotient(G, G.whole).group.order == 1

    def test_c6_by_c3(self):
        G = cyclic(6)
        Q = quotient(G, make_normal_subgroup(G, (0, 2, 4)))
        assert Q.group.order == 2
        assert Q.projection.is_surjective() and Q.projection.first_violation() is None

    def test_q8_by_center(self):
        G = quaternion()
        Q = quotient(G, G.center).group
        assert fingerprint(Q) == fingerprint(named_group("elementary_abelian:2:2"))

    def test_preimage_of_identity(self):
        for G in (symmetric(4), dihedral(6), quaternion()):
            for N in normal_subgroups(G):
                q = quotient(G, N).projection
                assert tuple(np.flatnonzero(q.image_of == 0)) == N.members

    def test_rejects_non_normal(self):
        G = symmetric(3)
        with pytest.raises(NotNormal):
            quotient(G, make_subgroup(G, (0, 1)))


class TestVerbal:
    def test_c6_squares(self):
        assert verbal_power_subgroup(cyclic(6), 2).order == 3

    def test_first_power(self):
        G = symmetric(4)
        assert verbal_power_subgroup(G, 1).order == G.order

    def test_s3_cubes(self):
        # brute force: collect cubes, close under the table by hand
        G = symmetric(3)
        cubes = {G.mul(G.mul(g, g), g) for g in range(6)}
        closed = set(cubes)
        while True:
            more = {G.mul(a, b) for a in closed for b in closed} - closed
            if not more:
                break
            closed |= more
        assert len(closed) == 6
        assert verbal_power_subgroup(G, 3).order == 6

    def test_s3_squares(self):
        assert verbal_power_subgroup(symmetric(3), 2).order == 3


class TestHoms:
    def test_identity_on_c2(self):
        f = hom_from_images(cyclic(2), cyclic(2), {1: 1})
        assert f.image_of.tolist() == [0, 1]

    def test_c4_onto_c2(self):
        f = hom_from_images(cyclic(4), cyclic(2), {1: 1})
        assert f.is_surjective() and f.kernel().order == 2

    def test_order_obstruction(self):
        with pytest.raises(NotAHomomorphism) as info:
            hom_from_images(cyclic(2), cyclic(3), {1: 1})
        a, b = info.value.witness
        assert a >= 0 and b >= 0

    def test_check_rejects_bad_vector(self):
        G = symmetric(3)
        with pytest.raises(NotAHomomorphism):
            GroupHom(G, G, [0, 1, 0, 1, 1, 0])

    def test_extension_agrees_with_brute_force(self):
        G, H = dihedral(4), symmetric(3)
        f = hom_from_images(G, H, {1: 1, 4: 1})
        assert brute_is_homomorphism(G, H, f.image_of.tolist())

    def test_inverse(self):
        G = cyclic(5)
        f = GroupHom(G, G, [0, 2, 4, 1, 3])
        assert np.array_equal(f.compose(f.inverse()).image_of, np.arange(5))


def test_bare_constructor_inverse():
    G = FiniteGroup(cyclic(7).table)
    assert all(G.mul(a, G.inv(a)) == 0 for a in range(7))
