from __future__ import annotations

import itertools

import pytest

from ksgroups.checks import shared_corpus
from ksgroups.corpus import cyclic, dihedral, elementary_abelian, quaternion, symmetric
from ksgroups.endo import enumerate_endomorphisms
from ksgroups.groups import normal_subgroups
from ksgroups.iso import find_isomorphism
from ksgroups.krull_schmidt import is_indecomposable
from ksgroups.oracles import (
    brute_endomorphism_count,
    brute_is_homomorphism,
    brute_is_indecomposable,
    brute_isomorphism,
    brute_normal_subgroups,
    closure_normal_subgroups,
)

SMALL = [(n, G) for n, G in shared_corpus(8)]
MEDIUM = [(n, G) for n, G in shared_corpus(24) if G.order > 12]


def members(G):
    return sorted((N.members for N in normal_subgroups(G)), key=lambda S: (len(S), S))


@pytest.mark.parametrize("G,count", [(symmetric(3), 3), (quaternion(), 6), (dihedral(4), 6),
                                     (cyclic(12), 6), (elementary_abelian(2, 2), 5)])
def test_known_normal_subgroup_counts(G, count):
    assert len(brute_normal_subgroups(G)) == count


@pytest.mark.parametrize("G,count", [(cyclic(6), 6), (elementary_abelian(2, 2), 16), (symmetric(3), 10),
                                     (quaternion(), 28), (cyclic(1), 1)])
def test_known_endomorphism_counts(G, count):
    assert brute_endomorphism_count(G) == count


@pytest.mark.parametrize("name,G", SMALL, ids=[n for n, _ in SMALL])
def test_small_corpus_agrees(name, G):
    assert members(G) == brute_normal_subgroups(G) == closure_normal_subgroups(G)
    assert is_indecomposable(G) == brute_is_indecomposable(G)
    assert len(enumerate_endomorphisms(G)) == brute_endomorphism_count(G)


@pytest.mark.parametrize("name,G", MEDIUM, ids=[n for n, _ in MEDIUM])
def test_closure_oracle_beyond_subset_range(name, G):
    assert members(G) == closure_normal_subgroups(G)


def test_isomorphism_oracle_on_small_pairs():
    for (a, G), (b, H) in itertools.combinations(SMALL, 2):
        if G.order != H.order:
            continue
        w = brute_isomorphism(G, H)
        assert (w is None) == (find_isomorphism(G, H) is None), (a, b)
        if w is not None:
            assert brute_is_homomorphism(G, H, w) and sorted(w) == list(range(G.order))
