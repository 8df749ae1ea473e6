"""Isomorphism invariants and explicit isomorphism search."""

from __future__ import annotations

from collections import Counter

import numpy as np

from .groups import (
    FiniteGroup,
    GroupHom,
    IsoFingerprint,
    conjugacy_classes,
    derived_series_orders,
)
from .search import DEFAULT_SEARCH_BUDGET, NodeCounter, greedy_generators, iter_homs


def fingerprint(G: FiniteGroup) -> IsoFingerprint:
    memo = G._memo.get("fingerprint")
    if memo is not None:
        return memo
    hist = Counter(int(o) for o in G.element_orders)
    fp = IsoFingerprint(
        order=G.order,
        element_order_histogram=tuple(sorted(hist.items())),
        abelian=G.is_abelian,
        center_order=G.center.order,
        derived_series_orders=derived_series_orders(G),
        conjugacy_class_sizes=tuple(sorted(len(c) for c in conjugacy_classes(G))),
    )
    G._memo["fingerprint"] = fp
    return fp


def element_invariants(G: FiniteGroup) -> np.ndarray:
    """Per-element (order, conjugacy class size) pairs, preserved by every isomorphism."""
    memo = G._memo.get("element_invariants")
    if memo is not None:
        return memo
    size = np.zeros(G.order, dtype=np.int64)
    for cls in conjugacy_classes(G):
        size[list(cls)] = len(cls)
    inv = np.stack([G.element_orders, size], axis=1)
    inv.setflags(write=False)
    G._memo["element_invariants"] = inv
    return inv


def find_isomorphism(G: FiniteGroup, H: FiniteGroup, budget: int = DEFAULT_SEARCH_BUDGET,
                     counter: NodeCounter | None = None) -> GroupHom | None:
    """An isomorphism G -> H, or None when none exists.

    Raises SearchBudgetExceeded if the node budget runs out before the
    question is settled.
    """
    if G.order != H.order or fingerprint(G) != fingerprint(H):
        return None
    gens = greedy_generators(G)
    ig, ih = element_invariants(G), element_invariants(H)
    candidates = [[int(h) for h in np.flatnonzero((ih == ig[g]).all(axis=1))] for g in gens]
    counter = counter or NodeCounter(budget)
    for img in iter_homs(G, H, candidates, gens, injective=True, counter=counter):
        return GroupHom(G, H, img, check=False)
    return None


def are_isomorphic(G: FiniteGroup, H: FiniteGroup, budget: int = DEFAULT_SEARCH_BUDGET) -> bool:
    return find_isomorphism(G, H, budget) is not None
