"""Backtracking search for homomorphisms determined by images of generators."""

from __future__ import annotations

from typing import Iterator, Sequence

import numpy as np

from .errors import SearchBudgetExceeded
from .groups import FiniteGroup, extend_on_generators

DEFAULT_SEARCH_BUDGET = 10**7


def greedy_generators(G: FiniteGroup) -> tuple[int, ...]:
    """Generating set built by repeatedly adding the lowest element outside the current span."""
    memo = G._memo.get("generators")
    if memo is not None:
        return memo
    gens: list[int] = []
    mask = G._generate_mask([])
    while not mask.all():
        g = int(np.flatnonzero(~mask)[0])
        gens.append(g)
        mask = G._generate_mask(gens)
    result = tuple(gens)
    G._memo["generators"] = result
    return result


class NodeCounter:
    """Shared node budget across one or more searches."""

    def __init__(self, budget: int = DEFAULT_SEARCH_BUDGET):
        self.budget = budget
        self.nodes = 0

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise SearchBudgetExceeded(f"search exceeded {self.budget} nodes")


def iter_homs(G: FiniteGroup, H: FiniteGroup, candidates: Sequence[Sequence[int]],
              gens: Sequence[int] | None = None, *, injective: bool = False,
              surjective: bool = False, counter: NodeCounter | None = None) -> Iterator[np.ndarray]:
    """Yield image vectors of all homomorphisms G -> H with ``gens[i]`` mapped into ``candidates[i]``.

    Output order is lexicographic in the candidate lists, so it is deterministic.
    """
    gens = list(greedy_generators(G) if gens is None else gens)
    counter = counter or NodeCounter()
    if len(candidates) != len(gens):
        raise ValueError("one candidate list per generator is required")
    chosen: list[int] = []

    def rec(depth: int) -> Iterator[np.ndarray]:
        if depth == len(gens):
            img, _ = extend_on_generators(G, H, gens, chosen)
            assert img is not None
            if (img < 0).any():
                raise ValueError("gens do not generate the source group")
            if surjective and np.unique(img).size != H.order:
                return
            yield img
            return
        for h in candidates[depth]:
            counter.tick()
            chosen.append(int(h))
            img, clash = extend_on_generators(G, H, gens[:depth + 1], chosen)
            ok = clash is None
            if ok and injective:
                dom = img[img >= 0]
                ok = np.unique(dom).size == dom.size
            if ok:
                yield from rec(depth + 1)
            chosen.pop()

    if not gens:
        if not surjective or H.order == 1:
            yield np.zeros(G.order, dtype=np.int64)
        return
    yield from rec(0)


def dividing_order_candidates(G: FiniteGroup, H: FiniteGroup, gens: Sequence[int]) -> list[list[int]]:
    """For each generator, the H-elements whose order divides the generator's order."""
    ho = H.element_orders
    return [[int(h) for h in np.flatnonzero(G.element_orders[g] % ho == 0)] for g in gens]
