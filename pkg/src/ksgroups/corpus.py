"""Named groups with documented element orderings, and the test corpus built from them.

Orderings:

* cyclic(n): residues 0..n-1.
* dihedral(n) (order 2n): rotations r^0..r^(n-1), then reflections s r^0..s r^(n-1).
* quaternion(8): 1, -1, i, -i, j, -j, k, -k.
* symmetric(n): permutations of 0..n-1 in lexicographic order; p*q applies p first.
* elementary_abelian(p, r) and products: row-major over the coordinates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import BadParams, UnknownName
from .groups import DEFAULT_ORDER_BUDGET, FiniteGroup, OrderBudgetExceeded, direct_product

NAMES = ("trivial", "cyclic", "dihedral", "quaternion", "symmetric", "elementary_abelian", "direct_product")


@dataclass(frozen=True)
class NamedGroupSpec:
    name: str
    params: tuple = ()

    def __str__(self) -> str:
        if self.name == "direct_product":
            return "*".join(str(p) for p in self.params)
        return ":".join([self.name, *(str(p) for p in self.params)])


def parse_named(text: str) -> NamedGroupSpec:
    """Parse ``name:p1:p2``; ``*`` joins factors of a direct product (``cyclic:2*symmetric:3``)."""
    text = text.strip()
    if "*" in text:
        return NamedGroupSpec("direct_product", tuple(parse_named(t) for t in text.split("*")))
    name, *raw = text.split(":")
    if name not in NAMES or name == "direct_product":
        raise UnknownName(f"unknown group name {name!r}")
    try:
        params = tuple(int(p) for p in raw)
    except ValueError:
        raise BadParams(f"non-integer parameter in {text!r}") from None
    return NamedGroupSpec(name, params)


def cyclic(n: int) -> FiniteGroup:
    ar = np.arange(n)
    return FiniteGroup((ar[:, None] + ar[None, :]) % n, f"C{n}")


def trivial() -> FiniteGroup:
    return FiniteGroup(np.zeros((1, 1), dtype=np.int64), "1")


def dihedral(n: int) -> FiniteGroup:
    i = np.arange(n)
    T = np.empty((2 * n, 2 * n), dtype=np.int64)
    T[:n, :n] = (i[:, None] + i[None, :]) % n                # r^a r^b
    T[:n, n:] = n + (i[None, :] - i[:, None]) % n            # r^a s r^b = s r^(b-a)
    T[n:, :n] = n + (i[:, None] + i[None, :]) % n            # s r^a r^b
    T[n:, n:] = (i[None, :] - i[:, None]) % n                # s r^a s r^b = r^(b-a)
    return FiniteGroup(T, f"D{2 * n}")


# unit products 1, i, j, k as (sign, unit)
_QUAT_UNITS = {
    (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
    (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
    (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
    (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
}


def quaternion(order: int = 8) -> FiniteGroup:
    if order != 8:
        raise BadParams("only the quaternion group of order 8 is available")
    T = np.empty((8, 8), dtype=np.int64)
    for a in range(8):
        for b in range(8):
            sign, unit = _QUAT_UNITS[(a // 2, b // 2)]
            neg = (a % 2) ^ (b % 2) ^ (sign < 0)
            T[a, b] = 2 * unit + neg
    return FiniteGroup(T, "Q8")


def symmetric(n: int) -> FiniteGroup:
    perms = [np.array(p) for p in itertools.permutations(range(n))]
    index = {p.tobytes(): k for k, p in enumerate(perms)}
    T = np.array([[index[q[p].tobytes()] for q in perms] for p in perms], dtype=np.int64)
    return FiniteGroup(T, f"S{n}")


def elementary_abelian(p: int, rank: int) -> FiniteGroup:
    if rank == 0:
        return trivial()
    G = reduce(lambda A, B: direct_product(A, B).group, [cyclic(p)] * rank)
    G.label = f"C{p}^{rank}"
    return G


def named_group(spec: NamedGroupSpec | str, budget: int = DEFAULT_ORDER_BUDGET) -> FiniteGroup:
    if isinstance(spec, str):
        spec = parse_named(spec)
    p = spec.params
    name = spec.name

    def need(k: int) -> None:
        if len(p) != k:
            raise BadParams(f"{name} takes {k} parameter(s), got {len(p)}")

    if name == "trivial":
        need(0)
        return trivial()
    if name == "cyclic":
        need(1)
        if p[0] < 1:
            raise BadParams("cyclic order must be at least 1")
        _budget(p[0], budget)
        return cyclic(p[0])
    if name == "dihedral":
        need(1)
        if p[0] < 1:
            raise BadParams("dihedral parameter must be at least 1")
        _budget(2 * p[0], budget)
        return dihedral(p[0])
    if name == "quaternion":
        if len(p) > 1:
            raise BadParams("quaternion takes at most one parameter")
        return quaternion(p[0] if p else 8)
    if name == "symmetric":
        need(1)
        if not 1 <= p[0] <= 7:
            raise BadParams("symmetric degree must be between 1 and 7")
        _budget(int(np.prod(range(1, p[0] + 1))), budget)
        return symmetric(p[0])
    if name == "elementary_abelian":
        need(2)
        if p[0] < 2 or any(p[0] % d == 0 for d in range(2, p[0])) or p[1] < 0:
            raise BadParams("elementary_abelian needs a prime and a non-negative rank")
        _budget(p[0] ** p[1], budget)
        return elementary_abelian(p[0], p[1])
    if name == "direct_product":
        if not p:
            return trivial()
        groups = [named_group(s, budget) for s in p]
        return reduce(lambda A, B: direct_product(A, B, budget=budget).group, groups)
    raise UnknownName(f"unknown group name {name!r}")


def _budget(order: int, budget: int) -> None:
    if order > budget:
        raise OrderBudgetExceeded(f"group order {order} exceeds budget {budget}")


def base_specs(max_order: int) -> list[NamedGroupSpec]:
    """Named building blocks of the corpus with order <= max_order."""
    specs = [NamedGroupSpec("trivial")]
    specs += [NamedGroupSpec("cyclic", (n,)) for n in range(2, max_order + 1)]
    specs += [NamedGroupSpec("elementary_abelian", (p, r))
              for p, r in ((2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (5, 2)) if p ** r <= max_order]
    specs += [NamedGroupSpec("dihedral", (n,)) for n in range(3, 17) if 2 * n <= max_order]
    if max_order >= 8:
        specs.append(NamedGroupSpec("quaternion", (8,)))
    specs += [NamedGroupSpec("symmetric", (n,)) for n in (3, 4) if [1, 1, 2, 6, 24][n] <= max_order]
    return specs


def spec_order(spec: NamedGroupSpec) -> int:
    p = spec.params
    if spec.name == "trivial":
        return 1
    if spec.name == "cyclic":
        return p[0]
    if spec.name == "dihedral":
        return 2 * p[0]
    if spec.name == "quaternion":
        return 8
    if spec.name == "symmetric":
        return int(np.prod(range(1, p[0] + 1)))
    if spec.name == "elementary_abelian":
        return p[0] ** p[1]
    return int(np.prod([spec_order(s) for s in p]))


def corpus_specs(max_order: int, products: bool = True) -> list[NamedGroupSpec]:
    """Base groups plus all pairwise products of nontrivial base groups within max_order."""
    base = base_specs(max_order)
    specs = list(base)
    if products:
        nontrivial = [s for s in base if s.name != "trivial"]
        for a, b in itertools.combinations_with_replacement(nontrivial, 2):
            if spec_order(a) * spec_order(b) <= max_order:
                specs.append(NamedGroupSpec("direct_product", (a, b)))
    return specs


def corpus(max_order: int, products: bool = True) -> list[tuple[str, FiniteGroup]]:
    out = []
    for s in corpus_specs(max_order, products):
        G = named_group(s)
        if G.label is None:
            G.label = str(s)
        out.append((str(s), G))
    return out
