"""Brute-force reference implementations for small groups.

These deliberately share nothing with the main search code: they read the
Cayley table with plain Python loops and enumerate subsets or bijections
directly.  Only intended for orders up to about 12.
"""

from __future__ import annotations

import itertools

from .groups import FiniteGroup

ORACLE_MAX_ORDER = 12


def _rows(G: FiniteGroup) -> list[list[int]]:
    return G.table.tolist()


def brute_normal_subgroups(G: FiniteGroup) -> list[tuple[int, ...]]:
    """Every subset containing the identity that is closed and conjugation-stable, sorted by (size, members)."""
    T = _rows(G)
    n = G.order
    inv = [T[a].index(0) for a in range(n)]
    out = []
    rest = list(range(1, n))
    for r in range(n):
        if n % (r + 1):
            continue
        for combo in itertools.combinations(rest, r):
            S = (0, *combo)
            s = set(S)
            if any(T[a][b] not in s for a in S for b in S):
                continue
            if any(T[T[g][x]][inv[g]] not in s for g in range(n) for x in S):
                continue
            out.append(S)
    return sorted(out, key=lambda S: (len(S), S))


def closure_normal_subgroups(G: FiniteGroup) -> list[tuple[int, ...]]:
    """Normal subgroups found by growing every subgroup one element at a time
    (plain closure under the table), then filtering by conjugation.  Usable up
    to a few dozen elements, where subset enumeration is out of reach."""
    T = _rows(G)
    n = G.order
    inv = [T[a].index(0) for a in range(n)]

    def close(elems: set[int]) -> frozenset[int]:
        S = set(elems) | {0}
        todo = list(S)
        while todo:
            a = todo.pop()
            for b in list(S):
                for p in (T[a][b], T[b][a]):
                    if p not in S:
                        S.add(p)
                        todo.append(p)
        return frozenset(S)

    seen = {frozenset({0})}
    stack = [frozenset({0})]
    while stack:
        S = stack.pop()
        for x in range(n):
            if x not in S:
                U = close(S | {x})
                if U not in seen:
                    seen.add(U)
                    stack.append(U)
    normal = [tuple(sorted(S)) for S in seen
              if all(T[T[g][x]][inv[g]] in S for g in range(n) for x in S)]
    return sorted(normal, key=lambda S: (len(S), S))


def brute_is_indecomposable(G: FiniteGroup) -> bool:
    """No pair of nontrivial normal subgroups meets trivially, commutes, and has |N||K| = |G|."""
    if G.order == 1:
        return True
    T = _rows(G)
    normals = [S for S in brute_normal_subgroups(G) if 1 < len(S) < G.order]
    for N, K in itertools.combinations_with_replacement(normals, 2):
        if len(N) * len(K) != G.order or set(N) & set(K) != {0}:
            continue
        if all(T[a][b] == T[b][a] for a in N for b in K):
            return False
    return True


def brute_isomorphism(G: FiniteGroup, H: FiniteGroup) -> list[int] | None:
    """Scan identity-fixing bijections G -> H, pruning a partial bijection as soon as
    some product of already-assigned elements is sent to the wrong place."""
    if G.order != H.order:
        return None
    n = G.order
    TG, TH = _rows(G), _rows(H)
    img = [-1] * n
    img[0] = 0
    used = [False] * n
    used[0] = True

    def consistent(a: int) -> bool:
        for b in range(a + 1):
            for x, y in ((a, b), (b, a)):
                p = TG[x][y]
                if p <= a and img[p] != TH[img[x]][img[y]]:
                    return False
        return True

    def rec(a: int) -> bool:
        if a == n:
            return True
        for v in range(1, n):
            if used[v]:
                continue
            img[a] = v
            used[v] = True
            if consistent(a) and rec(a + 1):
                return True
            used[v] = False
        img[a] = -1
        return False

    return img if rec(1) else None


def brute_is_homomorphism(G: FiniteGroup, H: FiniteGroup, img: list[int]) -> bool:
    TG, TH = _rows(G), _rows(H)
    return all(img[TG[a][b]] == TH[img[a]][img[b]] for a in range(G.order) for b in range(G.order))


def brute_endomorphism_count(G: FiniteGroup) -> int:
    """Number of maps G -> G respecting the table, by scanning all maps fixing the identity
    with early product checks (no generating sets involved)."""
    n = G.order
    T = _rows(G)
    img = [0] * n
    count = 0

    def ok(a: int) -> bool:
        for b in range(a + 1):
            for x, y in ((a, b), (b, a)):
                p = T[x][y]
                if p <= a and img[p] != T[img[x]][img[y]]:
                    return False
        return True

    def rec(a: int) -> None:
        nonlocal count
        if a == n:
            count += 1
            return
        for v in range(n):
            img[a] = v
            if ok(a):
                rec(a + 1)

    rec(1)
    return count
