"""Brute-force reference implementations used only by the tests.

Nothing here imports the package's algorithms: permutations are plain
tuples composed left to right, matrices are lists of lists.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations


def compose(a: tuple, b: tuple) -> tuple:
    """``a`` then ``b``."""
    return tuple(b[x] for x in a)


def inverse(a: tuple) -> tuple:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def closure(gens, degree: int) -> frozenset:
    identity = tuple(range(degree))
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def order_of(x: tuple) -> int:
    identity = tuple(range(len(x)))
    k, cur = 1, x
    while cur != identity:
        cur = compose(cur, x)
        k += 1
    return k


def all_subgroups(elements: frozenset, degree: int) -> set[frozenset]:
    """Every subgroup, assuming each is generated by at most two elements."""
    elems = sorted(elements)
    cyclic = {closure([x], degree) for x in elems}
    subs = set(cyclic)
    for a, b in combinations(elems, 2):
        subs.add(closure([a, b], degree))
    return subs


def is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def conjugate_set(H: frozenset, t: tuple) -> frozenset:
    ti = inverse(t)
    return frozenset(compose(compose(ti, h), t) for h in H)


def normalizer(G: frozenset, H: frozenset) -> frozenset:
    return frozenset(g for g in G if conjugate_set(H, g) == H)


def p_core(G: frozenset, p: int, degree: int) -> frozenset:
    """Largest normal p-subgroup: intersection of all Sylow p-subgroups."""
    subs = all_subgroups(G, degree)
    size = max(len(H) for H in subs if is_p_power(len(H), p))
    sylows = [H for H in subs if len(H) == size and is_p_power(len(H), p)]
    core = frozenset.intersection(*sylows)
    return core


def is_elementary_abelian(H: frozenset, p: int) -> bool:
    identity = next(h for h in H if all(i == x for i, x in enumerate(h)))
    return all(compose(a, b) == compose(b, a) for a in H for b in H) and all(
        h == identity or order_of(h) == p for h in H
    )


def rank_mod(matrix: list[list[int]], p: int | None) -> int:
    """Rank over GF(p), or over the rationals when ``p`` is None."""
    rows = [[Fraction(v) if p is None else v % p for v in row] for row in matrix]
    rank = 0
    cols = len(rows[0]) if rows else 0
    for c in range(cols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][c]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = 1 / rows[rank][c] if p is None else pow(rows[rank][c], -1, p)
        rows[rank] = [v * inv if p is None else v * inv % p for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][c]:
                f = rows[r][c]
                rows[r] = [a - f * b if p is None else (a - f * b) % p for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def boundary(simplices_low: list[tuple], simplices_high: list[tuple]) -> list[list[int]]:
    index = {s: i for i, s in enumerate(simplices_low)}
    out = [[0] * len(simplices_high) for _ in simplices_low]
    for j, s in enumerate(simplices_high):
        for k in range(len(s)):
            out[index[s[:k] + s[k + 1:]]][j] = (-1) ** k
    return out


def close_under_faces(facets) -> dict[int, list[tuple]]:
    by_dim: dict[int, set] = {}
    for f in facets:
        f = tuple(sorted(f))
        for k in range(1, len(f) + 1):
            by_dim.setdefault(k - 1, set()).update(combinations(f, k))
    return {d: sorted(s) for d, s in by_dim.items()}


def reduced_betti(facets, p: int | None) -> list[int]:
    """Reduced Betti numbers over GF(p) or the rationals."""
    simp = close_under_faces(facets)
    top = max(simp)
    ranks = {}
    for d in range(1, top + 1):
        ranks[d] = rank_mod(boundary(simp[d - 1], simp[d]), p)
    ranks[0] = 1  # augmentation
    return [len(simp[d]) - ranks[d] - ranks.get(d + 1, 0) for d in range(top + 1)]


def chains(elements: list, less) -> list[tuple]:
    """All nonempty chains of a poset given by a strict order predicate."""
    out = []

    def extend(chain):
        out.append(tuple(chain))
        for y in elements:
            if less(chain[-1], y):
                extend(chain + [y])

    for x in elements:
        extend([x])
    return out


def rank_mod_p_fast(matrix: list[list[int]], p: int) -> int:
    """Rank over GF(p) by numpy row reduction; needs p < 2**31."""
    import numpy as np

    A = np.array(matrix, dtype=np.int64).reshape(len(matrix), -1) % p
    rows, cols = A.shape
    rank = 0
    for c in range(cols):
        nz = np.flatnonzero(A[rank:, c])
        if nz.size == 0:
            continue
        r = rank + int(nz[0])
        A[[rank, r]] = A[[r, rank]]
        A[rank] = A[rank] * pow(int(A[rank, c]), -1, p) % p
        f = A[:, c].copy()
        f[rank] = 0
        A = (A - np.outer(f, A[rank])) % p
        rank += 1
        if rank == rows:
            break
    return rank
