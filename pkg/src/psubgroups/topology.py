"""Order complexes, exact integer chain complexes and reduced homology."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ParseError

# -- simplicial complexes -----------------------------------------------------


class SimplicialComplex:
    """Simplices stored per dimension as lexicographically sorted int arrays.

    ``simplices_by_dim[d]`` has shape ``(f_d, d + 1)`` with strictly
    increasing rows.  The complex is closed under faces.
    """

    def __init__(self, vertex_count: int, simplices_by_dim: Sequence[np.ndarray]):
        self.vertex_count = vertex_count
        self.simplices_by_dim = [np.asarray(s, dtype=np.int64).reshape(-1, d + 1)
                                 for d, s in enumerate(simplices_by_dim)]
        while self.simplices_by_dim and len(self.simplices_by_dim[-1]) == 0:
            self.simplices_by_dim.pop()
        self._faces: dict[int, np.ndarray] = {}

    @classmethod
    def from_simplices(cls, simplices: Iterable[Sequence[int]], vertex_count: int | None = None) -> SimplicialComplex:
        """Close the given simplices under faces."""
        from itertools import combinations

        by_dim: dict[int, set] = {}
        top = 0
        for s in simplices:
            s = tuple(sorted(set(int(v) for v in s)))
            if not s:
                continue
            top = max(top, s[-1] + 1)
            for k in range(1, len(s) + 1):
                by_dim.setdefault(k - 1, set()).update(combinations(s, k))
        if vertex_count is None:
            vertex_count = top
        dims = max(by_dim, default=-1) + 1
        arrays = [np.array(sorted(by_dim[d]), dtype=np.int64).reshape(-1, d + 1) for d in range(dims)]
        return cls(vertex_count, arrays)

    @property
    def dimension(self) -> int:
        return len(self.simplices_by_dim) - 1

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.simplices_by_dim)

    def is_empty(self) -> bool:
        return not self.simplices_by_dim

    def simplices(self, d: int) -> list[tuple[int, ...]]:
        if d < 0 or d > self.dimension:
            return []
        return [tuple(r) for r in self.simplices_by_dim[d].tolist()]

    def faces(self, d: int) -> np.ndarray:
        """Row indices of the codimension-one faces of each d-simplex.

        Column k is the face obtained by deleting vertex k, which enters the
        boundary with sign (-1)^k.
        """
        if d not in self._faces:
            simp = self.simplices_by_dim[d]
            lower = _row_keys(self.simplices_by_dim[d - 1])
            out = np.empty((len(simp), d + 1), dtype=np.int64)
            for k in range(d + 1):
                face = np.delete(simp, k, axis=1)
                out[:, k] = np.searchsorted(lower, _row_keys(face))
            self._faces[d] = out
        return self._faces[d]

    def relabel(self, perm: Sequence[int]) -> SimplicialComplex:
        """Apply a vertex bijection ``v -> perm[v]``."""
        perm = np.asarray(perm, dtype=np.int64)
        arrays = []
        for s in self.simplices_by_dim:
            t = np.sort(perm[s], axis=1)
            arrays.append(t[np.argsort(_row_keys(t), kind="stable")])
        return SimplicialComplex(self.vertex_count, arrays)

    def to_text(self) -> str:
        lines = ["format complex v1", f"complex vertices {self.vertex_count} dimension {self.dimension}"]
        for s in self.simplices_by_dim:
            lines.extend("s " + " ".join(map(str, row)) for row in s.tolist())
        return "\n".join(lines) + "\n"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SimplicialComplex)
            and self.f_vector == other.f_vector
            and all((a == b).all() for a, b in zip(self.simplices_by_dim, other.simplices_by_dim))
        )

    def __repr__(self) -> str:
        return f"<SimplicialComplex f={self.f_vector}>"


def _row_keys(rows: np.ndarray) -> np.ndarray:
    """Byte keys whose memcmp order is the lexicographic order of the rows."""
    arr = np.ascontiguousarray(rows, dtype=">u8")  # vertices are nonnegative
    if arr.ndim == 1:
        arr = arr[:, None]
    return arr.view(np.dtype((np.void, 8 * arr.shape[1]))).ravel()


def order_complex(poset) -> SimplicialComplex:
    """Chains of a finite poset.

    ``poset`` is a :class:`~psubgroups.posets.SubgroupPoset` or a pair
    ``(n, strict_upper_sets)`` where ``strict_upper_sets[i]`` lists the
    elements strictly above ``i``.  Vertex labels must form a linear
    extension (``i < j`` whenever element i is below element j).
    """
    if isinstance(poset, tuple):
        n, ups = poset
        ups = [sorted(u) for u in ups]
    else:
        from .group import iter_bits

        n = len(poset)
        ups = [list(iter_bits(m)) for m in poset.up]
    if n == 0:
        return SimplicialComplex(0, [])
    counts = np.array([len(u) for u in ups], dtype=np.int64)
    flat = np.array([j for u in ups for j in u], dtype=np.int64)
    ptr = np.concatenate([[0], np.cumsum(counts)])
    if len(flat) and (flat <= np.repeat(np.arange(n), counts)).any():
        raise ValueError("vertex labels are not a linear extension of the order")
    levels = [np.arange(n, dtype=np.int64)[:, None]]
    while True:
        chains = levels[-1]
        last = chains[:, -1]
        reps = counts[last]
        if reps.sum() == 0:
            break
        base = np.repeat(chains, reps, axis=0)
        starts = np.repeat(ptr[last], reps)
        offsets = np.arange(reps.sum()) - np.repeat(np.cumsum(reps) - reps, reps)
        ext = flat[starts + offsets]
        levels.append(np.concatenate([base, ext[:, None]], axis=1))
    return SimplicialComplex(n, levels)


def chain_counts(ups: Sequence[Sequence[int]]) -> list[int]:
    """f-vector of the order complex without listing chains.

    ``ups[i]`` lists the elements strictly above i; labels must be a linear
    extension.
    """
    n = len(ups)
    per: list[list[int]] = [[] for _ in range(n)]
    for i in reversed(range(n)):
        counts = [1]
        for j in ups[i]:
            cj = per[j]
            if len(cj) + 1 > len(counts):
                counts.extend([0] * (len(cj) + 1 - len(counts)))
            for d, c in enumerate(cj):
                counts[d + 1] += c
        per[i] = counts
    f: list[int] = []
    for counts in per:
        if len(counts) > len(f):
            f.extend([0] * (len(counts) - len(f)))
        for d, c in enumerate(counts):
            f[d] += c
    return f


def poset_from_covers(n: int, covers: Iterable[tuple[int, int]]) -> tuple[int, list[set[int]]]:
    """Strict upper sets from covering pairs (transitive closure)."""
    above: list[set[int]] = [set() for _ in range(n)]
    direct: list[list[int]] = [[] for _ in range(n)]
    for i, j in covers:
        direct[i].append(j)
    order = _topological(n, direct)
    for i in reversed(order):
        for j in direct[i]:
            above[i].add(j)
            above[i] |= above[j]
    return n, above


def _topological(n: int, direct: list[list[int]]) -> list[int]:
    indeg = [0] * n
    for i in range(n):
        for j in direct[i]:
            indeg[j] += 1
    queue = deque(i for i in range(n) if indeg[i] == 0)
    out = []
    while queue:
        i = queue.popleft()
        out.append(i)
        for j in direct[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                queue.append(j)
    if len(out) != n:
        raise ValueError("covering relation has a cycle")
    return out


def relabel_linear(n: int, above: list[set[int]]) -> tuple[list[int], tuple[int, list[set[int]]]]:
    """Relabel a poset so that labels form a linear extension."""
    direct = [sorted(a) for a in above]
    order = _topological(n, direct)
    new = {old: k for k, old in enumerate(order)}
    ups = [set() for _ in range(n)]
    for old in range(n):
        ups[new[old]] = {new[j] for j in above[old]}
    return order, (n, ups)


# -- integer matrices and Smith normal form ----------------------------------


class IntegerMatrix:
    """Sparse integer matrix; zero entries are never stored."""

    def __init__(self, rows: int, cols: int, entries: dict[tuple[int, int], int] | None = None):
        self.rows = rows
        self.cols = cols
        self.entries = {k: int(v) for k, v in (entries or {}).items() if v}

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[int]]) -> IntegerMatrix:
        rows = len(data)
        cols = len(data[0]) if rows else 0
        return cls(rows, cols, {(i, j): int(v) for i, r in enumerate(data) for j, v in enumerate(r) if v})

    @classmethod
    def identity(cls, n: int) -> IntegerMatrix:
        return cls(n, n, {(i, i): 1 for i in range(n)})

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def __matmul__(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        by_row: dict[int, list[tuple[int, int]]] = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        out: dict[tuple[int, int], int] = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                out[i, j] = out.get((i, j), 0) + a * b
        return IntegerMatrix(self.rows, other.cols, out)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IntegerMatrix)
            and (self.rows, self.cols) == (other.rows, other.cols)
            and self.entries == other.entries
        )

    def is_zero(self) -> bool:
        return not self.entries

    def __repr__(self) -> str:
        return f"<IntegerMatrix {self.rows}x{self.cols} nnz={len(self.entries)}>"


@dataclass
class SmithNormalFormResult:
    diagonal: list[int]
    rank: int
    left: IntegerMatrix | None = None
    right: IntegerMatrix | None = None


def smith_normal_form(M, transforms: bool = False) -> SmithNormalFormResult:
    """Exact Smith normal form.

    Pivot rule: a nonzero entry of least absolute value in the remaining
    block, ties to the lowest (row, col).  With ``transforms=True`` the
    unimodular ``left`` and ``right`` satisfy ``left @ M @ right == D``.
    """
    if isinstance(M, IntegerMatrix):
        m, n = M.rows, M.cols
        A = M.to_dense()
    else:
        A = [[int(v) for v in row] for row in M]
        m = len(A)
        n = len(A[0]) if m else 0
    L = [[int(i == j) for j in range(m)] for i in range(m)] if transforms else None
    R = [[int(i == j) for j in range(n)] for i in range(n)] if transforms else None

    def swap_rows(i, k):
        A[i], A[k] = A[k], A[i]
        if L is not None:
            L[i], L[k] = L[k], L[i]

    def swap_cols(j, k):
        for row in A:
            row[j], row[k] = row[k], row[j]
        if R is not None:
            for row in R:
                row[j], row[k] = row[k], row[j]

    def add_row(src, dst, q):  # row dst += q * row src
        a, b = A[src], A[dst]
        for j in range(n):
            if a[j]:
                b[j] += q * a[j]
        if L is not None:
            a, b = L[src], L[dst]
            for j in range(m):
                if a[j]:
                    b[j] += q * a[j]

    def add_col(src, dst, q):  # col dst += q * col src
        for row in A:
            if row[src]:
                row[dst] += q * row[src]
        if R is not None:
            for row in R:
                if row[src]:
                    row[dst] += q * row[src]

    diagonal: list[int] = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            piv = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(t, i, -(A[i][t] // piv))
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(t, j, -(A[t][j] // piv))
            rest = None
            for i in range(t + 1, m):
                if A[i][t] and (rest is None or abs(A[i][t]) < rest[0]):
                    rest = (abs(A[i][t]), i, None)
            for j in range(t + 1, n):
                if A[t][j] and (rest is None or abs(A[t][j]) < rest[0]):
                    rest = (abs(A[t][j]), None, j)
            if rest is not None:
                _, i, j = rest
                if i is not None:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(bad, t, 1)
        if A[t][t] < 0:
            A[t] = [-v for v in A[t]]
            if L is not None:
                L[t] = [-v for v in L[t]]
        diagonal.append(A[t][t])
        t += 1
    result = SmithNormalFormResult(diagonal, len(diagonal))
    if transforms:
        result.left = IntegerMatrix.from_dense(L) if m else IntegerMatrix(0, 0)
        result.right = IntegerMatrix.from_dense(R) if n else IntegerMatrix(0, 0)
    return result


def _invariant_factors(columns: list[dict[int, int]]) -> tuple[int, list[int]]:
    """Rank and invariant factors > 1 of a sparse matrix given by columns.

    Unit pivots are eliminated first (Markowitz-style), the rest goes
    through the dense Smith normal form.
    """
    cols = {c: dict(col) for c, col in enumerate(columns) if col}
    row_cols: dict[int, set[int]] = {}
    for c, col in cols.items():
        for r in col:
            row_cols.setdefault(r, set()).add(c)
    rank = 0
    while True:
        best = None
        for c in sorted(cols, key=lambda c: (len(cols[c]), c)):
            col = cols[c]
            for r, v in col.items():
                if v in (1, -1):
                    cost = (len(row_cols[r]) - 1) * (len(col) - 1)
                    if best is None or cost < best[0]:
                        best = (cost, r, c)
            if best is not None and best[0] == 0:
                break
            if best is not None and len(col) > 4:
                break
        if best is None:
            break
        _, r, c = best
        pivot_col = cols.pop(c)
        pv = pivot_col[r]
        for rr in pivot_col:
            row_cols[rr].discard(c)
        for other in list(row_cols[r]):
            col = cols[other]
            q = col[r] * pv  # pv = +-1 so col[r] / pv == col[r] * pv
            for rr, v in pivot_col.items():
                nv = col.get(rr, 0) - q * v
                if nv:
                    if rr not in col:
                        row_cols[rr].add(other)
                    col[rr] = nv
                elif rr in col:
                    del col[rr]
                    row_cols[rr].discard(other)
            if not col:
                del cols[other]
        del row_cols[r]
        rank += 1
    if not cols:
        return rank, []
    row_ids = sorted({r for col in cols.values() for r in col})
    pos = {r: k for k, r in enumerate(row_ids)}
    dense = [[0] * len(cols) for _ in row_ids]
    for k, c in enumerate(sorted(cols)):
        for r, v in cols[c].items():
            dense[pos[r]][k] = v
    snf = smith_normal_form(dense)
    return rank + snf.rank, [d for d in snf.diagonal if d > 1]


# -- homology -------------------------------------------------------------------


class HomologyGroups:
    """Reduced integral homology: free rank and torsion per degree >= 0."""

    def __init__(self, ranks: Sequence[int], torsion: Sequence[Sequence[int]], empty: bool = False):
        self.ranks = tuple(int(r) for r in ranks)
        self.torsion = tuple(tuple(int(t) for t in ts) for ts in torsion)
        self.empty = empty

    def _trimmed(self):
        ranks, torsion = list(self.ranks), list(self.torsion)
        while ranks and ranks[-1] == 0 and not torsion[-1]:
            ranks.pop()
            torsion.pop()
        return tuple(ranks), tuple(torsion)

    def __eq__(self, other) -> bool:
        return isinstance(other, HomologyGroups) and self._trimmed() == other._trimmed() and self.empty == other.empty

    def __hash__(self) -> int:
        return hash(self._trimmed())

    def is_zero(self) -> bool:
        return not any(self.ranks) and not any(self.torsion)

    def nonzero_degrees(self) -> list[int]:
        return [d for d in range(len(self.ranks)) if self.ranks[d] or self.torsion[d]]

    def lines(self) -> list[str]:
        out = []
        if self.empty:
            out.append("H~ empty-complex")
        for d, (r, ts) in enumerate(zip(self.ranks, self.torsion)):
            out.append(f"H~{d} rank {r} torsion {','.join(map(str, ts)) or '-'}")
        return out

    def summary(self) -> str:
        if self.empty:
            return "empty"
        parts = []
        for d in self.nonzero_degrees():
            group = []
            if self.ranks[d]:
                group.append("Z" if self.ranks[d] == 1 else f"Z^{self.ranks[d]}")
            group.extend(f"Z/{t}" for t in self.torsion[d])
            parts.append(f"H{d}=" + "+".join(group))
        return " ".join(parts) or "0"

    def __repr__(self) -> str:
        return f"HomologyGroups({self.summary()})"


def boundary_columns(C: SimplicialComplex, d: int) -> list[dict[int, int]]:
    """Columns of the boundary map C_d -> C_{d-1}; d = 0 is the augmentation."""
    if d == 0:
        return [{0: 1} for _ in range(C.f_vector[0])]
    faces = C.faces(d).tolist()
    return [{f: (-1) ** k for k, f in enumerate(row)} for row in faces]


def boundary_matrix(C: SimplicialComplex, d: int) -> IntegerMatrix:
    rows = 1 if d == 0 else C.f_vector[d - 1]
    entries = {(r, c): v for c, col in enumerate(boundary_columns(C, d)) for r, v in col.items()}
    return IntegerMatrix(rows, C.f_vector[d], entries)


def boundary_squares_vanish(C: SimplicialComplex) -> bool:
    """Check that every composite of consecutive boundary maps is zero."""
    for d in range(1, C.dimension + 1):
        lower = boundary_columns(C, d - 1)
        for col in boundary_columns(C, d):
            acc: dict[int, int] = {}
            for f, s in col.items():
                for g, t in lower[f].items():
                    acc[g] = acc.get(g, 0) + s * t
            if any(acc.values()):
                return False
    return True


def _reduce_pairs(C: SimplicialComplex) -> list[list[int]]:
    """Pair cells by free-face collapses and coreductions.

    Each pairing removes a unit pivot whose row or column has no other live
    entry, so the surviving cells carry the restricted boundary and the
    same homology.  Dimension -1 (one empty cell) makes this reduced.
    Returns the surviving cell indices per dimension 0..dim.
    """
    D = C.dimension
    f = C.f_vector
    # faces[d][i]: faces of cell i of dim d; index d+1 shift for dim -1
    faces: list[list[list[int]]] = [[[]]]
    faces.append([[0] for _ in range(f[0])])
    for d in range(1, D + 1):
        faces.append(C.faces(d).tolist())
    cofaces: list[list[list[int]]] = []
    for d in range(-1, D + 1):
        cnt = len(faces[d + 1])
        cof: list[list[int]] = [[] for _ in range(cnt)]
        if d < D:
            for j, row in enumerate(faces[d + 2]):
                for i in row:
                    cof[i].append(j)
        cofaces.append(cof)
    alive = [[True] * len(faces[d + 1]) for d in range(-1, D + 1)]
    nface = [[len(r) for r in faces[d + 1]] for d in range(-1, D + 1)]
    ncof = [[len(r) for r in cofaces[d + 1]] for d in range(-1, D + 1)]

    queue: deque[tuple[int, int]] = deque()
    for d in range(-1, D + 1):
        k = d + 1
        for i in range(len(alive[k])):
            if nface[k][i] == 1 or ncof[k][i] == 1:
                queue.append((d, i))

    def kill(d: int, i: int) -> None:
        k = d + 1
        alive[k][i] = False
        if d >= 0:
            for j in faces[k][i]:
                if alive[k - 1][j]:
                    ncof[k - 1][j] -= 1
                    if ncof[k - 1][j] == 1:
                        queue.append((d - 1, j))
        if d < D:
            for j in cofaces[k][i]:
                if alive[k + 1][j]:
                    nface[k + 1][j] -= 1
                    if nface[k + 1][j] == 1:
                        queue.append((d + 1, j))

    while queue:
        d, i = queue.popleft()
        k = d + 1
        if not alive[k][i]:
            continue
        if d >= 0 and nface[k][i] == 1:
            j = next(j for j in faces[k][i] if alive[k - 1][j])
            kill(d, i)
            kill(d - 1, j)
        elif d < D and ncof[k][i] == 1:
            j = next(j for j in cofaces[k][i] if alive[k + 1][j])
            kill(d + 1, j)
            kill(d, i)
    return [[i for i, a in enumerate(alive[d + 1]) if a] for d in range(-1, D + 1)]


def reduced_homology(C: SimplicialComplex) -> HomologyGroups:
    if C.is_empty():
        return HomologyGroups([], [], empty=True)
    D = C.dimension
    survivors = _reduce_pairs(C)  # index 0 is dimension -1
    ranks = []
    factors = []
    # rank/torsion of the boundary C_d -> C_{d-1} restricted to survivors, d = 0..D
    for d in range(0, D + 1):
        cells = survivors[d + 1]
        lower = {j: k for k, j in enumerate(survivors[d])}
        if not cells or not lower:
            ranks.append(0)
            factors.append([])
            continue
        if d == 0:
            cols = [{0: 1} for _ in cells]
        else:
            face_rows = C.faces(d)
            cols = []
            for i in cells:
                col = {}
                for k, fidx in enumerate(face_rows[i].tolist()):
                    if fidx in lower:
                        col[lower[fidx]] = (-1) ** k
                cols.append(col)
        r, t = _invariant_factors(cols)
        ranks.append(r)
        factors.append(t)
    free = []
    torsion = []
    for d in range(0, D + 1):
        n_d = len(survivors[d + 1])
        rank_out = ranks[d]
        rank_in = ranks[d + 1] if d + 1 <= D else 0
        free.append(n_d - rank_out - rank_in)
        torsion.append(sorted(factors[d + 1]) if d + 1 <= D else [])
    return HomologyGroups(free, torsion)


def euler_characteristic(C: SimplicialComplex) -> int:
    return sum((-1) ** d * n for d, n in enumerate(C.f_vector))


def is_acyclic(C: SimplicialComplex) -> bool:
    return not C.is_empty() and reduced_homology(C).is_zero()


# -- text formats -----------------------------------------------------------------


def read_complex_text(text: str, source: str = "") -> SimplicialComplex:
    """Parse ``format complex v1`` or ``format poset v1`` text into a complex.

    Poset files are turned into their order complex from the ``cov`` lines.
    """
    lines = text.splitlines()
    header = None
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        header = (lineno, line)
        break
    if header is None:
        raise ParseError("empty input", 1, 1, source)
    lineno, line = header
    if line == "format complex v1":
        simplices = []
        vertex_count = None
        for n, raw in enumerate(lines, 1):
            line = raw.strip()
            if not line or line.startswith("#") or line.startswith("format"):
                continue
            parts = line.split()
            if parts[0] == "complex":
                try:
                    vertex_count = int(parts[parts.index("vertices") + 1])
                except (ValueError, IndexError):
                    raise ParseError("malformed complex header", n, 1, source) from None
                continue
            if parts[0] != "s":
                raise ParseError(f"unknown record {parts[0]!r}", n, 1, source)
            try:
                simplices.append([int(x) for x in parts[1:]])
            except ValueError:
                raise ParseError("simplex vertices must be integers", n, 3, source) from None
        return SimplicialComplex.from_simplices(simplices, vertex_count)
    if line == "format poset v1":
        n_el = 0
        covers = []
        for n, raw in enumerate(lines, 1):
            parts = raw.split()
            if not parts:
                continue
            try:
                if parts[0] == "el":
                    n_el = max(n_el, int(parts[1]) + 1)
                elif parts[0] == "cov":
                    covers.append((int(parts[1]), int(parts[2])))
            except (ValueError, IndexError):
                raise ParseError(f"malformed {parts[0]} record", n, 1, source) from None
        n_el, above = poset_from_covers(n_el, covers)
        _, relabeled = relabel_linear(n_el, above)
        return order_complex(relabeled)
    raise ParseError(f"unknown format line {line!r}", lineno, 1, source)
