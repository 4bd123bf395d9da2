"""Exact sparse linear algebra over the rationals and the integers.

Ranks, nullspaces, linear solves and Smith normal forms, all in exact
arbitrary-precision arithmetic.  There is deliberately no floating point
on any code path here: every downstream quantity (homology ranks, weight
multiplicities, group-law coefficients) must come out as an exact integer
or rational.

Elimination is fraction-free in the Bareiss style: rows are cleared to
integers, and each elimination step divides by the previous pivot, which
is exact by Sylvester's determinant identity.  Pivots are chosen by a
Markowitz minimum-fill score with a deterministic (row, column) tie-break,
so results are reproducible byte for byte.

All values are immutable after construction and all operations are pure
functions; everything in this module is safe to use concurrently.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Mapping, Sequence

__all__ = [
    "RationalMatrix",
    "IntegerMatrix",
    "rank",
    "nullspace_basis",
    "solve",
    "smith_normal_form",
    "row_space_basis",
    "determinant",
    "invert",
    "exp_nilpotent",
]


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"exact arithmetic only: cannot accept {type(value).__name__}")


class RationalMatrix:
    """Immutable sparse matrix over the rationals.

    Entries live in a dict keyed by (row, col); zero is never stored, so
    two equal matrices have equal entry dicts.  Treat instances and their
    ``entries`` dict as read-only.
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries=()) -> None:
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        data: dict[tuple[int, int], Fraction] = {}
        items = entries.items() if isinstance(entries, Mapping) else entries
        for (i, j), value in items:
            if not (0 <= i < rows and 0 <= j < cols):
                raise ValueError(f"entry ({i}, {j}) outside a {rows}x{cols} matrix")
            q = data.get((i, j), Fraction(0)) + _as_fraction(value)
            if q:
                data[(i, j)] = q
            else:
                data.pop((i, j), None)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", data)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("RationalMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, {(i, i): Fraction(1) for i in range(n)})

    @classmethod
    def from_rows(cls, rows_data: Sequence[Sequence]) -> "RationalMatrix":
        nrows = len(rows_data)
        ncols = len(rows_data[0]) if nrows else 0
        entries = {}
        for i, row in enumerate(rows_data):
            if len(row) != ncols:
                raise ValueError("ragged rows")
            for j, value in enumerate(row):
                q = _as_fraction(value)
                if q:
                    entries[(i, j)] = q
        return cls(nrows, ncols, entries)

    @classmethod
    def vstack(cls, mats: Sequence["RationalMatrix"]) -> "RationalMatrix":
        if not mats:
            return cls(0, 0)
        cols = mats[0].cols
        entries = {}
        offset = 0
        for m in mats:
            if m.cols != cols:
                raise ValueError("column count mismatch in vstack")
            for (i, j), q in m.entries.items():
                entries[(offset + i, j)] = q
            offset += m.rows
        return cls(offset, cols, entries)

    @classmethod
    def hstack(cls, mats: Sequence["RationalMatrix"]) -> "RationalMatrix":
        if not mats:
            return cls(0, 0)
        rows = mats[0].rows
        entries = {}
        offset = 0
        for m in mats:
            if m.rows != rows:
                raise ValueError("row count mismatch in hstack")
            for (i, j), q in m.entries.items():
                entries[(i, offset + j)] = q
            offset += m.cols
        return cls(rows, offset, entries)

    def entry(self, i: int, j: int) -> Fraction:
        return self.entries.get((i, j), Fraction(0))

    def to_rows(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), q in self.entries.items():
            out[i][j] = q
        return out

    def column(self, j: int) -> dict[int, Fraction]:
        return {i: q for (i, jj), q in self.entries.items() if jj == j}

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(
            self.cols, self.rows, {(j, i): q for (i, j), q in self.entries.items()}
        )

    def scaled(self, factor) -> "RationalMatrix":
        f = _as_fraction(factor)
        if not f:
            return RationalMatrix(self.rows, self.cols)
        return RationalMatrix(
            self.rows, self.cols, {k: q * f for k, q in self.entries.items()}
        )

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        data = dict(self.entries)
        for k, q in other.entries.items():
            s = data.get(k, Fraction(0)) + q
            if s:
                data[k] = s
            else:
                data.pop(k, None)
        return RationalMatrix(self.rows, self.cols, data)

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self + other.scaled(-1)

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        by_row: dict[int, list[tuple[int, Fraction]]] = {}
        for (k, j), q in other.entries.items():
            by_row.setdefault(k, []).append((j, q))
        data: dict[tuple[int, int], Fraction] = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                key = (i, j)
                s = data.get(key, Fraction(0)) + a * b
                if s:
                    data[key] = s
                else:
                    data.pop(key, None)
        return RationalMatrix(self.rows, other.cols, data)

    def mul_vector(self, vec: Sequence) -> tuple[Fraction, ...]:
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        out = [Fraction(0)] * self.rows
        for (i, j), q in self.entries.items():
            v = vec[j]
            if v:
                out[i] += q * v
        return tuple(out)

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def entry_list(self) -> list[tuple[int, int, str]]:
        """Entries as (row, col, value) triples in deterministic (row, col) order."""
        return [(i, j, str(q)) for (i, j), q in sorted(self.entries.items())]

    @classmethod
    def from_entry_list(cls, rows: int, cols: int, triples) -> "RationalMatrix":
        return cls(rows, cols, {(i, j): Fraction(v) for i, j, v in triples})

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self.entries.items())))

    def __repr__(self) -> str:
        return f"RationalMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"


class IntegerMatrix:
    """Immutable sparse matrix with arbitrary-precision integer entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries=()) -> None:
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        data: dict[tuple[int, int], int] = {}
        items = entries.items() if isinstance(entries, Mapping) else entries
        for (i, j), value in items:
            if not (0 <= i < rows and 0 <= j < cols):
                raise ValueError(f"entry ({i}, {j}) outside a {rows}x{cols} matrix")
            if not isinstance(value, int):
                raise TypeError("IntegerMatrix entries must be int")
            v = data.get((i, j), 0) + value
            if v:
                data[(i, j)] = v
            else:
                data.pop((i, j), None)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", data)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("IntegerMatrix is immutable")

    @classmethod
    def from_rows(cls, rows_data: Sequence[Sequence[int]]) -> "IntegerMatrix":
        nrows = len(rows_data)
        ncols = len(rows_data[0]) if nrows else 0
        entries = {}
        for i, row in enumerate(rows_data):
            if len(row) != ncols:
                raise ValueError("ragged rows")
            for j, value in enumerate(row):
                if value:
                    entries[(i, j)] = value
        return cls(nrows, ncols, entries)

    def to_rows(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def to_rational(self) -> RationalMatrix:
        return RationalMatrix(self.rows, self.cols, self.entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntegerMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self.entries.items())))

    def __repr__(self) -> str:
        return f"IntegerMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"


# ---------------------------------------------------------------------------
# fraction-free elimination engine


def _integer_rows(m: RationalMatrix, rhs: Sequence[Fraction] | None = None) -> list[dict[int, int]]:
    """Clear denominators row by row.

    A right-hand side, when given, is attached to each row under the
    sentinel column index ``m.cols`` and transforms with the row.
    Row scaling changes neither rank, nullspace nor solution sets.
    """
    rows: list[dict[int, Fraction]] = [dict() for _ in range(m.rows)]
    for (i, j), q in m.entries.items():
        rows[i][j] = q
    out: list[dict[int, int]] = []
    for i, row in enumerate(rows):
        values = list(row.values())
        if rhs is not None and rhs[i]:
            values.append(rhs[i])
        mult = lcm(*(v.denominator for v in values)) if values else 1
        scaled = {j: int(v * mult) for j, v in row.items()}
        if rhs is not None and rhs[i]:
            scaled[m.cols] = int(rhs[i] * mult)
        out.append(scaled)
    return out


def _bareiss(rows: list[dict[int, int]], ncols: int) -> list[tuple[int, int]]:
    """Fraction-free elimination with Markowitz pivoting, in place.

    Returns the pivot list [(row, col), ...] in elimination order.  Columns
    with index >= ncols (augmented right-hand sides) ride along and are
    never chosen as pivots.  The pivot with the least (nnz_row - 1) *
    (nnz_col - 1) score wins, ties broken by lowest row then lowest column,
    which makes the whole elimination deterministic.
    """
    nrows = len(rows)
    pivots: list[tuple[int, int]] = []
    pivot_rows: set[int] = set()
    prev = 1
    while True:
        col_count: dict[int, int] = {}
        for i in range(nrows):
            if i in pivot_rows:
                continue
            for c in rows[i]:
                if c < ncols:
                    col_count[c] = col_count.get(c, 0) + 1
        if not col_count:
            break
        best: tuple[int, int, int] | None = None
        for i in range(nrows):
            if i in pivot_rows:
                continue
            row = rows[i]
            nnz = sum(1 for c in row if c < ncols)
            if not nnz:
                continue
            for c in row:
                if c >= ncols:
                    continue
                cand = ((nnz - 1) * (col_count[c] - 1), i, c)
                if best is None or cand < best:
                    best = cand
        assert best is not None
        _, pi, pj = best
        pval = rows[pi][pj]
        prow = rows[pi]
        for k in range(nrows):
            if k == pi or k in pivot_rows:
                continue
            row = rows[k]
            if not row:
                continue
            f = row.get(pj)
            new_row: dict[int, int] = {}
            if f is None:
                # Bareiss scales untouched rows too; division stays exact.
                if pval == prev:
                    new_row = row
                else:
                    for c, v in row.items():
                        new_row[c] = v * pval // prev
            else:
                for c in row.keys() | prow.keys():
                    v = (row.get(c, 0) * pval - f * prow.get(c, 0)) // prev
                    if v:
                        new_row[c] = v
            rows[k] = new_row
        pivots.append((pi, pj))
        pivot_rows.add(pi)
        prev = pval
    return pivots


def rank(m: RationalMatrix) -> int:
    """Rank over the rationals by fraction-free elimination."""
    rows = _integer_rows(m)
    return len(_bareiss(rows, m.cols))


def nullspace_basis(m: RationalMatrix) -> list[tuple[Fraction, ...]]:
    """A deterministic basis of the right nullspace.

    One vector per free column, in increasing column order, with a 1 in
    the free coordinate; back-substitution through the pivot rows fills
    the rest.
    """
    rows = _integer_rows(m)
    pivots = _bareiss(rows, m.cols)
    pivot_cols = {c for _, c in pivots}
    basis = []
    for free in range(m.cols):
        if free in pivot_cols:
            continue
        x: dict[int, Fraction] = {free: Fraction(1)}
        for ri, ci in reversed(pivots):
            row = rows[ri]
            s = Fraction(0)
            for c, v in row.items():
                if c == ci:
                    continue
                xc = x.get(c)
                if xc is not None:
                    s += v * xc
            if s:
                x[ci] = -s / row[ci]
        basis.append(tuple(x.get(c, Fraction(0)) for c in range(m.cols)))
    return basis


def solve(m: RationalMatrix, b: Sequence) -> tuple[Fraction, ...] | None:
    """Some x with m @ x = b, or None when the system is inconsistent.

    Free variables are set to zero, so the returned solution is
    deterministic.
    """
    if len(b) != m.rows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {m.rows}")
    rhs = [_as_fraction(v) for v in b]
    rows = _integer_rows(m, rhs)
    pivots = _bareiss(rows, m.cols)
    pivot_row_set = {i for i, _ in pivots}
    for i in range(m.rows):
        if i not in pivot_row_set and rows[i].get(m.cols):
            return None
    x: dict[int, Fraction] = {}
    for ri, ci in reversed(pivots):
        row = rows[ri]
        s = Fraction(row.get(m.cols, 0))
        for c, v in row.items():
            if c == ci or c >= m.cols:
                continue
            xc = x.get(c)
            if xc is not None:
                s -= v * xc
        x[ci] = s / row[ci]
    return tuple(x.get(c, Fraction(0)) for c in range(m.cols))


def row_space_basis(m: RationalMatrix) -> list[tuple[Fraction, ...]]:
    """Echelon pivot rows, a deterministic basis of the row space."""
    rows = _integer_rows(m)
    pivots = _bareiss(rows, m.cols)
    return [
        tuple(Fraction(rows[ri].get(c, 0)) for c in range(m.cols)) for ri, _ in pivots
    ]


def determinant(m: RationalMatrix) -> Fraction:
    if m.rows != m.cols:
        raise ValueError("determinant needs a square matrix")
    a = m.to_rows()
    n = m.rows
    det = Fraction(1)
    for col in range(n):
        piv = None
        for i in range(col, n):
            if a[i][col]:
                piv = i
                break
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for i in range(col + 1, n):
            if a[i][col]:
                f = a[i][col] * inv
                for j in range(col, n):
                    a[i][j] -= f * a[col][j]
    return det


def invert(m: RationalMatrix) -> RationalMatrix:
    """Exact inverse; raises ValueError on singular input."""
    if m.rows != m.cols:
        raise ValueError("only square matrices can be inverted")
    n = m.rows
    a = m.to_rows()
    aug = [row + [Fraction(1) if i == j else Fraction(0) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = None
        for i in range(col, n):
            if aug[i][col]:
                piv = i
                break
        if piv is None:
            raise ValueError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for i in range(n):
            if i != col and aug[i][col]:
                f = aug[i][col]
                aug[i] = [v - f * w for v, w in zip(aug[i], aug[col])]
    entries = {}
    for i in range(n):
        for j in range(n):
            if aug[i][n + j]:
                entries[(i, j)] = aug[i][n + j]
    return RationalMatrix(n, n, entries)


def exp_nilpotent(m: RationalMatrix) -> RationalMatrix:
    """Finite matrix exponential of a nilpotent matrix.

    Raises ValueError when a power beyond the dimension is still nonzero.
    """
    if m.rows != m.cols:
        raise ValueError("matrix exponential needs a square matrix")
    acc = RationalMatrix.identity(m.rows)
    term = RationalMatrix.identity(m.rows)
    k = 0
    while True:
        k += 1
        term = (term @ m).scaled(Fraction(1, k))
        if term.is_zero:
            return acc
        if k > m.rows:
            raise ValueError("matrix is not nilpotent")
        acc = acc + term


def smith_normal_form(m: IntegerMatrix) -> list[int]:
    """Elementary divisors d_1 | d_2 | ... of an integer matrix.

    Returns min(rows, cols) non-negative integers, zero-padded, so the
    identity gives all ones and the zero matrix gives all zeros.  Plain
    row/column reduction with divisor-correction passes; no randomness.
    """
    a = m.to_rows()
    nrows, ncols = m.rows, m.cols
    n = min(nrows, ncols)
    t = 0
    while t < n:
        piv = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                v = a[i][j]
                if v and (piv is None or abs(v) < abs(a[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        pi, pj = piv
        if pi != t:
            a[t], a[pi] = a[pi], a[t]
        if pj != t:
            for row in a:
                row[t], row[pj] = row[pj], row[t]
        while True:
            for i in range(t + 1, nrows):
                while a[i][t]:
                    q = a[i][t] // a[t][t]
                    if q:
                        for j in range(t, ncols):
                            a[i][j] -= q * a[t][j]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
            for j in range(t + 1, ncols):
                while a[t][j]:
                    q = a[t][j] // a[t][t]
                    if q:
                        for i in range(t, nrows):
                            a[i][j] -= q * a[i][t]
                    if a[t][j]:
                        for i in range(t, nrows):
                            a[i][t], a[i][j] = a[i][j], a[i][t]
            if any(a[i][t] for i in range(t + 1, nrows)):
                continue
            pivot = a[t][t]
            offender = None
            for i in range(t + 1, nrows):
                if any(a[i][j] % pivot for j in range(t + 1, ncols)):
                    offender = i
                    break
            if offender is None:
                break
            for j in range(t, ncols):
                a[t][j] += a[offender][j]
        t += 1
    return [abs(a[k][k]) for k in range(t)] + [0] * (n - t)
