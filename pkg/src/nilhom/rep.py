"""Desk-scale polynomial and rational GL_r representation calculus.

Representations are symbolic expressions built from the standard
representation, its dual, constants, the Lie-functor layers, exterior
powers, tensor products, direct sums, and Hom out of the standard
representation.  An expression evaluates at a rank to its torus-weight
multiset; weight multiplicities determine a rational representation up to
isomorphism, so the weight module is the equivariant fingerprint used for
all comparisons.

At rank 2 the weight multiset is decomposed into irreducibles by greedy
character peeling, which is exact there.  Higher ranks use the
weight-dominance necessary condition instead; general Weyl character
bookkeeping buys no additional checking power at desk scale.

Coinvariants are taken against the elementary matrices E_ij(1) together
with diag(-1, 1, ..., 1), which generate the integral general linear
group; the reflection matters (it separates Lambda^r from the constants).

Functor degree is read off through finite differences of a dimension
sequence, i.e. by cross-effect vanishing.  "Polynomial" and "finite
degree" are used interchangeably here with cross-effect vanishing as the
single definition.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence, Union

from .exact_linalg import RationalMatrix, _as_fraction, invert, rank as matrix_rank
from .free_lie import hall_basis, induced_map_lie

__all__ = [
    "Std",
    "DualStd",
    "Const",
    "Lie",
    "Wedge",
    "Tensor",
    "Sum",
    "HomStd",
    "ReprExpr",
    "WeightModule",
    "NotCharacterError",
    "evaluate",
    "basis_weights",
    "action_matrix",
    "lie_interval",
    "weight_dominance_compare",
    "DominanceReport",
    "schur_decompose_gl2",
    "coinvariants_dim",
    "gl_generators",
    "degree_estimate",
    "cross_effect_dim",
    "parse_expr",
    "expr_text",
]

Weight = tuple[int, ...]


class NotCharacterError(ValueError):
    """A weight multiset is not a non-negative combination of irreducible characters."""


@dataclass(frozen=True)
class Std:
    pass


@dataclass(frozen=True)
class DualStd:
    pass


@dataclass(frozen=True)
class Const:
    dimension: int

    def __post_init__(self):
        if self.dimension < 0:
            raise ValueError("constant dimension must be non-negative")


@dataclass(frozen=True)
class Lie:
    degree: int

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("Lie layer degree must be at least 1")


@dataclass(frozen=True)
class Wedge:
    power: int
    inner: "ReprExpr"

    def __post_init__(self):
        if self.power < 0:
            raise ValueError("exterior power must be non-negative")


@dataclass(frozen=True)
class Tensor:
    left: "ReprExpr"
    right: "ReprExpr"


@dataclass(frozen=True)
class Sum:
    left: "ReprExpr"
    right: "ReprExpr"


@dataclass(frozen=True)
class HomStd:
    """Hom(standard, inner) = dual-standard tensor inner."""

    inner: "ReprExpr"


ReprExpr = Union[Std, DualStd, Const, Lie, Wedge, Tensor, Sum, HomStd]


class WeightModule:
    """Torus-weight multiset of a representation at a fixed rank."""

    __slots__ = ("rank", "weights")

    def __init__(self, rank_: int, weights: dict[Weight, int]) -> None:
        clean = {}
        for w, mult in weights.items():
            if mult < 0:
                raise ValueError("multiplicities must be non-negative")
            if len(w) != rank_:
                raise ValueError("weight length must equal the rank")
            if mult:
                clean[tuple(w)] = mult
        object.__setattr__(self, "rank", rank_)
        object.__setattr__(self, "weights", clean)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("WeightModule is immutable")

    @property
    def dimension(self) -> int:
        return sum(self.weights.values())

    def multiplicity(self, w: Weight) -> int:
        return self.weights.get(tuple(w), 0)

    def sorted_items(self) -> list[tuple[Weight, int]]:
        return sorted(self.weights.items())

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightModule):
            return NotImplemented
        return self.rank == other.rank and self.weights == other.weights

    def __repr__(self) -> str:
        return f"WeightModule(rank={self.rank}, dim={self.dimension})"


def basis_weights(expr: ReprExpr, rank_: int) -> list[Weight]:
    """Ordered basis weight labels of the evaluation at the given rank.

    The order fixes the basis used by action_matrix: tensor factors pair
    row-major, sums concatenate, exterior powers run over index
    combinations in lexicographic order.
    """
    if rank_ < 1:
        raise ValueError("rank must be at least 1")
    zero = (0,) * rank_
    if isinstance(expr, Std):
        return [tuple(1 if t == i else 0 for t in range(rank_)) for i in range(rank_)]
    if isinstance(expr, DualStd):
        return [tuple(-1 if t == i else 0 for t in range(rank_)) for i in range(rank_)]
    if isinstance(expr, Const):
        return [zero] * expr.dimension
    if isinstance(expr, Lie):
        basis = hall_basis(rank_, expr.degree)
        return [basis.multiweight(w) for w in basis.elements_of_degree(expr.degree)]
    if isinstance(expr, Wedge):
        inner = basis_weights(expr.inner, rank_)
        return [
            tuple(sum(ws) for ws in zip(zero, *(inner[i] for i in combo)))
            for combo in combinations(range(len(inner)), expr.power)
        ]
    if isinstance(expr, Tensor):
        left = basis_weights(expr.left, rank_)
        right = basis_weights(expr.right, rank_)
        return [tuple(a + b for a, b in zip(wl, wr)) for wl in left for wr in right]
    if isinstance(expr, Sum):
        return basis_weights(expr.left, rank_) + basis_weights(expr.right, rank_)
    if isinstance(expr, HomStd):
        return basis_weights(Tensor(DualStd(), expr.inner), rank_)
    raise TypeError(f"not a representation expression: {expr!r}")


def evaluate(expr: ReprExpr, rank_: int) -> WeightModule:
    """Dimension and torus-weight multiset of the evaluation at a rank."""
    counts: dict[Weight, int] = {}
    for w in basis_weights(expr, rank_):
        counts[w] = counts.get(w, 0) + 1
    return WeightModule(rank_, counts)


def _minor_det(rows: list[list[Fraction]], row_idx: Sequence[int], col_idx: Sequence[int]) -> Fraction:
    n = len(row_idx)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return rows[row_idx[0]][col_idx[0]]
    det = Fraction(0)
    for t in range(n):
        v = rows[row_idx[0]][col_idx[t]]
        if v:
            sub = _minor_det(rows, row_idx[1:], col_idx[:t] + col_idx[t + 1 :])
            det += v * sub if t % 2 == 0 else -v * sub
    return det


def action_matrix(expr: ReprExpr, matrix, rank_: int) -> RationalMatrix:
    """Matrix of an invertible r x r matrix acting on the evaluation.

    Basis order is the one fixed by basis_weights.  The dual standard
    representation acts by the inverse transpose; exterior powers act by
    minors.
    """
    rows = matrix.to_rows() if isinstance(matrix, RationalMatrix) else [
        [_as_fraction(v) for v in row] for row in matrix
    ]
    if len(rows) != rank_ or any(len(row) != rank_ for row in rows):
        raise ValueError(f"matrix must be {rank_}x{rank_}")
    base = RationalMatrix.from_rows(rows)
    if isinstance(expr, Std):
        return base
    if isinstance(expr, DualStd):
        return invert(base).transpose()
    if isinstance(expr, Const):
        return RationalMatrix.identity(expr.dimension)
    if isinstance(expr, Lie):
        return induced_map_lie(rows, expr.degree)
    if isinstance(expr, Wedge):
        inner = action_matrix(expr.inner, rows, rank_)
        dense = inner.to_rows()
        combos_r = list(combinations(range(inner.rows), expr.power))
        combos_c = list(combinations(range(inner.cols), expr.power))
        entries = {}
        for i, ri in enumerate(combos_r):
            for j, cj in enumerate(combos_c):
                det = _minor_det(dense, ri, cj)
                if det:
                    entries[(i, j)] = det
        return RationalMatrix(len(combos_r), len(combos_c), entries)
    if isinstance(expr, Tensor):
        left = action_matrix(expr.left, rows, rank_)
        right = action_matrix(expr.right, rows, rank_)
        entries = {}
        for (i1, j1), a in left.entries.items():
            for (i2, j2), b in right.entries.items():
                entries[(i1 * right.rows + i2, j1 * right.cols + j2)] = a * b
        return RationalMatrix(left.rows * right.rows, left.cols * right.cols, entries)
    if isinstance(expr, Sum):
        left = action_matrix(expr.left, rows, rank_)
        right = action_matrix(expr.right, rows, rank_)
        entries = dict(left.entries)
        for (i, j), q in right.entries.items():
            entries[(left.rows + i, left.cols + j)] = q
        return RationalMatrix(left.rows + right.rows, left.cols + right.cols, entries)
    if isinstance(expr, HomStd):
        return action_matrix(Tensor(DualStd(), expr.inner), rows, rank_)
    raise TypeError(f"not a representation expression: {expr!r}")


def lie_interval(a: int, c: int) -> ReprExpr:
    """Direct sum of the Lie layers of degrees a..c."""
    if a < 1:
        raise ValueError("lower degree must be at least 1")
    if a > c:
        raise ValueError("empty degree interval")
    expr: ReprExpr = Lie(a)
    for b in range(a + 1, c + 1):
        expr = Sum(expr, Lie(b))
    return expr


@dataclass(frozen=True)
class DominanceReport:
    holds: bool
    violations: tuple[tuple[Weight, int, int], ...]


def weight_dominance_compare(a: WeightModule, b: WeightModule) -> DominanceReport:
    """Whether every multiplicity of ``a`` is bounded by the one in ``b``."""
    if a.rank != b.rank:
        raise ValueError("rank mismatch")
    violations = []
    for w, mult in a.sorted_items():
        other = b.multiplicity(w)
        if mult > other:
            violations.append((w, mult, other))
    return DominanceReport(not violations, tuple(violations))


def schur_decompose_gl2(m: WeightModule) -> dict[tuple[int, int], int]:
    """Decomposition of a rank-2 weight multiset into irreducible highest weights.

    Greedy peeling: take the lexicographically maximal weight present; it
    must be dominant (a >= b); subtract that multiple of the irreducible
    character with weights (a-k, b+k) for k = 0..a-b; repeat until empty.
    A negative multiplicity along the way means the input was not a
    character.
    """
    if m.rank != 2:
        raise ValueError("only rank 2 is supported")
    work = dict(m.weights)
    out: dict[tuple[int, int], int] = {}
    while work:
        a, b = max(work)
        if a < b:
            raise NotCharacterError(f"maximal weight ({a}, {b}) is not dominant")
        mult = work[(a, b)]
        out[(a, b)] = mult
        for k in range(a - b + 1):
            w = (a - k, b + k)
            v = work.get(w, 0) - mult
            if v < 0:
                raise NotCharacterError(f"multiplicity of {w} drops below zero")
            if v:
                work[w] = v
            else:
                work.pop(w, None)
    return out


def gl_generators(rank_: int) -> list[tuple[tuple[int, ...], ...]]:
    """Generators of GL_rank(Z): unit elementary matrices and one reflection."""
    if rank_ < 2:
        raise ValueError("rank must be at least 2 for this generator set")
    gens = []
    for i in range(rank_):
        for j in range(rank_):
            if i == j:
                continue
            gens.append(
                tuple(
                    tuple(1 if a == b else (1 if (a, b) == (i, j) else 0) for b in range(rank_))
                    for a in range(rank_)
                )
            )
    gens.append(
        tuple(
            tuple((-1 if a == 0 else 1) if a == b else 0 for b in range(rank_))
            for a in range(rank_)
        )
    )
    return gens


def coinvariants_dim(expr: ReprExpr, rank_: int) -> int:
    """Dimension of the largest quotient with trivial integral GL action.

    Quotient by the span of (g - 1)v over the generator set of
    gl_generators and v over a basis.
    """
    if rank_ < 2:
        raise ValueError("rank must be at least 2")
    dim = len(basis_weights(expr, rank_))
    if dim == 0:
        return 0
    eye = RationalMatrix.identity(dim)
    blocks = [action_matrix(expr, g, rank_) - eye for g in gl_generators(rank_)]
    return dim - matrix_rank(RationalMatrix.hstack(blocks))


def degree_estimate(dims: Sequence[int]) -> tuple[int, bool]:
    """Polynomial degree read off a dimension sequence by finite differences.

    Returns the smallest d whose (d+1)-st differences vanish on the
    window, with a sufficiency flag that is set when the vanishing row
    holds at least two entries (one witness beyond the minimum).  When no
    difference row vanishes the estimate is the largest testable degree
    and the flag is False.
    """
    values = [int(v) for v in dims]
    if len(values) < 2:
        raise ValueError("need at least two sequence values")
    row = values
    d = 0
    while True:
        row = [row[i + 1] - row[i] for i in range(len(row) - 1)]
        if not row:
            return len(values) - 1, False
        if all(v == 0 for v in row):
            return d, len(row) >= 2
        d += 1


def cross_effect_dim(dims: Sequence[int], n: int) -> int:
    """Alternating binomial sum giving the n-th cross-effect dimension at n arguments.

    Zero for all n beyond the functor degree.
    """
    if n < 0:
        raise ValueError("arity must be non-negative")
    if len(dims) < n + 1:
        raise ValueError(f"need sequence values for ranks 0..{n}")
    return sum((-1) ** (n - k) * comb(n, k) * dims[k] for k in range(n + 1))


# -- textual form -------------------------------------------------------------

_TOKEN = re.compile(r"\s*([a-z]+|\d+|\(|\)|\[|\]|,|\.\.)")


def _tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match:
            raise ValueError(f"cannot tokenize {text[pos:]!r}")
        tokens.append(match.group(1))
        pos = match.end()
    return tokens


class _Parser:
    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected: str | None = None) -> str:
        if self.pos >= len(self.tokens):
            raise ValueError("unexpected end of expression")
        tok = self.tokens[self.pos]
        if expected is not None and tok != expected:
            raise ValueError(f"expected {expected!r}, found {tok!r}")
        self.pos += 1
        return tok

    def integer(self) -> int:
        tok = self.take()
        if not tok.isdigit():
            raise ValueError(f"expected an integer, found {tok!r}")
        return int(tok)

    def expr(self) -> ReprExpr:
        tok = self.take()
        if tok == "std":
            return Std()
        if tok == "dual":
            return DualStd()
        if tok == "const":
            self.take("(")
            n = self.integer()
            self.take(")")
            return Const(n)
        if tok == "lie":
            if self.peek() == "[":
                self.take("[")
                a = self.integer()
                self.take("..")
                c = self.integer()
                self.take("]")
                return lie_interval(a, c)
            self.take("(")
            b = self.integer()
            self.take(")")
            return Lie(b)
        if tok == "wedge":
            self.take("(")
            q = self.integer()
            self.take(",")
            inner = self.expr()
            self.take(")")
            return Wedge(q, inner)
        if tok in ("tensor", "sum"):
            self.take("(")
            left = self.expr()
            self.take(",")
            right = self.expr()
            self.take(")")
            return Tensor(left, right) if tok == "tensor" else Sum(left, right)
        if tok == "hom":
            self.take("(")
            self.take("std")
            self.take(",")
            inner = self.expr()
            self.take(")")
            return HomStd(inner)
        raise ValueError(f"unknown constructor {tok!r}")


def parse_expr(text: str) -> ReprExpr:
    """Parse the textual form, e.g. ``wedge(2, hom(std, lie[2..3]))``."""
    parser = _Parser(_tokenize(text))
    expr = parser.expr()
    if parser.peek() is not None:
        raise ValueError(f"trailing input from {parser.peek()!r}")
    return expr


def expr_text(expr: ReprExpr) -> str:
    if isinstance(expr, Std):
        return "std"
    if isinstance(expr, DualStd):
        return "dual"
    if isinstance(expr, Const):
        return f"const({expr.dimension})"
    if isinstance(expr, Lie):
        return f"lie({expr.degree})"
    if isinstance(expr, Wedge):
        return f"wedge({expr.power}, {expr_text(expr.inner)})"
    if isinstance(expr, Tensor):
        return f"tensor({expr_text(expr.left)}, {expr_text(expr.right)})"
    if isinstance(expr, Sum):
        return f"sum({expr_text(expr.left)}, {expr_text(expr.right)})"
    if isinstance(expr, HomStd):
        return f"hom(std, {expr_text(expr.inner)})"
    raise TypeError(f"not a representation expression: {expr!r}")
