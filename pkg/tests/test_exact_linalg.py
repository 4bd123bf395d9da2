"""Exact linear algebra: examples, invariants, and an independent oracle."""

import random
from fractions import Fraction

import pytest

from nilhom.exact_linalg import (
    IntegerMatrix,
    RationalMatrix,
    determinant,
    exp_nilpotent,
    invert,
    nullspace_basis,
    rank,
    row_space_basis,
    smith_normal_form,
    solve,
)


def naive_rank(rows):
    """Dense Gaussian elimination over Fraction, first-nonzero pivoting."""
    a = [[Fraction(v) for v in row] for row in rows]
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][col]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(nrows):
            if i != r and a[i][col]:
                f = a[i][col] / a[r][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == nrows:
            break
    return r


def snf_2x2_oracle(a, b, c, d):
    """Elementary divisors of [[a,b],[c,d]] from gcds of entries and minors."""
    from math import gcd

    d1 = gcd(gcd(a, b), gcd(c, d))
    det = abs(a * d - b * c)
    if d1 == 0:
        return [0, 0]
    if det == 0:
        return [d1, 0]
    return [d1, det // d1]


def random_matrix(rng, nrows, ncols, density=0.7):
    rows = []
    for _ in range(nrows):
        rows.append(
            [
                Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                if rng.random() < density
                else Fraction(0)
                for _ in range(ncols)
            ]
        )
    return rows


def test_rank_examples():
    assert rank(RationalMatrix.identity(4)) == 4
    assert rank(RationalMatrix(3, 5)) == 0
    assert rank(RationalMatrix.from_rows([[2, 4], [1, 2]])) == 1


def test_rank_matches_naive_oracle():
    rng = random.Random(1729)
    for _ in range(60):
        nrows = rng.randint(1, 8)
        ncols = rng.randint(1, 8)
        rows = random_matrix(rng, nrows, ncols)
        m = RationalMatrix.from_rows(rows)
        assert rank(m) == naive_rank(rows)


def test_rank_transpose_invariant():
    rng = random.Random(99)
    for _ in range(30):
        rows = random_matrix(rng, rng.randint(1, 7), rng.randint(1, 7))
        m = RationalMatrix.from_rows(rows)
        assert rank(m) == rank(m.transpose())


def test_nullspace_examples():
    assert nullspace_basis(RationalMatrix.identity(3)) == []
    zero = RationalMatrix(2, 3)
    basis = nullspace_basis(zero)
    assert len(basis) == 3
    m = RationalMatrix.from_rows([[1, 1]])
    (vec,) = nullspace_basis(m)
    assert vec[0] * Fraction(-1) == vec[1] and vec[1] != 0


def test_rank_nullity():
    rng = random.Random(7)
    for _ in range(40):
        rows = random_matrix(rng, rng.randint(1, 7), rng.randint(1, 7))
        m = RationalMatrix.from_rows(rows)
        basis = nullspace_basis(m)
        assert rank(m) + len(basis) == m.cols
        for vec in basis:
            assert all(v == 0 for v in m.mul_vector(vec))
        if basis:
            stacked = RationalMatrix.from_rows(basis)
            assert rank(stacked) == len(basis)


def test_solve_examples():
    eye = RationalMatrix.identity(3)
    assert solve(eye, [1, 2, 3]) == (1, 2, 3)
    assert solve(RationalMatrix(2, 2), [1, 0]) is None
    assert solve(RationalMatrix.from_rows([[2]]), [1]) == (Fraction(1, 2),)
    with pytest.raises(ValueError):
        solve(eye, [1, 2])


def test_solve_consistency():
    rng = random.Random(23)
    for _ in range(30):
        rows = random_matrix(rng, rng.randint(1, 6), rng.randint(1, 6))
        m = RationalMatrix.from_rows(rows)
        x = [Fraction(rng.randint(-3, 3)) for _ in range(m.cols)]
        b = m.mul_vector(x)
        got = solve(m, b)
        assert got is not None
        assert m.mul_vector(got) == b


def test_smith_examples():
    assert smith_normal_form(IntegerMatrix.from_rows([[1, 0], [0, 1]])) == [1, 1]
    assert smith_normal_form(IntegerMatrix.from_rows([[2, 0], [0, 3]])) == [1, 6]
    assert smith_normal_form(IntegerMatrix(2, 3)) == [0, 0]


def test_smith_against_2x2_oracle():
    rng = random.Random(5)
    for _ in range(80):
        a, b, c, d = (rng.randint(-6, 6) for _ in range(4))
        m = IntegerMatrix.from_rows([[a, b], [c, d]])
        assert smith_normal_form(m) == snf_2x2_oracle(a, b, c, d)


def test_smith_divisor_chain_and_rank():
    rng = random.Random(11)
    for _ in range(40):
        nrows = rng.randint(1, 5)
        ncols = rng.randint(1, 5)
        rows = [[rng.randint(-5, 5) for _ in range(ncols)] for _ in range(nrows)]
        m = IntegerMatrix.from_rows(rows)
        divisors = smith_normal_form(m)
        assert len(divisors) == min(nrows, ncols)
        nonzero = [d for d in divisors if d]
        for prev, nxt in zip(nonzero, nonzero[1:]):
            assert nxt % prev == 0
        assert len(nonzero) == rank(m.to_rational())


def test_determinant_and_invert():
    m = RationalMatrix.from_rows([[2, 1], [1, 1]])
    assert determinant(m) == 1
    inv = invert(m)
    assert m @ inv == RationalMatrix.identity(2)
    with pytest.raises(ValueError):
        invert(RationalMatrix.from_rows([[1, 2], [2, 4]]))


def test_exp_nilpotent():
    n = RationalMatrix.from_rows([[0, 1], [0, 0]])
    assert exp_nilpotent(n) == RationalMatrix.from_rows([[1, 1], [0, 1]])
    with pytest.raises(ValueError):
        exp_nilpotent(RationalMatrix.identity(2))


def test_row_space_basis_spans():
    rng = random.Random(31)
    for _ in range(20):
        rows = random_matrix(rng, rng.randint(1, 6), rng.randint(1, 6))
        m = RationalMatrix.from_rows(rows)
        basis = row_space_basis(m)
        assert len(basis) == rank(m)
        if basis:
            assert rank(RationalMatrix.from_rows(basis)) == len(basis)
            together = RationalMatrix.from_rows(rows + [list(v) for v in basis])
            assert rank(together) == len(basis)


def test_matrix_canonical_form():
    m = RationalMatrix(2, 2, {(0, 0): Fraction(1), (0, 1): Fraction(0)})
    assert (0, 1) not in m.entries
    with pytest.raises(ValueError):
        RationalMatrix(1, 1, {(0, 1): 1})
    with pytest.raises(TypeError):
        RationalMatrix(1, 1, {(0, 0): 0.5})


def test_no_floats_in_integer_matrix():
    with pytest.raises(TypeError):
        IntegerMatrix(1, 1, {(0, 0): 1.0})


def test_entry_list_round_trip():
    m = RationalMatrix.from_rows([[Fraction(1, 2), 0], [3, Fraction(-2, 7)]])
    triples = m.entry_list()
    assert triples == sorted(triples)
    assert RationalMatrix.from_entry_list(2, 2, triples) == m
