"""Exact polynomial and matrix kernels, checked against sympy."""

from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st

from bendlab import polys
from bendlab.intervals import Interval
from bendlab.matrix import Matrix, nullspace_rows, rank_rows

X = sympy.Symbol("X")
ints = st.integers(min_value=-6, max_value=6)


def to_sympy(p):
    return sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in map(Fraction, p)])), X)


@given(st.lists(ints, min_size=2, max_size=7))
def test_real_root_count_matches_sympy(coeffs):
    p = polys.strip([Fraction(c) for c in coeffs])
    assume(polys.degree(p) >= 1)
    sqf = polys.squarefree_part(p)
    isolated = polys.isolate_real_roots(sqf)
    expected = sympy.real_roots(to_sympy(sqf))
    assert len(isolated) == len(expected)
    for iv, r in zip(isolated, sorted(expected, key=float)):
        assert iv.lo - Fraction(1, 10**9) <= Fraction(float(r)) <= iv.hi + Fraction(1, 10**9)


@given(st.lists(ints, min_size=2, max_size=6), st.lists(ints, min_size=2, max_size=6))
def test_gcd_matches_sympy(a, b):
    p = polys.strip([Fraction(c) for c in a])
    q = polys.strip([Fraction(c) for c in b])
    assume(polys.degree(p) >= 1 and polys.degree(q) >= 1)
    g = polys.monic(polys.gcd(p, q))
    expected = sympy.gcd(to_sympy(p), to_sympy(q)).monic()
    assert to_sympy(g).all_coeffs() == expected.all_coeffs()


def test_squarefree_decomposition():
    # (x - 1)^2 (x + 2)^3
    p = polys.mul(polys.mul([Fraction(-1), 1], [Fraction(-1), 1]),
                  polys.mul(polys.mul([Fraction(2), 1], [Fraction(2), 1]), [Fraction(2), 1]))
    parts = {k: polys.monic(g) for g, k in polys.squarefree_decomposition(p)}
    assert parts[2] == [Fraction(-1), Fraction(1)]
    assert parts[3] == [Fraction(2), Fraction(1)]


def test_refine_root_width():
    p = [Fraction(-2), Fraction(0), Fraction(1)]
    iv = polys.isolate_real_roots(p)[1]
    r = polys.refine_root(p, iv, Fraction(1, 2**50))
    assert r.width <= Fraction(1, 2**50)
    assert r.lo ** 2 <= 2 <= r.hi ** 2


def test_interval_arithmetic_encloses():
    a, b = Interval(Fraction(1), Fraction(2)), Interval(Fraction(-3), Fraction(1, 2))
    prod = a * b
    for x in (1, Fraction(3, 2), 2):
        for y in (-3, 0, Fraction(1, 2)):
            assert prod.lo <= x * y <= prod.hi


square = st.lists(st.lists(ints, min_size=3, max_size=3), min_size=3, max_size=3)


@given(square)
def test_det_and_charpoly_match_sympy(rows):
    A = Matrix(rows)
    S = sympy.Matrix(rows)
    assert A.det() == S.det()
    cp = A.charpoly()
    assert to_sympy(cp) == S.charpoly(X)


@given(square)
def test_rank_and_nullspace_match_sympy(rows):
    S = sympy.Matrix(rows)
    assert rank_rows(rows) == S.rank()
    kernel = nullspace_rows(rows, 3)
    assert len(kernel) == len(S.nullspace())
    for v in kernel:
        assert all(sum(r[j] * v[j] for j in range(3)) == 0 for r in rows)


@given(square)
def test_inverse(rows):
    A = Matrix(rows)
    assume(A.det() != 0)
    assert (A * A.inverse()).is_identity()
    assert A.inverse() == Matrix(sympy.Matrix(rows).inv().tolist()).map(
        lambda x: Fraction(int(x.p), int(x.q)))


def test_singular_inverse_raises():
    from bendlab.errors import Singular

    with pytest.raises(Singular):
        Matrix([[1, 2], [2, 4]]).inverse()
