from fractions import Fraction

import sympy
from hypothesis import given, settings, strategies as st

from su21 import qlinalg

entry = st.fractions(min_value=-4, max_value=4, max_denominator=3)


def matrices(n, m=None):
    m = m or n
    return st.lists(st.lists(entry, min_size=m, max_size=m), min_size=n, max_size=n)


def S(A):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in A])


@settings(max_examples=80, deadline=None)
@given(matrices(3, 4))
def test_rank_matches_sympy(A):
    assert qlinalg.rank(A) == S(A).rank()


@settings(max_examples=80, deadline=None)
@given(matrices(3), st.lists(entry, min_size=3, max_size=3))
def test_solve_matches_sympy(A, b):
    x = qlinalg.solve(A, b)
    if S(A).rank() == 3:
        expected = S(A).LUsolve(S([b]).T)
        assert [sympy.Rational(v.numerator, v.denominator) for v in x] == list(expected)
    elif x is not None:
        assert [sum(a * v for a, v in zip(r, x)) for r in A] == b


@settings(max_examples=60, deadline=None)
@given(matrices(3))
def test_charpoly_matches_sympy(A):
    lam = sympy.Symbol("lam")
    expected = sympy.Poly(S(A).charpoly(lam).as_expr(), lam).all_coeffs()[::-1]
    got = qlinalg.charpoly(A, one=Fraction(1))
    assert [sympy.Rational(c.numerator, c.denominator) for c in got] == expected


@settings(max_examples=60, deadline=None)
@given(matrices(3, 4))
def test_nullspace_is_kernel(A):
    N = qlinalg.nullspace(A)
    assert len(N) == 4 - S(A).rank()
    for v in N:
        assert all(sum(a * x for a, x in zip(r, v)) == 0 for r in A)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=1, max_size=5))
def test_lattice_basis_spans_same_lattice(vecs):
    B = qlinalg.lattice_basis(vecs)
    # same rational span, and every input is an integer combination of B
    assert S([[Fraction(x) for x in v] for v in vecs]).rank() == len(B) if B else all(not any(v) for v in vecs)
    for v in vecs:
        if not B:
            continue
        sol = sympy.Matrix(B).T.gauss_jordan_solve(sympy.Matrix(v))[0]
        assert all(c.is_integer for c in sol)
    if B:
        # inputs lie in Z-span(B); equal gcds of maximal minors force equality
        assert _minor_gcd(vecs, len(B)) == _minor_gcd(B, len(B))


def _minor_gcd(rows, r):
    from itertools import combinations
    from math import gcd

    g = 0
    M = sympy.Matrix(rows)
    for ri in combinations(range(M.rows), r):
        for ci in combinations(range(M.cols), r):
            g = gcd(g, int(M.extract(list(ri), list(ci)).det()))
    return g


def test_inverse_exact():
    A = [[Fraction(2), Fraction(1)], [Fraction(7), Fraction(4)]]
    assert qlinalg.inverse(A) == [[4, -1], [-7, 2]]
