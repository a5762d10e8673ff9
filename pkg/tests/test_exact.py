from fractions import Fraction
from math import factorial

import mpmath
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from polytope_em.exact import (
    CycloNumber,
    MultiPoly,
    TruncatedSeries,
    bernoulli_number,
    bernoulli_polynomial,
    cyclo,
    cyclotomic_polynomial,
    from_json_number,
    parse_fraction,
    fraction_str,
    q_series,
    root_of_unity_order,
    simplify,
    to_json_number,
    todd_series,
    twist_series,
)

S = sympy.Symbol("S")
fractions = st.fractions(min_value=-20, max_value=20, max_denominator=30)


def sympy_coeffs(expr, order):
    poly = sympy.series(expr, S, 0, order + 1).removeO()
    return [Fraction(str(sympy.Rational(poly.coeff(S, n)))) for n in range(order + 1)]


def test_bernoulli_small_values():
    assert bernoulli_number(0) == 1
    assert bernoulli_number(1) == Fraction(-1, 2)
    assert bernoulli_number(2) == Fraction(1, 6)


def test_bernoulli_against_todd_division():
    # S / (1 - e^{-S}) = 1 - b_1 S + sum b_2k/(2k)! S^2k
    td = todd_series(12)
    assert td[1] == -bernoulli_number(1)
    for n in range(2, 13):
        assert td[n] == bernoulli_number(n) / factorial(n)


@pytest.mark.parametrize("m", range(0, 25))
def test_bernoulli_against_sympy(m):
    expected = Fraction(str(sympy.bernoulli(m)))
    if m == 1:
        expected = -expected  # sympy uses b_1 = +1/2
    assert bernoulli_number(m) == expected


@pytest.mark.parametrize("m", [3, 5, 7, 9, 11, 21])
def test_odd_bernoulli_vanish(m):
    assert bernoulli_number(m) == 0


@pytest.mark.parametrize("m,x,value", [
    (0, Fraction(7, 3), 1),
    (1, 0, Fraction(-1, 2)),
    (2, Fraction(1, 2), Fraction(-1, 12)),
])
def test_bernoulli_polynomial_examples(m, x, value):
    assert bernoulli_polynomial(m, x) == value


@given(st.integers(0, 9), fractions)
@settings(max_examples=60, deadline=None)
def test_bernoulli_polynomial_generating_function(m, x):
    X = sympy.Symbol("X")
    expected = sympy.bernoulli(m, X).subs(X, sympy.Rational(x.numerator, x.denominator))
    assert bernoulli_polynomial(m, x) == Fraction(str(expected))


def test_todd_against_sympy():
    assert list(todd_series(8).coeffs) == sympy_coeffs(S / (1 - sympy.exp(-S)), 8)


def test_q_series_examples():
    q = Fraction(3, 7)
    assert q_series(q, 0) == TruncatedSeries([1])
    assert q_series(q, 0).order == 0
    assert list(q_series(q, 2).coeffs) == [1, q - Fraction(1, 2), Fraction(1, 12)]


@given(fractions, st.sampled_from([0, 2, 4, 6, 8]))
@settings(max_examples=40, deadline=None)
def test_q_series_reflection(q, k2):
    assert q_series(q, k2).negate_variable() == q_series(1 - q, k2)


@given(fractions, st.sampled_from([2, 4, 6, 8]))
@settings(max_examples=40, deadline=None)
def test_q_series_is_shifted_todd(q, k2):
    shifted = q_series(q, k2) - TruncatedSeries([0, q - 1], k2)
    assert shifted == todd_series(k2)


def test_twist_series_trivial_lambda():
    q = Fraction(2, 5)
    assert twist_series(q, 1, 3) == q_series(q, 2)
    assert twist_series(q, 1, 4) == q_series(q, 4)


def test_twist_series_minus_one():
    q = Fraction(2, 5)
    assert list(twist_series(q, -1, 2).coeffs) == [0, q - 1 + Fraction(1, 2), Fraction(1, 4)]


@pytest.mark.parametrize("K", [2, 3, 4, 5, 6, 8])
def test_twist_series_against_numeric_taylor(K):
    mpmath.mp.dps = 40
    q = Fraction(1, 3)
    for j in range(1, K):
        lam = mpmath.exp(2j * mpmath.pi * j / K)
        ref = mpmath.taylor(lambda s: (mpmath.mpf(q.numerator) / q.denominator - 1) * s
                            + s / (1 - lam * mpmath.exp(-s)), 0, 5)
        ours = twist_series(q, cyclo(j, K, K), 5)
        assert ours[0] == 0
        for n in range(6):
            c = ours[n]
            z = c.to_complex() if isinstance(c, CycloNumber) else complex(c)
            assert abs(z - complex(ref[n])) < 1e-12


@pytest.mark.parametrize("K,j", [(2, 1), (3, 1), (3, 2), (4, 1), (4, 3), (6, 1), (6, 5)])
def test_twist_series_reflection(K, j):
    lam = cyclo(j, K, K)
    for k in (2, 3, 4, 5):
        q = Fraction(5, 9)
        assert twist_series(1 - q, lam.inverse(), k) == twist_series(q, lam, k).negate_variable()


def test_twist_series_rejects_non_root():
    with pytest.raises(ValueError):
        twist_series(Fraction(1, 2), Fraction(2), 3)
    with pytest.raises(ValueError):
        twist_series(Fraction(1, 2), CycloNumber(4, [1, 1]), 3)


def test_cyclo_examples():
    assert cyclo(0, 1, 2) == 1
    assert simplify(cyclo(1, 2, 2)) == -1
    i = cyclo(1, 4, 4)
    assert i * i == cyclo(1, 2, 4)
    assert simplify(i * i) == -1
    with pytest.raises(ValueError):
        cyclo(1, 3, 4)


@pytest.mark.parametrize("n", range(1, 31))
def test_cyclotomic_polynomial_against_sympy(n):
    x = sympy.Symbol("x")
    ref = sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs()[::-1]
    assert list(cyclotomic_polynomial(n)) == [Fraction(int(c)) for c in ref]


@pytest.mark.parametrize("L", [4, 6, 12])
def test_root_of_unity_orders(L):
    from math import gcd
    for K in [d for d in range(1, L + 1) if L % d == 0]:
        for j in range(K):
            assert root_of_unity_order(cyclo(j, K, L)) == K // gcd(j, K)


def cyclo_numbers(L):
    deg = len(cyclotomic_polynomial(L)) - 1
    return st.lists(fractions, min_size=deg, max_size=deg).map(lambda cs: CycloNumber(L, cs))


@given(st.sampled_from([3, 4, 5, 6, 12]).flatmap(lambda L: st.tuples(*[cyclo_numbers(L)] * 3)))
@settings(max_examples=60, deadline=None)
def test_cyclotomic_field_axioms(abc):
    a, b, c = abc
    assert (a + b) - b == a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    if a != 0:
        assert a * a.inverse() == 1


@given(st.integers(0, 11), st.integers(0, 11))
@settings(max_examples=30, deadline=None)
def test_cyclo_embedding_is_canonical(j1, j2):
    # e^{2 pi i j/12} built in order 12 and in order 24 agree after lifting
    assert cyclo(j1, 12, 24) == cyclo(2 * j1, 24, 24)
    assert cyclo(j1, 12, 12) * cyclo(j2, 12, 12) == cyclo((j1 + j2) % 12, 12, 12)


def test_is_rational():
    i = cyclo(1, 4, 4)
    assert not i.is_rational()
    assert (i * i).is_rational()
    assert (i + i.conjugate()).is_rational()
    assert simplify(i + i.conjugate()) == 0


def test_json_round_trips():
    for x in [Fraction(-7, 3), Fraction(0), cyclo(1, 6, 12) * Fraction(2, 5) + 1]:
        assert from_json_number(to_json_number(x)) == x
    assert fraction_str(Fraction(4)) == "4/1"
    assert parse_fraction("-3/9") == Fraction(-1, 3)


def test_series_division_is_exact():
    a = TruncatedSeries([1, 2, 3, 4, 5])
    b = TruncatedSeries([2, -1, 0, 7, 1])
    assert (a / b) * b == a


def test_multipoly_operations():
    x = MultiPoly.variable(2, 0)
    y = MultiPoly.variable(2, 1)
    p = (x + y) * (x + y) * Fraction(1, 2)
    assert p.degree() == 2
    assert p(Fraction(1), Fraction(3)) == 8
    assert p.diff(0) == x + y
    assert p.diff(0, 3).is_zero()
    assert MultiPoly.from_json(p.to_json(), 2) == p
    assert p.restrict([1]) == y * y * Fraction(1, 2)
