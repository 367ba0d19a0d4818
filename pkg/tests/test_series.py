import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

import oracles
from acybe.algebra import matrix_algebra
from acybe.errors import IncompatibleCoefficients, NonvanishingConstantTerm, NotAUnit, NotDivisible
from acybe.series import (
    INF,
    Laurent,
    Series,
    bernoulli_expansion,
    difference_series,
    divide_by_diagonal,
    exp_series,
    invert_unit,
    series_from_json,
    series_to_json,
    substitute,
    vandermonde_divide,
)

z = Series.monomial(1)
one = Series.constant(1)
x2, y2 = Series.monomial((1, 0)), Series.monomial((0, 1))
z1, z2, z3 = Series.monomial((1, 0, 0)), Series.monomial((0, 1, 0)), Series.monomial((0, 0, 1))
small = st.integers(-5, 5)


def univariate(max_deg=5):
    return st.lists(small, min_size=1, max_size=max_deg + 1).map(lambda c: Series.from_coeffs(c, INF))


def bivariate(max_deg=4):
    exps = [(a, b) for a in range(max_deg + 1) for b in range(max_deg + 1 - a)]
    return st.lists(small, min_size=len(exps), max_size=len(exps)).map(
        lambda cs: Series(dict(zip(exps, cs)), 2, INF))


def to_sympy(f, symbols):
    return sum((oracles._q(c) * sympy.prod([s**k for s, k in zip(symbols, e)])
                for e, c in f.terms.items()), sympy.Integer(0))


def test_product_of_binomials():
    assert ((one + z) * (one - z)).truncate(2) == one - z * z


def test_laurent_inverse_monomial():
    assert Laurent.monomial(-1).mul(Laurent.monomial(1)) == Laurent.monomial(0)


def test_element_valued_product():
    A = matrix_algebra(2).algebra
    f = Series.monomial((1, 0), A.basis(0))
    g = Series.monomial((0, 1), A.basis(1))
    prod = f.mul(g, A.multiply, (4,))
    assert list(prod.coeff((1, 1))) == [0, 1, 0, 0]


def test_incompatible_coefficients():
    with pytest.raises(IncompatibleCoefficients):
        z + Series.monomial(1, np.array([1, 0], dtype=object))
    with pytest.raises(IncompatibleCoefficients):
        z + x2


def test_truncation_bookkeeping():
    f = Series.from_coeffs([1, 1, 1])
    assert (f * f).trunc == 2
    assert (f * z).trunc == 3


def test_invert_unit_examples():
    assert invert_unit(one, 4) == one
    assert invert_unit(one - z, 3) == Series.from_coeffs([1, 1, 1, 1])
    assert invert_unit(exp_series(2), 2) == Series.from_coeffs([1, -1, Fraction(1, 2)])
    with pytest.raises(NotAUnit):
        invert_unit(z, 3)


def test_invert_unit_against_sympy():
    f = exp_series(6)
    t = sympy.symbols("t")
    oracle = sympy.series(sympy.exp(-t), t, 0, 7).removeO()
    got = invert_unit(f, 6)
    assert all(oracles._q(got.coeff(k)) == oracle.coeff(t, k) for k in range(7))


def test_substitute_examples():
    assert substitute(z * z, z.scale(2), 4) == Series.from_coeffs([0, 0, 4], 4)
    geometric = Series.from_coeffs([1] * 5, INF)
    assert substitute(geometric, z * z, 4) == Series.from_coeffs([1, 0, 1, 0, 1])
    got = substitute(exp_series(3), z + z * z, 3)
    assert got == Series.from_coeffs([1, 1, Fraction(3, 2), Fraction(7, 6)])
    with pytest.raises(NonvanishingConstantTerm):
        substitute(z, one + z, 3)


def test_substitute_against_sympy():
    t = sympy.symbols("t")
    oracle = sympy.series(sympy.exp(t + t**2), t, 0, 4).removeO()
    got = substitute(exp_series(3), z + z * z, 3)
    assert all(oracles._q(got.coeff(k)) == oracle.coeff(t, k) for k in range(4))


def test_exp_series():
    assert exp_series(2) == Series.from_coeffs([1, 1, Fraction(1, 2)])


def test_bernoulli_expansion_values():
    B = bernoulli_expansion(3)
    expected = [1, Fraction(-1, 2), Fraction(1, 12), 0, Fraction(-1, 720)]
    assert [B.coeff(k) for k in range(-1, 4)] == expected


def test_bernoulli_expansion_against_recurrence():
    N = 10
    B = bernoulli_expansion(N)
    nums = oracles.bernoulli_numbers(N + 1)
    for k in range(-1, N + 1):
        assert B.coeff(k) == nums[k + 1] / math.factorial(k + 1)


def test_bernoulli_times_exp_minus_one():
    N = 8
    e = Laurent.from_series(exp_series(N + 1) - one)
    prod = bernoulli_expansion(N).mul(e)
    assert prod.truncate(N - 1) == Laurent({0: 1}, 0, N - 1)


def test_divide_by_diagonal_examples():
    assert divide_by_diagonal(x2 - y2) == Series.constant(1, 2)
    assert divide_by_diagonal(x2**2 - y2**2) == x2 + y2
    got = divide_by_diagonal(x2**3 * y2 - x2 * y2**3)
    assert got == x2 * y2 * (x2 + y2)


def test_divide_by_diagonal_reports_degree():
    with pytest.raises(NotDivisible) as info:
        divide_by_diagonal(x2 - y2 + x2 * y2)
    assert info.value.degree == 2


def test_vandermonde_examples():
    V = (z1 - z2) * (z1 - z3) * (z2 - z3)
    assert vandermonde_divide(V) == Series.constant(1, 3)
    assert vandermonde_divide(Series.zero(3)).is_zero()
    assert vandermonde_divide(V * (z1 + z2 + z3)) == z1 + z2 + z3


def test_vandermonde_rejects_non_divisible():
    with pytest.raises(NotDivisible) as info:
        vandermonde_divide((z1 - z2) * (z1 - z3) + Series.monomial((2, 1, 0)))
    assert info.value.diagonal == "z1=z3" or info.value.diagonal == "z1=z2"


def test_json_round_trip():
    f = Series({(1, 2): Fraction(3, 4), (0, 0): -1}, 2, 5)
    assert series_from_json(series_to_json(f)) == f


@given(bivariate())
def test_divide_undoes_multiplication(g):
    assert divide_by_diagonal(difference_series(2, 0, 1) * g) == g


@settings(max_examples=30, deadline=None)
@given(bivariate(3))
def test_vandermonde_undoes_multiplication(g):
    G = g.embed((0, 2), 3) + g.embed((1, 2), 3)
    V = (z1 - z2) * (z1 - z3) * (z2 - z3)
    assert vandermonde_divide(V * G) == G


@given(univariate(), univariate())
def test_product_matches_sympy(f, g):
    t = sympy.symbols("t")
    assert sympy.expand(to_sympy(f * g, [t]) - to_sympy(f, [t]) * to_sympy(g, [t])) == 0


@settings(max_examples=40, deadline=None)
@given(univariate(4), st.lists(small, min_size=4, max_size=4), st.lists(small, min_size=4, max_size=4))
def test_substitute_is_associative(f, u, v):
    N = 5
    u = Series.from_coeffs([0] + u, INF)
    v = Series.from_coeffs([0] + v, INF)
    assert substitute(substitute(f, u, N), v, N) == substitute(f, substitute(u, v, N), N)


@given(st.lists(small, min_size=1, max_size=6).filter(lambda c: c[0] != 0))
def test_inverse_is_inverse(cs):
    f = Series.from_coeffs(cs, INF)
    assert (f * invert_unit(f, 6)).truncate(6) == Series.constant(1).truncate(6)
