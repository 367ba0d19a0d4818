from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from acybe.algebra import casimir_gamma, matrix_algebra, named_algebra, zeros
from acybe.dnalg import (
    DnElement,
    RInfinityElement,
    RnElement,
    ResiduePairing,
    WBasis,
    beta_n_lambda,
    check_pole_expansion,
    dn_multiply,
    pole_expansion,
    residue,
    w_generator,
    wbasis_from_json,
    wbasis_span_check,
    wbasis_to_json,
)
from acybe.errors import IndexOutOfRange, ParameterMismatch, WindowTooSmall
from acybe.series import INF, Laurent, Series, invert_unit

M1 = matrix_algebra(1)
M2 = matrix_algebra(2)
ONE = np.array([1], dtype=object)


def scalar_element(n, left=None, right=None):
    left = Laurent({k: np.array([c], dtype=object) for k, c in (left or {}).items()},
                   min(list(left or {0: 0}) + [0]), INF, (1,))
    return DnElement(M1, n, left, [np.array([c], dtype=object) for c in (right or [])])


def test_product_of_poles():
    x = scalar_element(1, {-1: 1})
    assert dn_multiply(x, x) == scalar_element(1, {-2: 1})


def test_diagonal_unit_is_idempotent():
    u = DnElement.diagonal(M1, 1, ONE)
    assert u * u == u


def test_right_component_reduced_mod_z_n():
    x = scalar_element(2, right=[0, 1])
    assert (x * x).is_zero()


def test_parameter_mismatch():
    with pytest.raises(ParameterMismatch):
        scalar_element(1) * scalar_element(2)


def test_residue_examples():
    assert residue(Laurent.monomial(-1)) == 1
    assert residue(Laurent.monomial(0)) == 0
    geometric = Laurent.from_series(invert_unit(Series.from_coeffs([1, -1], INF), 4), shift=-2)
    assert residue(geometric) == 1
    with pytest.raises(WindowTooSmall):
        residue(Laurent({}, -5, -3))


def test_pairing_examples():
    P0 = ResiduePairing(M1, 0)
    assert beta_n_lambda(P0, scalar_element(0, {-1: 1}), scalar_element(0, {0: 1})) == 1
    P1 = ResiduePairing(M1, 1)
    w = scalar_element(1, right=[-1])
    assert P1(w, w) == -1


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_diagonal_is_isotropic(n):
    P = ResiduePairing(M2, n)
    monos = [DnElement.monomial(M2, n, k, M2.algebra.basis(i)) for k in range(5) for i in range(4)]
    assert all(P(a, b) == 0 for a in monos for b in monos)


def test_general_lambda_pairing():
    lam = Series.from_coeffs([2, 1], INF)
    with pytest.raises(ValueError):
        ResiduePairing(M1, 1, lam)
    P = ResiduePairing(M1, 1, lam, general_lambda=True)
    # res z^-2 (2 + z)^-1 is the z^1 coefficient of 1/2 - z/4 + ...
    assert P(scalar_element(1, {-1: 1}), scalar_element(1, {0: 1})) == Fraction(-1, 4)


def test_pole_expansion_small_cases():
    E0 = pole_expansion(0, 3)
    assert set(E0) == {0, 1, 2, 3}
    assert E0[2] == scalar_element(0, {-3: 1})
    E1 = pole_expansion(1, 2)
    assert E1[-1] == scalar_element(1, right=[-1])
    assert E1[0] == scalar_element(1, {-1: 1})


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_pole_expansion_identity(n):
    assert check_pole_expansion(n, 6)


def test_w_generator_examples():
    assert w_generator(M1, 1, 0, 0) == scalar_element(1, right=[-1])
    assert w_generator(M1, 1, 2, 0) == scalar_element(1, {-2: 1})
    g = w_generator(M2, 0, 0, 1)
    assert list(g.left.coeff(-1)) == [0, 0, 1, 0]
    with pytest.raises(IndexOutOfRange):
        w_generator(M2, 1, 0, 4)


@pytest.mark.parametrize("name", ["matrix:2", "lie:sl_2"])
@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_generators_reproduce_pole_term(name, n):
    M = named_algebra(name)
    d = M.dim
    gamma = casimir_gamma(M)
    E = pole_expansion(n, 4)
    for k in range(n + 4):
        for i in range(d):
            w = w_generator(M, n, k, i)
            # coefficient of y^k in y^n gamma/(x - y), column i of gamma
            e = E[k - n]
            expected_left = Laurent({p: c[0] * gamma[:, i] for p, c in e.left.terms.items()},
                                    e.left.low, INF, (d,))
            expected = DnElement(M, n, expected_left, [c[0] * gamma[:, i] for c in e.right])
            assert w == expected


def _random_element(draw, M, n):
    d = M.dim
    ints = st.integers(-2, 2)
    left = {k: np.array([draw(ints) for _ in range(d)], dtype=object) for k in range(-2, 3)}
    right = [np.array([draw(ints) for _ in range(d)], dtype=object) for _ in range(n)]
    return DnElement(M, n, Laurent(left, -2, INF, (d,)), right)


@settings(max_examples=25, deadline=None)
@given(st.data(), st.integers(0, 2))
def test_pairing_symmetric_and_associative(data, n):
    P = ResiduePairing(M2, n)
    a, b, c = (_random_element(data.draw, M2, n) for _ in range(3))
    assert P(a, b) == P(b, a)
    assert P(a * b, c) == P(a, b * c)


def test_zero_tails_n1_scalar():
    W = WBasis(M1, 1)
    rep = wbasis_span_check(W, ResiduePairing(M1, 1), (-2, 2))
    assert rep.subalgebra and rep.complementary and not rep.isotropic
    assert rep.first_failure["check"] == "isotropic"


def test_zero_tails_n0_is_lagrangian():
    rep = wbasis_span_check(WBasis(M2, 0), ResiduePairing(M2, 0), (-2, 2))
    assert rep.ok


def test_corrupted_tail_breaks_isotropy():
    tail = Series({(0,): np.array([1, 0, 0, 0], dtype=object)}, 1, INF, (4,))
    W = WBasis(M2, 0, {(0, 1): tail})
    rep = wbasis_span_check(W, ResiduePairing(M2, 0), (-2, 2))
    assert not rep.isotropic


def test_window_too_small():
    with pytest.raises(WindowTooSmall):
        wbasis_span_check(WBasis(M2, 2), ResiduePairing(M2, 2), (-2, 0))


def test_wbasis_json_round_trip():
    tail = Series({(1,): np.array([1, 0, Fraction(1, 2), 0], dtype=object)}, 1, INF, (4,))
    W = WBasis(M2, 2, {(0, 3): tail})
    assert wbasis_from_json(wbasis_to_json(W), M2) == W


def test_rn_trace():
    # res (3 z^-1 + 5 z - 7 - 11 z) / z^2 = 5 - 11
    x = RnElement(2, Laurent({-1: 3, 1: 5}, -1, INF), [7, 11])
    assert x.trace() == -6
    y = RnElement(0, Laurent({-1: 3}, -1, INF))
    assert y.trace() == 3


def test_r_infinity_table():
    a2 = RInfinityElement(a={2: 1})
    z = RInfinityElement(series={1: 1})
    assert a2 * z == RInfinityElement(a={1: 1})
    assert (a2 * z * z * z).is_zero()
    assert (a2 * RInfinityElement(a={0: 1})).is_zero()
    assert (a2 * z * z).trace() == 1
    # k[[z]] is isotropic for the trace
    assert (z * z).trace() == 0
