import itertools
from fractions import Fraction

import numpy as np
import pytest

import oracles
from acybe.algebra import matrix_algebra, zeros
from acybe.cybe import (
    StandardFormSeries,
    bar,
    cyb,
    gcyb,
    is_skew,
    normalize_type,
    orthogonality_check,
    series_to_subspace,
    verify,
)
from acybe.dnalg import ResiduePairing, wbasis_span_check
from acybe.errors import IndexOutOfRange, InvalidPair, NotInOrder, ParseError, WindowTooSmall
from acybe.series import INF, Laurent, Series
from acybe.stolin import (
    EpsilonDouble,
    StolinPair,
    check_stolin_pair,
    enumerate_unit_pairs,
    order_N_k,
    orthogonal_of_S,
    pair_from_json,
    pair_from_solution,
    pair_to_json,
    pair_to_lagrangian,
    parabolic_P_k,
    quasi_rational_from_pair,
    rational_from_pair,
    representative_f,
)

M2 = matrix_algebra(2)
E = oracles.unit_matrix


def example_pair(chi12=1):
    return StolinPair(2, 0, [E(2, 0, 0), E(2, 0, 1)], [[0, chi12], [-chi12, 0]])


def connes_oracle(basis, chi):
    """Connes identity on all basis triples, products by numpy and coordinates by sympy."""
    m = len(basis)
    form = lambda u, v: sum(u[a] * chi[a][b] * v[b] for a in range(m) for b in range(m))
    unit = [[int(a == b) for a in range(m)] for b in range(m)]
    for a1, a2, a3 in itertools.product(range(m), repeat=3):
        val = (form(oracles.coords(basis, basis[a1] @ basis[a2]), unit[a3])
               + form(oracles.coords(basis, basis[a2] @ basis[a3]), unit[a1])
               + form(oracles.coords(basis, basis[a3] @ basis[a1]), unit[a2]))
        if val != 0:
            return False
    return True


def t0():
    t = zeros(4, 4)
    t[0, 1], t[1, 0] = 1, -1
    return t


# ---------------------------------------------------------------- P_k and N_k


def as_units(vectors):
    return sorted(tuple(int(c) for c in v) for v in vectors)


def test_parabolic_examples():
    assert as_units(parabolic_P_k(2, 0)) == as_units(np.eye(4, dtype=int))
    expected = [np.array(E(2, i, j).reshape(-1)) for i, j in [(0, 0), (0, 1), (1, 1)]]
    assert as_units(parabolic_P_k(2, 1)) == as_units(expected)
    with pytest.raises(IndexOutOfRange):
        parabolic_P_k(2, 2)


def test_order_membership():
    N1 = order_N_k(2, 1)
    e21 = np.array(E(2, 1, 0).reshape(-1), dtype=object)
    assert N1.contains(Laurent({-1: e21}, -1, 1, (4,)))
    assert not N1.contains(Laurent({0: e21}, 0, 1, (4,)))
    e12 = np.array(E(2, 0, 1).reshape(-1), dtype=object)
    assert N1.contains(Laurent({1: e12}, 0, 1, (4,)))
    with pytest.raises(WindowTooSmall):
        N1.contains(Laurent({-1: e21}, -1, 0, (4,)))
    with pytest.raises(IndexOutOfRange):
        order_N_k(2, 3)


@pytest.mark.parametrize("n,k", [(1, 0), (2, 0), (2, 1), (3, 1), (3, 2)])
def test_image_of_regular_part(n, k):
    D = EpsilonDouble(n)
    assert D.order_image(k) == D.expected_order_image(k)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_epsilon_metric(n):
    assert all(EpsilonDouble(n).metric_checks().values())


# ---------------------------------------------------------------- pairs


def test_example_pair_is_valid():
    p = example_pair()
    assert connes_oracle([E(2, 0, 0), E(2, 0, 1)], p.chi)
    assert check_stolin_pair(p).ok


def test_zero_form_is_degenerate():
    rep = check_stolin_pair(example_pair(0))
    assert rep.cocycle and not rep.nondegenerate
    assert rep.first_failure["check"] == "nondegenerate"


def test_non_cocycle_on_full_algebra():
    basis = [E(2, i, j) for i in range(2) for j in range(2)]
    chi = [[0] * 4 for _ in range(4)]
    chi[0][3], chi[3][0] = 1, -1
    assert not connes_oracle(basis, chi)
    rep = check_stolin_pair(StolinPair(2, 1, basis, chi))
    assert not rep.cocycle and rep.first_failure["check"] == "cocycle"


def test_structural_failures():
    assert not check_stolin_pair(StolinPair(2, 1, [E(2, 0, 0)], [[0]])).complements_P_k
    rep = check_stolin_pair(StolinPair(2, 0, [E(2, 0, 1), E(2, 1, 0)], [[0, 1], [-1, 0]]))
    assert not rep.closed
    rep = check_stolin_pair(StolinPair(2, 0, [E(2, 0, 0), E(2, 0, 1)], [[0, 1], [1, 0]]))
    assert not rep.skew
    with pytest.raises(InvalidPair):
        StolinPair(2, 0, [E(2, 0, 0)], [[0, 1], [1, 0]])


def test_representative_f():
    p = example_pair()
    f = representative_f(p)
    S = [E(2, 0, 0), E(2, 0, 1)]
    expected = [E(2, 1, 0), -E(2, 0, 0)]
    for got, want in zip(f, expected):
        diff = np.array(got, dtype=object).reshape(2, 2) - want
        assert all(np.trace(diff @ s) == 0 for s in S)
    # f~ pairs with S like chi
    for a in range(2):
        for b in range(2):
            assert np.trace(np.array(f[a], dtype=object).reshape(2, 2) @ S[b]) == p.chi[a][b]


def test_lagrangian_subspace():
    V = pair_to_lagrangian(example_pair())
    assert V.isotropic and V.subalgebra and V.complementary
    D = V.D
    assert all(D.beta(x, y) == 0 for x in V.basis for y in V.basis)
    perp = orthogonal_of_S(example_pair())
    assert as_units(perp) == as_units([E(2, 0, 1).reshape(-1), E(2, 1, 1).reshape(-1)])
    with pytest.raises(InvalidPair):
        pair_to_lagrangian(example_pair(0))


# ---------------------------------------------------------------- builders


def test_rational_example_has_constant_tail():
    r = rational_from_pair(example_pair())
    assert r.n == 0 and set(r.tail.terms) == {(0, 0)}
    assert (r.tail.coeff((0, 0)) == t0()).all()
    assert not oracles.constant_cyb_matrix(t0(), 2).any()


def test_quasi_rational_example():
    q = quasi_rational_from_pair(example_pair())
    gamma = M2.gram_inverse
    assert q.n == 2
    # y gamma - t0, i.e. xy gamma/(x - y) - t0 in normalized form
    assert q == normalize_type(Series.monomial((1, 1)), Series({(0, 0): -t0()}, 2, INF, (4, 4)), M2)
    assert (q.tail.coeff((0, 1)) == gamma).all()
    assert oracles.cyb_numerator_symbolic(q, 2).is_zero_matrix


def test_both_signs_of_the_remark_solve():
    for sign in (1, -1):
        q = normalize_type(Series.monomial((1, 1)), Series({(0, 0): sign * t0()}, 2, INF, (4, 4)), M2)
        assert verify(q, 6)["first_nonzero"] is None


def test_invalid_pair_is_rejected():
    with pytest.raises(InvalidPair):
        rational_from_pair(example_pair(0))
    with pytest.raises(WindowTooSmall):
        rational_from_pair(example_pair(), order=1)


def test_yang_corresponds_to_zero_subalgebra():
    p = pair_from_solution(StandardFormSeries(M2), 0)
    assert p.dim == 0 and check_stolin_pair(p).ok
    assert rational_from_pair(p) == StandardFormSeries(M2)


def test_not_in_order():
    T = zeros(4, 4)
    T[2, 0] = 1
    T[0, 2] = -1
    r = StandardFormSeries(M2, 0, None, Series({(1, 0): T, (0, 1): -T.T}, 2, INF, (4, 4)))
    with pytest.raises(NotInOrder):
        pair_from_solution(r, 1)


@pytest.mark.parametrize("k", [0, 1])
def test_enumerated_pairs_round_trip(k):
    pairs = enumerate_unit_pairs(2, k)
    assert pairs
    for p in pairs:
        assert check_stolin_pair(p).ok
        for build, n in ((rational_from_pair, 0), (quasi_rational_from_pair, 2)):
            r = build(p, 4)
            assert r.n == n and is_skew(r)
            assert cyb(r, 4).is_zero() and gcyb(r, 4).is_zero()
            P = ResiduePairing(M2, n)
            assert orthogonality_check(r, P, (-2, 2)).ok
            assert wbasis_span_check(series_to_subspace(r), P, (-2, 2)).ok
            assert pair_from_solution(r, k) == p


def test_example_subalgebra_is_enumerated():
    target = [list(b) for b in example_pair().canonical().S_basis]
    assert any([list(b) for b in p.canonical().S_basis] == target for p in enumerate_unit_pairs(2, 0))


def test_enumerator_limit():
    with pytest.raises(IndexOutOfRange):
        enumerate_unit_pairs(3, 0)


def test_pair_json_round_trip():
    p = example_pair(Fraction(3, 2))
    assert pair_from_json(pair_to_json(p)) == p
    with pytest.raises(ParseError):
        pair_from_json({"n": 2})
