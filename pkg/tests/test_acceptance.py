"""Acceptance suite: one test per criterion, each reported as a PASS/FAIL line.

Run with ``python3 tests/test_acceptance.py`` or ``pytest tests/test_acceptance.py``.
"""
import io
import itertools
import math
import time
from fractions import Fraction

import numpy as np
import pytest
import sympy

import oracles
from acybe import cli
from acybe.algebra import casimir_gamma, check_gamma_invariance, is_associative, named_algebra, zeros
from acybe.bialgebra import (
    build_double,
    check_associative_cocycle,
    check_balanced,
    check_jordan_identities,
    check_lie_cocycle,
    coboundary,
    cocycles_agree,
    delta_from_r,
    determined_delta,
    determined_delta_series,
    FiniteBialgebra,
    manin_triple_check,
    manin_triple_series,
)
from acybe.cybe import (
    StandardFormSeries,
    TrigFormData,
    bar,
    constant_cyb,
    cyb,
    emit_standard_form,
    gcyb,
    gcyb_pairing_identity,
    is_skew,
    normalize_type,
    orthogonality_check,
    series_to_subspace,
    solution_from_json,
    subspace_to_series,
    verify,
)
from acybe.dnalg import DnElement, ResiduePairing, check_pole_expansion, pole_expansion, w_generator, wbasis_span_check
from acybe.series import INF, Laurent, Series, bernoulli_expansion
from acybe.stolin import (
    check_stolin_pair,
    pair_from_json,
    pair_from_solution,
    quasi_rational_from_pair,
    rational_from_pair,
)

M1 = named_algebra("matrix:1")
M2 = named_algebra("matrix:2")
SL2 = named_algebra("lie:sl_2")
SYM2 = named_algebra("jordan:sym_2")

BUNDLED_SOLUTIONS = ["yang_m1", "yang_m2", "constant_m2", "rational_m2", "quasi_rational_m2",
                     "corrupted_m2", "nonskew_m2"]


def t0():
    t = zeros(4, 4)
    t[0, 1], t[1, 0] = 1, -1
    return t


def bundled(name):
    return solution_from_json(cli.load_json(f"bundled:{name}.json"))


def example_pair():
    return pair_from_json(cli.load_json("bundled:pair_m2.json"))


def cli_code(*argv):
    return cli.run(list(argv), stdout=io.StringIO())


@pytest.mark.criterion(1, "gamma invariance on five algebras, < 5 s")
def test_criterion_01_gamma_invariance():
    start = time.perf_counter()
    for name in ["matrix:1", "matrix:2", "matrix:3", "lie:sl_2", "jordan:sym_2"]:
        assert check_gamma_invariance(named_algebra(name)), name
    assert time.perf_counter() - start < 5


@pytest.mark.criterion(2, "Yang solution through degree 6, < 30 s")
def test_criterion_02_yang():
    start = time.perf_counter()
    for M in (M1, M2):
        r = StandardFormSeries(M)
        assert cyb(r, 6).is_zero()
        assert verify(r, 6)["verified_through_degree"] == 6
    z1, z2, z3 = oracles.z1, oracles.z2, oracles.z3
    assert sympy.expand((z2 - z3) - (z1 - z3) + (z1 - z2)) == 0
    assert oracles.cyb_numerator_symbolic(StandardFormSeries(M1), 1).is_zero_matrix
    assert time.perf_counter() - start < 30


@pytest.mark.criterion(3, "constant solution e11(x)e12 - e12(x)e11 over matrix:2")
def test_criterion_03_constant_solution():
    t = t0()
    assert not oracles.constant_cyb_matrix(t, 2).any()
    assert all(v == 0 for v in np.asarray(constant_cyb(M2.algebra, t)).ravel())
    r = bundled("constant_m2")
    assert (r.tail.coeff((0, 0)) == t).all()
    assert verify(r, 6)["first_nonzero"] is None


@pytest.mark.criterion(4, "Stolin pair round trip, rational and quasi-rational")
def test_criterion_04_stolin_round_trip():
    p = example_pair()
    assert check_stolin_pair(p).ok
    for build, n in ((rational_from_pair, 0), (quasi_rational_from_pair, 2)):
        r = build(p)
        assert r.n == n
        assert cyb(r, 6).is_zero() and is_skew(r)
        P = ResiduePairing(M2, n)
        assert orthogonality_check(r, P, (-3, 3)).ok
        assert wbasis_span_check(series_to_subspace(r), P, (-4, 4)).ok
        back = pair_from_solution(r, 0)
        assert back == p
        assert [list(b) for b in back.S_basis] == [list(b) for b in p.S_basis]
    q = quasi_rational_from_pair(p)
    normalized = normalize_type(Series.monomial((1, 1)), Series({(0, 0): -t0()}, 2, INF, (4, 4)), M2)
    assert q == normalized
    assert (normalized.n, normalized.lam.coeff((0,))) == (2, 1)
    assert all(e == (0,) for e in normalized.lam.terms)


@pytest.mark.criterion(5, "series <-> subspace, orthogonality, GCYB pairing identity")
def test_criterion_05_series_subspace_suite():
    T = zeros(4, 4)
    T[0, 0] = 1
    linear = StandardFormSeries(M2, 0, None, Series({(1, 0): T}, 2, INF, (4, 4)))
    cases = [(bundled("quasi_rational_m2"), True), (bundled("corrupted_m2"), False), (linear, False)]
    saw_nonzero = False
    for r, solves in cases:
        assert (verify(r, 4)["first_nonzero"] is None) == solves
        W = series_to_subspace(r)
        assert subspace_to_series(W) == r
        assert series_to_subspace(subspace_to_series(W)) == W
        P = ResiduePairing(M2, r.n)
        assert orthogonality_check(r, P, (-2, 2)).ok
        rep = gcyb_pairing_identity(r, P, (-1, 1))
        assert rep.ok
        saw_nonzero = saw_nonzero or rep.nonzero > 0
    assert saw_nonzero


@pytest.mark.criterion(6, "verified bundled solutions are skew; y gamma/(x-y) is not")
def test_criterion_06_automatic_skew_symmetry():
    verified = [n for n in BUNDLED_SOLUTIONS if verify(bundled(n), 6)["first_nonzero"] is None]
    assert set(verified) == {"yang_m1", "yang_m2", "constant_m2", "rational_m2", "quasi_rational_m2"}
    for name in verified:
        r = bundled(name)
        assert is_skew(r) and bar(r) == r, name
    nonskew = bundled("nonskew_m2")
    assert nonskew == StandardFormSeries(M2, 1)
    assert not is_skew(nonskew)
    rep = wbasis_span_check(series_to_subspace(nonskew), ResiduePairing(M2, 1), (-2, 2))
    assert not rep.isotropic


@pytest.mark.criterion(7, "D-bialgebra axioms: associative, Lie, Jordan")
def test_criterion_07_bialgebra_axioms():
    delta = delta_from_r(bundled("rational_m2"), 4)
    flipped = delta.flipped()
    assert check_associative_cocycle(flipped, 4)
    assert check_balanced(flipped, 4)
    assert check_lie_cocycle(delta_from_r(StandardFormSeries(SL2), 4), 4)
    assert check_jordan_identities(FiniteBialgebra(SYM2.algebra, zeros(3, 3, 3)))


@pytest.mark.criterion(8, "classical double of (matrix:2, co-opposite coboundary of t), < 10 s")
def test_criterion_08_double():
    start = time.perf_counter()
    B = coboundary(M2, t0()).co_opposite()
    D = build_double(B)
    alg = D.algebra
    assert alg.dim == 8
    basis = [alg.basis(i) for i in range(8)]
    failures = []
    for a, b, c in itertools.product(range(8), repeat=3):
        x, y, z = basis[a], basis[b], basis[c]
        if (alg.multiply(alg.multiply(x, y), z) != alg.multiply(x, alg.multiply(y, z))).any():
            failures.append((a, b, c))
    ev = np.asarray(D.ev, dtype=object)
    assert (ev == ev.T).all()
    assert sympy.Matrix(ev.tolist()).rank() == 8
    plus, minus = basis[:4], basis[4:]
    assert manin_triple_check(alg, D.ev, plus, minus).ok
    assert (determined_delta(alg, D.ev, plus, minus) == B.delta).all()
    assert time.perf_counter() - start < 10
    assert not failures, f"{len(failures)} of 512 triples fail associativity, first {failures[0]}"
    assert is_associative(alg)


@pytest.mark.criterion(9, "Manin triple over D_2(matrix:2) in window [-4, 4]")
def test_criterion_09_manin_triple_series():
    q = bundled("quasi_rational_m2")
    W = series_to_subspace(q)
    P = ResiduePairing(M2, 2)
    assert manin_triple_series(W, P, (-4, 4)).ok
    determined = determined_delta_series(W, P, 3, 4)
    assert cocycles_agree(determined, delta_from_r(q, 3), 3) is None


@pytest.mark.criterion(10, "Bernoulli expansion and the trigonometric candidate, < 60 s")
def test_criterion_10_trigonometric():
    start = time.perf_counter()
    N = 10
    B = bernoulli_expansion(N)
    assert [B.coeff(k) for k in range(-1, 4)] == [1, Fraction(-1, 2), Fraction(1, 12), 0, Fraction(-1, 720)]
    nums = oracles.bernoulli_numbers(N + 1)
    for k in range(-1, N + 1):
        assert B.coeff(k) == nums[k + 1] / math.factorial(k + 1)
    r = emit_standard_form("trig", TrigFormData(zeros(4, 4) + np.eye(4, dtype=int), 1), M2, 4)
    rep = verify(r, 3)
    assert rep["first_nonzero"] is not None and rep["first_nonzero"]["degree"] <= 3
    assert time.perf_counter() - start < 60


@pytest.mark.criterion(11, "pole expansion and the W generators")
def test_criterion_11_pole_expansion():
    for n in range(4):
        assert check_pole_expansion(n, 6)
    for M in (M2, SL2):
        d = M.dim
        gamma = casimir_gamma(M)
        for n in range(4):
            E = pole_expansion(n, 4)
            for k in range(n + 4):
                e = E[k - n]
                for i in range(d):
                    left = Laurent({p: c[0] * gamma[:, i] for p, c in e.left.terms.items()}, e.left.low, INF, (d,))
                    assert w_generator(M, n, k, i) == DnElement(M, n, left, [c[0] * gamma[:, i] for c in e.right])


@pytest.mark.criterion(12, "negative controls and exit codes")
def test_criterion_12_negative_controls():
    rep = verify(bundled("corrupted_m2"), 6)
    assert rep["first_nonzero"]["degree"] == 0 and rep["first_nonzero"]["exp"] == [0, 0, 0]
    rep = verify(bundled("nonskew_m2"), 6)
    assert rep["first_nonzero"] is not None and "exp" in rep["first_nonzero"]
    T = zeros(4, 4)
    T[0, 0] = 1
    non_solution = StandardFormSeries(M2, 0, None, Series({(1, 0): T}, 2, INF, (4, 4)))
    assert verify(non_solution, 4, "gcybe")["first_nonzero"] is not None

    bad = check_stolin_pair(pair_from_json(cli.load_json("bundled:invalid_pair_m2.json")))
    assert not bad.ok and bad.first_failure["check"] == "nondegenerate"

    assert not check_gamma_invariance(M2, casimir_gamma(M2)[:, [1, 0, 2, 3]])

    unflipped = check_associative_cocycle(delta_from_r(bundled("rational_m2"), 2), 2)
    assert not unflipped.ok and unflipped.first_failure is not None

    span = wbasis_span_check(series_to_subspace(bundled("nonskew_m2")), ResiduePairing(M2, 1), (-2, 2))
    assert not span.ok and span.first_failure is not None

    assert cli_code("verify", "bundled:yang_m2.json") == 0
    assert cli_code("verify", "bundled:corrupted_m2.json") == 1
    assert cli_code("build-stolin", "bundled:invalid_pair_m2.json") == 1
    assert cli_code("double", "bundled:coboundary_flipped_m2.json", "--category", "associative") == 1
    assert cli_code("verify", "/nonexistent.json") == 2
    assert cli_code("verify", "bundled:yang_m2.json", "--order", "x") == 2


if __name__ == "__main__":
    import sys
    from pathlib import Path

    sys.exit(pytest.main([str(Path(__file__)), "-q", "-p", "no:cacheprovider"]))
