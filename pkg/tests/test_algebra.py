from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from acybe.algebra import (
    Algebra,
    MetricAlgebra,
    casimir_gamma,
    category_predicates,
    check_gamma_invariance,
    dual_basis,
    find_unit,
    flip,
    matrix_algebra,
    metric_algebra_from_json,
    metric_algebra_to_json,
    named_algebra,
    unitalize,
    zeros,
)
from acybe.errors import DimensionMismatch, InvalidMetric, ParseError

NAMED = ["matrix:1", "matrix:2", "matrix:3", "lie:sl_2", "jordan:sym_2", "jordan:mat_2"]


def vec(d, **entries):
    v = zeros(d)
    for k, c in entries.items():
        v[int(k[1:])] = c
    return v


def test_matrix_unit_product():
    A = matrix_algebra(2).algebra
    assert list(A.multiply(A.basis(0), A.basis(1))) == [0, 1, 0, 0]


def test_matrix_structure_matches_numpy_products():
    A = matrix_algebra(3).algebra
    mats = oracles.matrix_basis(3)
    for i, a in enumerate(mats):
        for j, b in enumerate(mats):
            got = sum((c * m for c, m in zip(A.multiply(A.basis(i), A.basis(j)), mats)), zeros(3, 3))
            assert (got == a @ b).all()


def test_sl2_bracket():
    A = named_algebra("lie:sl_2").algebra
    assert A.labels == ["e", "h", "f"]
    assert list(A.multiply(A.basis(1), A.basis(0))) == [2, 0, 0]


def test_sl2_bracket_against_commutators():
    e = oracles.unit_matrix(2, 0, 1)
    f = oracles.unit_matrix(2, 1, 0)
    h = oracles.unit_matrix(2, 0, 0) - oracles.unit_matrix(2, 1, 1)
    mats = [e, h, f]
    A = named_algebra("lie:sl_2").algebra
    for i, a in enumerate(mats):
        for j, b in enumerate(mats):
            assert list(A.multiply(A.basis(i), A.basis(j))) == oracles.coords(mats, a @ b - b @ a)


def test_jordan_product_of_units():
    A = named_algebra("jordan:mat_2").algebra
    assert list(A.multiply(A.basis(0), A.basis(1))) == [0, Fraction(1, 2), 0, 0]


def test_categories_of_matrix_algebra():
    rep = category_predicates(matrix_algebra(2).algebra)
    assert rep.associative and not rep.lie and rep.unital
    assert list(rep.unit) == [1, 0, 0, 1]


def test_categories_of_sl2():
    rep = category_predicates(named_algebra("lie:sl_2").algebra)
    assert rep.lie and not rep.associative and not rep.unital


def test_categories_of_jordan_algebras():
    for name in ("jordan:mat_2", "jordan:sym_2"):
        rep = category_predicates(named_algebra(name).algebra)
        assert rep.jordan and rep.commutative


@pytest.mark.parametrize("n", [1, 2, 3])
def test_matrix_algebras_are_associative(n):
    assert category_predicates(matrix_algebra(n).algebra).associative


def test_jordan_predicate_rejects_non_jordan():
    # commutative, non-Jordan: b0 b0 = b1, b1 b0 = b0 b1 = b1, b1 b1 = b0
    C = zeros(2, 2, 2)
    C[0, 0, 1] = 1
    C[0, 1, 1] = C[1, 0, 1] = 1
    C[1, 1, 0] = 1
    rep = category_predicates(Algebra(C))
    assert rep.commutative and not rep.jordan


def test_named_gram_matrices():
    assert named_algebra("matrix:1").gram.tolist() == [[1]]
    G = matrix_algebra(2).gram
    assert G[0, 0] == 1 and G[0, 3] == 0 and G[1, 2] == 1


def test_killing_form_against_adjoint_oracle():
    e = oracles.unit_matrix(2, 0, 1)
    f = oracles.unit_matrix(2, 1, 0)
    h = oracles.unit_matrix(2, 0, 0) - oracles.unit_matrix(2, 1, 1)
    oracle = oracles.killing_gram([e, h, f])
    M = named_algebra("lie:sl_2")
    assert (M.gram == oracle).all()
    assert M.gram[1, 1] == 8


def test_trace_gram_against_oracle():
    mats = oracles.matrix_basis(2)
    G = np.array([[np.trace(a @ b) for b in mats] for a in mats], dtype=object)
    assert (matrix_algebra(2).gram == G).all()


def test_dual_basis_examples():
    assert dual_basis(named_algebra("matrix:1")).tolist() == [[1]]
    D = dual_basis(matrix_algebra(2))
    assert list(D[1]) == [0, 0, 1, 0]
    C = zeros(2, 2, 2)
    C[0, 0, 0] = C[1, 1, 1] = 1
    ortho = MetricAlgebra(Algebra(C), np.eye(2, dtype=int).astype(object))
    assert (dual_basis(ortho) == np.eye(2, dtype=int)).all()


@pytest.mark.parametrize("name", NAMED)
def test_dual_basis_pairs_to_delta(name):
    M = named_algebra(name)
    D = dual_basis(M)
    for i in range(M.dim):
        for j in range(M.dim):
            assert M.beta(M.algebra.basis(i), D[j]) == (1 if i == j else 0)


@pytest.mark.parametrize("name", NAMED)
def test_dual_of_dual_is_identity(name):
    M = named_algebra(name)
    D = dual_basis(M)
    # the dual basis of {b_i^*} is {b_i}: beta(b_i^*, b_j) = delta_ij
    assert (D @ M.gram == np.eye(M.dim, dtype=int)).all()


def test_gamma_of_matrix_algebras():
    assert casimir_gamma(named_algebra("matrix:1")).tolist() == [[1]]
    assert (oracles.tensor_to_kron(casimir_gamma(matrix_algebra(2)), 2) == oracles.trace_casimir_kron(2)).all()


def test_gamma_rescales_inversely():
    M = matrix_algebra(2)
    M2 = MetricAlgebra(M.algebra, M.gram * 2)
    assert (casimir_gamma(M2) * 2 == casimir_gamma(M)).all()


@pytest.mark.parametrize("name", NAMED)
def test_gamma_is_symmetric_and_invariant(name):
    M = named_algebra(name)
    g = casimir_gamma(M)
    assert (flip(g) == g).all()
    assert check_gamma_invariance(M)


def test_corrupted_gamma_fails_invariance():
    M = matrix_algebra(2)
    g = casimir_gamma(M).copy()
    g[0, 0], g[0, 1] = g[0, 1], g[0, 0]
    assert not check_gamma_invariance(M, g)


@pytest.mark.parametrize("name", NAMED)
def test_metric_is_associative_on_basis_triples(name):
    M = named_algebra(name)
    A = M.algebra
    for i in range(M.dim):
        for j in range(M.dim):
            ij = A.multiply(A.basis(i), A.basis(j))
            for k in range(M.dim):
                assert M.beta(ij, A.basis(k)) == M.beta(A.basis(i), A.multiply(A.basis(j), A.basis(k)))


def test_unitalize():
    U = unitalize(Algebra(zeros(0, 0, 0)))
    assert U.dim == 1 and U.C[0, 0, 0] == 1
    rep = category_predicates(unitalize(named_algebra("lie:sl_2").algebra))
    assert rep.unital and list(rep.unit) == [0, 0, 0, 1]
    U = unitalize(matrix_algebra(2).algebra)
    assert U.dim == 5
    assert list(find_unit(U)) == [0, 0, 0, 0, 1]
    assert (U.C[:4, :4, :4] == matrix_algebra(2).algebra.C).all()


def test_invalid_metrics():
    A = matrix_algebra(2).algebra
    with pytest.raises(InvalidMetric):
        MetricAlgebra(A, np.eye(4, dtype=int).astype(object))
    G = matrix_algebra(2).gram.copy()
    G[0, 1] = 1
    with pytest.raises(InvalidMetric):
        MetricAlgebra(A, G)
    with pytest.raises(InvalidMetric):
        MetricAlgebra(A, zeros(4, 4))


def test_dimension_mismatch():
    A = matrix_algebra(2).algebra
    with pytest.raises(DimensionMismatch):
        A.multiply(zeros(3), zeros(4))


def test_json_round_trip():
    M = named_algebra("lie:sl_2")
    doc = metric_algebra_to_json(M)
    assert named_algebra(doc).gram.tolist() == M.gram.tolist()
    custom = {"dim": 1, "structure": [[["1"]]], "gram": [["2"]]}
    assert metric_algebra_from_json(custom).gram[0, 0] == 2
    with pytest.raises(ParseError):
        named_algebra("banana:3")


@given(st.lists(st.integers(-3, 3), min_size=12, max_size=12))
def test_matrix_multiplication_matches_numpy(entries):
    A = matrix_algebra(2).algebra
    a, b, c = (np.array(entries[4 * k: 4 * k + 4], dtype=object) for k in range(3))
    ab = A.multiply(a, b)
    assert (ab.reshape(2, 2) == a.reshape(2, 2) @ b.reshape(2, 2)).all()
    assert (A.multiply(ab, c) == A.multiply(a, A.multiply(b, c))).all()
