"""Finite-dimensional algebras by structure constants, algebra metrics and gamma.

Elements and tensors are numpy arrays of dtype ``object`` holding exact
scalars: an element of A has shape (d,), an element of A (x) A shape (d, d)
and so on, indexed by the distinguished basis b_0, ..., b_{d-1}.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg
from .errors import DimensionMismatch, InvalidMetric, ParseError, SingularGram
from .scalars import format_scalar, parse_scalar


def zeros(*shape):
    return np.zeros(shape, dtype=object)


def as_array(data):
    """Object array of exact scalars from nested lists (strings are parsed)."""
    arr = np.array(data, dtype=object)
    flat = arr.reshape(-1)
    for idx, x in enumerate(flat):
        if isinstance(x, str):
            flat[idx] = parse_scalar(x)
        elif isinstance(x, float):
            raise ParseError(f"floating point value {x!r} is not exact")
    return arr


def is_zero(x) -> bool:
    if isinstance(x, np.ndarray):
        return all(v == 0 for v in x.flat)
    return x == 0


def to_lists(arr):
    """Nested lists of canonical scalar strings."""
    if isinstance(arr, np.ndarray):
        if arr.ndim == 0:
            return format_scalar(arr.item())
        return [to_lists(x) for x in arr]
    return format_scalar(arr)


class Algebra:
    """Algebra with multiplication b_i b_j = sum_k C[i, j, k] b_k."""

    def __init__(self, structure, labels=None, name=None):
        C = as_array(structure)
        if C.ndim != 3 or not (C.shape[0] == C.shape[1] == C.shape[2]):
            if C.size == 0:
                C = zeros(0, 0, 0)
            else:
                raise DimensionMismatch(f"structure constants must have shape (d, d, d), got {C.shape}")
        self.C = C
        self.dim = C.shape[0]
        self.labels = list(labels) if labels is not None else [f"b{i}" for i in range(self.dim)]
        if len(self.labels) != self.dim:
            raise DimensionMismatch("one label per basis element is required")
        self.name = name

    def basis(self, i: int):
        v = zeros(self.dim)
        v[i] = 1
        return v

    def element(self, coeffs):
        v = as_array(coeffs)
        if v.shape != (self.dim,):
            raise DimensionMismatch(f"element of length {self.dim} expected, got shape {v.shape}")
        return v

    def multiply(self, x, y):
        x, y = np.asarray(x, dtype=object), np.asarray(y, dtype=object)
        if x.shape != (self.dim,) or y.shape != (self.dim,):
            raise DimensionMismatch("operands do not belong to this algebra")
        return np.tensordot(y, np.tensordot(x, self.C, axes=([0], [0])), axes=([0], [0]))

    def left(self, a):
        """Matrix of L_a: b -> ab (column j is the image of b_j)."""
        return np.tensordot(np.asarray(a, dtype=object), self.C, axes=([0], [0])).T

    def right(self, a):
        """Matrix of R_a: b -> ba."""
        return np.tensordot(np.asarray(a, dtype=object), self.C, axes=([0], [1])).T

    def format(self, x) -> str:
        terms = []
        for c, lab in zip(x, self.labels):
            if c != 0:
                terms.append(lab if c == 1 else f"({format_scalar(c)}){lab}")
        return " + ".join(terms) or "0"

    def __repr__(self):
        return f"Algebra({self.name or 'custom'}, dim={self.dim})"


def act_left(alg: Algebra, a, T, leg: int):
    """a^{(leg)} T: multiply tensor factor ``leg`` by a from the left."""
    return np.moveaxis(np.tensordot(alg.left(a), T, axes=([1], [leg])), 0, leg)


def act_right(alg: Algebra, T, a, leg: int):
    """T a^{(leg)}: multiply tensor factor ``leg`` by a from the right."""
    return np.moveaxis(np.tensordot(alg.right(a), T, axes=([1], [leg])), 0, leg)


def flip(T):
    """The tensor flip tau on A (x) A."""
    return np.asarray(T, dtype=object).T.copy()


@dataclass
class CategoryReport:
    associative: bool
    lie: bool
    jordan: bool
    commutative: bool
    unital: bool
    unit: object = None

    def as_dict(self):
        return {
            "associative": self.associative,
            "lie": self.lie,
            "jordan": self.jordan,
            "commutative": self.commutative,
            "unital": self.unital,
            "unit": None if self.unit is None else to_lists(self.unit),
        }


def is_associative(alg: Algebra) -> bool:
    C = alg.C
    lhs = np.einsum("ijm,mkl->ijkl", C, C)
    rhs = np.einsum("jkm,iml->ijkl", C, C)
    return is_zero(lhs - rhs)


def is_commutative(alg: Algebra) -> bool:
    return is_zero(alg.C - alg.C.transpose(1, 0, 2))


def is_lie(alg: Algebra) -> bool:
    C = alg.C
    if not is_zero(C + C.transpose(1, 0, 2)):
        return False
    # [[a,b],c] + [[b,c],a] + [[c,a],b]
    jac = np.einsum("ijm,mkl->ijkl", C, C)
    total = jac + jac.transpose(1, 2, 0, 3) + jac.transpose(2, 0, 1, 3)
    return is_zero(total)


def is_jordan(alg: Algebra) -> bool:
    """Commutativity plus (a^2 b) a = a^2 (b a).

    The identity is cubic in a, so it is tested on every sum of at most three
    basis elements, which determines the cubic form completely.
    """
    if not is_commutative(alg):
        return False
    d = alg.dim
    mul = alg.multiply
    for size in (1, 2, 3):
        for combo in itertools.combinations_with_replacement(range(d), size):
            a = zeros(d)
            for i in combo:
                a[i] += 1
            a2 = mul(a, a)
            for j in range(d):
                b = alg.basis(j)
                if not is_zero(mul(mul(a2, b), a) - mul(a2, mul(b, a))):
                    return False
    return True


def find_unit(alg: Algebra):
    """The two-sided unit, or None."""
    d = alg.dim
    if d == 0:
        return None
    rows, rhs = [], []
    for j in range(d):
        for k in range(d):
            rows.append([alg.C[i, j, k] for i in range(d)])
            rhs.append(int(j == k))
            rows.append([alg.C[j, i, k] for i in range(d)])
            rhs.append(int(j == k))
    u = linalg.solve_any(rows, rhs)
    if u is None:
        return None
    return np.array([_tidy(x) for x in u], dtype=object)


def _tidy(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def category_predicates(alg: Algebra) -> CategoryReport:
    unit = find_unit(alg)
    return CategoryReport(
        associative=is_associative(alg),
        lie=is_lie(alg),
        jordan=is_jordan(alg),
        commutative=is_commutative(alg),
        unital=unit is not None,
        unit=unit,
    )


def unitalize(alg: Algebra) -> Algebra:
    """A + k with (a1, u1)(a2, u2) = (a1 a2 + u1 a2 + u2 a1, u1 u2); the unit is the last basis element."""
    d = alg.dim
    C = zeros(d + 1, d + 1, d + 1)
    C[:d, :d, :d] = alg.C
    for j in range(d):
        C[d, j, j] = 1
        C[j, d, j] = 1
    C[d, d, d] = 1
    return Algebra(C, labels=alg.labels + ["1"], name=f"unitalization of {alg.name or 'A'}")


def jordanize(alg: Algebra, name=None) -> Algebra:
    """The same space with the symmetrized product a o b = (ab + ba)/2."""
    C = (alg.C + alg.C.transpose(1, 0, 2)) * Fraction(1, 2)
    C = np.vectorize(_tidy, otypes=[object])(C) if C.size else C
    return Algebra(C, labels=alg.labels, name=name or f"{alg.name}+")


class MetricAlgebra:
    """An algebra with a symmetric, non-degenerate, associative bilinear form."""

    def __init__(self, algebra: Algebra, gram):
        G = as_array(gram)
        d = algebra.dim
        if G.shape != (d, d) and not (d == 0 and G.size == 0):
            raise InvalidMetric(f"Gram matrix must be {d}x{d}")
        G = G.reshape(d, d)
        if not is_zero(G - G.T):
            raise InvalidMetric("metric is not symmetric")
        if linalg.rank(G.tolist()) != d:
            raise InvalidMetric("metric is degenerate")
        C = algebra.C
        lhs = np.einsum("ijm,mk->ijk", C, G)
        rhs = np.einsum("im,jkm->ijk", G, C)
        if not is_zero(lhs - rhs):
            i, j, k = next(zip(*np.nonzero(np.vectorize(lambda v: v != 0)(lhs - rhs))))
            raise InvalidMetric(
                f"metric is not associative: beta(b{i} b{j}, b{k}) != beta(b{i}, b{j} b{k})"
            )
        self.algebra = algebra
        self.gram = G
        self._ginv = None

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def name(self):
        return self.algebra.name

    def beta(self, x, y):
        return np.asarray(x, dtype=object) @ self.gram @ np.asarray(y, dtype=object)

    @property
    def gram_inverse(self):
        if self._ginv is None:
            if self.dim == 0:
                self._ginv = zeros(0, 0)
            else:
                try:
                    inv = linalg.inverse(self.gram.tolist())
                except linalg.SingularMatrix as exc:
                    raise SingularGram(str(exc)) from exc
                self._ginv = np.vectorize(_tidy, otypes=[object])(np.array(inv, dtype=object))
        return self._ginv

    def __repr__(self):
        return f"MetricAlgebra({self.algebra.name or 'custom'}, dim={self.dim})"


def dual_basis(M: MetricAlgebra):
    """Row i holds the coordinates of b_i^*, defined by beta(b_i, b_j^*) = delta_ij."""
    return M.gram_inverse.T.copy()


def casimir_gamma(M: MetricAlgebra):
    """gamma = sum_i b_i^* (x) b_i as a (d, d) array."""
    D = dual_basis(M)
    return np.einsum("ip,iq->pq", D, np.eye(M.dim, dtype=int).astype(object))


def check_gamma_invariance(M: MetricAlgebra, gamma=None) -> bool:
    """a^{(1)} gamma = gamma a^{(2)} and a^{(2)} gamma = gamma a^{(1)} for every basis a."""
    alg = M.algebra
    g = casimir_gamma(M) if gamma is None else as_array(gamma)
    for i in range(alg.dim):
        a = alg.basis(i)
        if not is_zero(act_left(alg, a, g, 0) - act_right(alg, g, a, 1)):
            return False
        if not is_zero(act_left(alg, a, g, 1) - act_right(alg, g, a, 0)):
            return False
    return True


# ---------------------------------------------------------------- named algebras


def _matrix_unit(n, i, j):
    m = zeros(n, n)
    m[i, j] = 1
    return m


def _from_matrix_basis(mats, product, labels, name):
    """Structure constants of span(mats) under ``product``; mats must be independent."""
    d = len(mats)
    n2 = mats[0].size if d else 0
    B = [[mats[c].reshape(-1)[r] for c in range(d)] for r in range(n2)]
    _, pivots = linalg.rref(linalg.transpose(B))
    sub = [B[r] for r in pivots]
    sub_inv = linalg.inverse(sub)
    C = zeros(d, d, d)
    for i, a in enumerate(mats):
        for j, b in enumerate(mats):
            v = product(a, b).reshape(-1)
            coords = [sum((row[r] * v[p] for r, p in enumerate(pivots)), 0) for row in sub_inv]
            check = sum((coords[c] * mats[c] for c in range(d)), zeros(*a.shape))
            if not is_zero(check - product(a, b)):
                raise ValueError("basis is not closed under the product")
            for k in range(d):
                C[i, j, k] = _tidy(coords[k])
    return Algebra(C, labels=labels, name=name)


def matrix_algebra(n: int) -> MetricAlgebra:
    mats = [_matrix_unit(n, i, j) for i in range(n) for j in range(n)]
    labels = [f"e{i + 1}{j + 1}" for i in range(n) for j in range(n)]
    d = n * n
    C = zeros(d, d, d)
    G = zeros(d, d)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                C[i * n + j, j * n + k, i * n + k] = 1
            G[i * n + j, j * n + i] = 1
    del mats
    return MetricAlgebra(Algebra(C, labels=labels, name=f"matrix:{n}"), G)


def _sl_basis(n):
    mats, labels = [], []
    for i in range(n):
        for j in range(i + 1, n):
            mats.append(_matrix_unit(n, i, j))
            labels.append(f"e{i + 1}{j + 1}")
    for i in range(n - 1):
        mats.append(_matrix_unit(n, i, i) - _matrix_unit(n, i + 1, i + 1))
        labels.append(f"h{i + 1}")
    for i in range(n):
        for j in range(i):
            mats.append(_matrix_unit(n, i, j))
            labels.append(f"e{i + 1}{j + 1}")
    if n == 2:
        labels = ["e", "h", "f"]
    return mats, labels


def killing_form(alg: Algebra):
    ads = [alg.left(alg.basis(i)) for i in range(alg.dim)]
    return np.array([[np.trace(a @ b) for b in ads] for a in ads], dtype=object)


def sl_algebra(n: int) -> MetricAlgebra:
    mats, labels = _sl_basis(n)
    alg = _from_matrix_basis(mats, lambda a, b: a @ b - b @ a, labels, f"lie:sl_{n}")
    return MetricAlgebra(alg, killing_form(alg))


def _trace_gram(mats, product):
    return np.array([[np.trace(a @ b) for b in mats] for a in mats], dtype=object)


def sym_algebra(n: int) -> MetricAlgebra:
    mats, labels = [], []
    for i in range(n):
        for j in range(i, n):
            m = _matrix_unit(n, i, j)
            if i != j:
                m = m + _matrix_unit(n, j, i)
            mats.append(m)
            labels.append(f"s{i + 1}{j + 1}")
    half = Fraction(1, 2)
    alg = _from_matrix_basis(mats, lambda a, b: (a @ b + b @ a) * half, labels, f"jordan:sym_{n}")
    return MetricAlgebra(alg, _trace_gram(mats, None))


def jordan_matrix_algebra(n: int) -> MetricAlgebra:
    """M_n with the product (ab + ba)/2 and the trace form."""
    M = matrix_algebra(n)
    return MetricAlgebra(jordanize(M.algebra, name=f"jordan:mat_{n}"), M.gram)


def named_algebra(spec) -> MetricAlgebra:
    """Build a metric algebra from a name such as "matrix:2" or a JSON-like dict."""
    if isinstance(spec, dict):
        if "named" in spec:
            return named_algebra(spec["named"])
        return metric_algebra_from_json(spec)
    kind, _, arg = str(spec).partition(":")
    try:
        if kind == "matrix":
            return matrix_algebra(int(arg))
        if kind == "lie" and arg.startswith("sl_"):
            return sl_algebra(int(arg[3:]))
        if kind == "jordan" and arg.startswith("sym_"):
            return sym_algebra(int(arg[4:]))
        if kind == "jordan" and arg.startswith("mat_"):
            return jordan_matrix_algebra(int(arg[4:]))
    except ValueError as exc:
        raise ParseError(f"bad algebra name {spec!r}") from exc
    raise ParseError(f"unknown algebra {spec!r}")


def metric_algebra_from_json(doc) -> MetricAlgebra:
    try:
        d = int(doc["dim"])
        structure = as_array(doc["structure"]) if d else zeros(0, 0, 0)
        gram = as_array(doc["gram"]) if d else zeros(0, 0)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed algebra document: {exc}") from exc
    if structure.shape != (d, d, d):
        raise ParseError(f"structure must have shape ({d}, {d}, {d})")
    alg = Algebra(structure, labels=doc.get("labels"), name=doc.get("name"))
    return MetricAlgebra(alg, gram)


def metric_algebra_to_json(M: MetricAlgebra):
    if M.name and not M.name.startswith("unitalization"):
        try:
            named_algebra(M.name)
            return {"named": M.name}
        except ParseError:
            pass
    doc = {
        "dim": M.dim,
        "structure": to_lists(M.algebra.C),
        "gram": to_lists(M.gram),
        "labels": M.algebra.labels,
    }
    if M.name:
        doc["name"] = M.name
    return doc
