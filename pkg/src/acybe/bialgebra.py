"""Cobrackets, bialgebra axiom checks, classical doubles and Manin triples.

Series cobrackets are stored by their values on the generators b_i z^k. In
two-variable tensors an element a(z) acts on leg 1 through a(x) and on leg 2
through a(y); the flip tau exchanges both the legs and the variables.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .algebra import (
    Algebra,
    MetricAlgebra,
    act_left,
    act_right,
    category_predicates,
    is_associative,
    is_jordan,
    is_lie,
    is_zero,
    to_lists,
    unitalize,
    zeros,
)
from .cybe import StandardFormSeries, _swap_and_flip
from .dnalg import DnElement, ResiduePairing, WBasis, wbasis_span_check
from .errors import (
    CategoryMismatch,
    NotComplementary,
    NotDivisible,
    ParameterMismatch,
    ParseError,
    PoleDoesNotCancel,
    TruncationTooSmall,
    WindowTooSmall,
)
from .series import INF, Series, coeff_to_json, divide_by_diagonal, series_from_json, series_to_json


# ---------------------------------------------------------------- cocycles


@dataclass
class Cocycle:
    """delta(b_i z^k) for 0 <= k <= N, as bivariate series with (d, d) coefficients."""

    M: MetricAlgebra
    N: int
    images: dict

    def image(self, k: int, i: int) -> Series:
        if k > self.N:
            raise WindowTooSmall(f"cobracket stored only for z-degree <= {self.N}")
        d = self.M.dim
        return self.images.get((k, i), Series.zero(2, INF, (d, d)))

    def apply(self, k: int, a) -> Series:
        """delta(a z^k) for an element a."""
        d = self.M.dim
        out = Series.zero(2, INF, (d, d))
        for i, c in enumerate(a):
            if c != 0:
                out = out + self.image(k, i).scale(c)
        return out

    def flipped(self) -> "Cocycle":
        """The co-opposite tau delta."""
        return Cocycle(self.M, self.N, {key: _swap_and_flip(s) for key, s in self.images.items()})

    def trunc(self):
        return min((s.trunc for s in self.images.values()), default=INF)


def zero_cocycle(M: MetricAlgebra, N: int) -> Cocycle:
    return Cocycle(M, N, {})


def delta_from_r(r: StandardFormSeries, N: int = 4) -> Cocycle:
    """delta_r(a) = r(x,y) a(x)^(1) - a(y)^(2) r(x,y) on b_i z^k, k <= N."""
    R = r.numerator()
    if R.trunc < N + 1:
        raise TruncationTooSmall(f"numerator known through degree {R.trunc}, need {N + 1}")
    R = R.truncate(N + 1)
    alg = r.M.algebra
    d = r.M.dim
    images = {}
    for i in range(d):
        a = alg.basis(i)
        right = R.map(lambda T: act_right(alg, T, a, 0), (d, d))
        left = R.map(lambda T: act_left(alg, a, T, 1), (d, d))
        for k in range(N + 1):
            num = (_shift(right, k, 0) - _shift(left, k, 1)).truncate(N + 1)
            try:
                images[(k, i)] = divide_by_diagonal(num)
            except NotDivisible as exc:
                raise PoleDoesNotCancel(f"delta_r(b_{i} z^{k}): {exc}") from None
    return Cocycle(r.M, N, images)


def _shift(f: Series, k: int, var: int) -> Series:
    if k == 0:
        return f
    terms = {}
    for e, c in f.terms.items():
        e = list(e)
        e[var] += k
        terms[tuple(e)] = c
    return Series(terms, f.nvars, f.trunc + k, f.shape)


def _left(alg, a, f: Series, leg: int, k: int) -> Series:
    """(a z^k)^(leg) f."""
    return _shift(f.map(lambda T: act_left(alg, a, T, leg), f.shape), k, leg)


def _right(alg, f: Series, a, leg: int, k: int) -> Series:
    """f (a z^k)^(leg)."""
    return _shift(f.map(lambda T: act_right(alg, T, a, leg), f.shape), k, leg)


@dataclass
class AxiomReport:
    ok: bool
    check: str
    window: int
    pairs: int
    first_failure: dict | None = None

    def __bool__(self):
        return self.ok

    def as_dict(self):
        return {"check": self.check, "ok": self.ok, "window": self.window,
                "pairs": self.pairs, "first_failure": self.first_failure}


def _failure(diff: Series, key):
    first = diff.truncate(diff.trunc).first_nonzero()
    if first is None:
        return None
    exp, coeff = first
    return {"generators": [list(g) for g in key], "exp": list(exp), "degree": sum(exp),
            "coeff": coeff_to_json(coeff)}


def _as_cocycle(delta):
    if isinstance(delta, FiniteBialgebra):
        return delta.as_cocycle()
    return delta


def _pairs(delta: Cocycle, window: int):
    d = delta.M.dim
    top = min(window, delta.N)
    for k in range(top + 1):
        for l in range(top + 1 - k):
            for i in range(d):
                for j in range(d):
                    yield k, i, l, j


def _run(delta: Cocycle, window: int, name: str, identity) -> AxiomReport:
    count = 0
    for k, i, l, j in _pairs(delta, window):
        count += 1
        diff = identity(k, i, l, j)
        if not diff.is_zero():
            fail = _failure(diff, ((k, i), (l, j)))
            if fail is not None:
                return AxiomReport(False, name, window, count, fail)
    return AxiomReport(True, name, window, count)


def _product_image(delta: Cocycle, i, j, k):
    """delta(b_i b_j z^k)."""
    alg = delta.M.algebra
    return delta.apply(k, alg.multiply(alg.basis(i), alg.basis(j)))


def check_lie_cocycle(delta, window: int = 4) -> AxiomReport:
    """delta(ab) = (a^(1) + a^(2)) delta(b) + delta(a) (b^(1) + b^(2))."""
    delta = _as_cocycle(delta)
    alg = delta.M.algebra
    if not is_lie(alg):
        raise CategoryMismatch("the Lie cocycle identity needs a Lie algebra")

    def identity(k, i, l, j):
        a, b = alg.basis(i), alg.basis(j)
        da, db = delta.image(k, i), delta.image(l, j)
        rhs = (_left(alg, a, db, 0, k) + _left(alg, a, db, 1, k)
               + _right(alg, da, b, 0, l) + _right(alg, da, b, 1, l))
        return _product_image(delta, i, j, k + l) - rhs

    return _run(delta, window, "lie_cocycle", identity)


def check_associative_cocycle(delta, window: int = 4) -> AxiomReport:
    """delta(ab) = a^(1) delta(b) + delta(a) b^(2)."""
    delta = _as_cocycle(delta)
    alg = delta.M.algebra
    if not is_associative(alg):
        raise CategoryMismatch("the associative cocycle identity needs an associative algebra")

    def identity(k, i, l, j):
        a, b = alg.basis(i), alg.basis(j)
        rhs = _left(alg, a, delta.image(l, j), 0, k) + _right(alg, delta.image(k, i), b, 1, l)
        return _product_image(delta, i, j, k + l) - rhs

    return _run(delta, window, "associative_cocycle", identity)


def check_balanced(delta, window: int = 4) -> AxiomReport:
    """a1^(1) tau delta(a2) + a2^(2) delta(a1) = delta(a1) a2^(1) + tau delta(a2) a1^(2)."""
    delta = _as_cocycle(delta)
    alg = delta.M.algebra
    if not is_associative(alg):
        raise CategoryMismatch("the balance identity needs an associative algebra")

    def identity(k, i, l, j):
        a1, a2 = alg.basis(i), alg.basis(j)
        d1 = delta.image(k, i)
        t2 = _swap_and_flip(delta.image(l, j))
        lhs = _left(alg, a1, t2, 0, k) + _left(alg, a2, d1, 1, l)
        rhs = _right(alg, d1, a2, 0, l) + _right(alg, t2, a1, 1, k)
        return lhs - rhs

    return _run(delta, window, "balanced", identity)


def cocycle_to_json(delta: Cocycle) -> dict:
    return {
        "generators": {f"{k},{i}": series_to_json(s, ["x", "y"]) for (k, i), s in sorted(delta.images.items())},
        "trunc": delta.N,
    }


def cocycle_from_json(doc, M: MetricAlgebra) -> Cocycle:
    try:
        images = {}
        for key, s in doc["generators"].items():
            k, i = (int(x) for x in key.split(","))
            images[(k, i)] = series_from_json(s, (M.dim, M.dim))
        return Cocycle(M, int(doc["trunc"]), images)
    except (KeyError, ValueError, TypeError) as exc:
        raise ParseError(f"malformed cobracket document: {exc}") from exc


# ---------------------------------------------------------------- finite bialgebras


@dataclass
class FiniteBialgebra:
    """An algebra with delta(b_i) = sum delta[i, p, q] b_p (x) b_q."""

    algebra: Algebra
    delta: np.ndarray
    gram: np.ndarray | None = None

    def __post_init__(self):
        d = self.algebra.dim
        self.delta = np.asarray(self.delta, dtype=object)
        if self.delta.shape != (d, d, d):
            raise ParameterMismatch(f"comultiplication table must have shape ({d}, {d}, {d})")

    @property
    def dim(self):
        return self.algebra.dim

    def apply(self, a):
        return np.tensordot(np.asarray(a, dtype=object), self.delta, axes=([0], [0]))

    def co_opposite(self) -> "FiniteBialgebra":
        return FiniteBialgebra(self.algebra, self.delta.transpose(0, 2, 1).copy(), self.gram)

    def as_cocycle(self) -> Cocycle:
        d = self.dim
        M = _FormlessMetric(self.algebra)
        images = {(0, i): Series({(0, 0): self.delta[i].copy()}, 2, INF, (d, d)) for i in range(d)}
        return Cocycle(M, 0, images)


class _FormlessMetric:
    """Stands in for a MetricAlgebra where only the multiplication is used."""

    def __init__(self, algebra):
        self.algebra = algebra
        self.dim = algebra.dim


def coboundary(M_or_alg, t) -> FiniteBialgebra:
    """delta_t(a) = t a^(1) - a^(2) t."""
    alg = getattr(M_or_alg, "algebra", M_or_alg)
    t = np.asarray(t, dtype=object)
    table = np.array([act_right(alg, t, alg.basis(i), 0) - act_left(alg, alg.basis(i), t, 1)
                      for i in range(alg.dim)], dtype=object)
    return FiniteBialgebra(alg, table)


def lie_coboundary(M_or_alg, t) -> FiniteBialgebra:
    """delta_t(a) = [a (x) 1 + 1 (x) a, t] in a Lie algebra."""
    alg = getattr(M_or_alg, "algebra", M_or_alg)
    t = np.asarray(t, dtype=object)
    table = np.array([act_left(alg, alg.basis(i), t, 0) + act_left(alg, alg.basis(i), t, 1)
                      for i in range(alg.dim)], dtype=object)
    return FiniteBialgebra(alg, table)


# ---------------------------------------------------------------- Jordan identities


def _product_u(U, X, Y):
    """Legwise product of two tensors over the unitalization."""
    nlegs = X.ndim
    if nlegs == 2:
        return np.einsum("apx,bqy,ab,pq->xy", U, U, X, Y)
    return np.einsum("apx,bqy,crz,abc,pqr->xyz", U, U, U, X, Y)


def check_jordan_identities(B: FiniteBialgebra, window=None) -> AxiomReport:
    """The three Jordan bialgebra identities on basis elements and sums of two.

    The identities are quadratic in a, so b_i and b_i + b_j determine them.
    Computations run in the unitalization; the unit stands for the
    factor 1 in the displayed tensors.
    """
    alg = B.algebra
    if not is_jordan(alg):
        raise CategoryMismatch("the Jordan bialgebra identities need a Jordan algebra")
    d = alg.dim
    U = unitalize(alg).C
    one = zeros(d + 1)
    one[d] = 1
    D = zeros(d + 1, d + 1, d + 1)
    D[:d, :d, :d] = B.delta

    def delta(a):
        return np.tensordot(a, D, axes=([0], [0]))

    def lift(a):
        v = zeros(d + 1)
        v[:d] = a
        return v

    def mul(a, b):
        return np.tensordot(b, np.tensordot(a, U, axes=([0], [0])), axes=([0], [0]))

    def d_1(T):  # (delta (x) 1)
        return np.einsum("pq,pab->abq", T, D)

    def one_d(T):  # (1 (x) delta)
        return np.einsum("pq,qab->pab", T, D)

    def flip23(X):  # (1 (x) tau)
        return X.transpose(0, 2, 1).copy()

    def leg_left(a, X, leg):
        L = np.tensordot(a, U, axes=([0], [0])).T
        return np.moveaxis(np.tensordot(L, X, axes=([1], [leg])), 0, leg)

    def leg_right(X, a, leg):
        R = np.tensordot(a, U, axes=([0], [1])).T
        return np.moveaxis(np.tensordot(R, X, axes=([1], [leg])), 0, leg)

    def outer(T, v, pos):
        return np.einsum("pq,r->pqr", T, v) if pos == 2 else np.einsum("r,pq->rpq", v, T)

    def identity_1(a):
        da, da2 = delta(a), delta(mul(a, a))
        lhs = (d_1(da2) - one_d(da2)) * Fraction(1, 2)
        rhs = (leg_left(a, d_1(da) - one_d(da), 1)
               + leg_left(a, flip23(d_1(da)), 2) - leg_left(a, flip23(d_1(da)), 0)
               + _product_u(U, outer(da, one, 2) - outer(da, one, 0), flip23(outer(da, one, 2))))
        return lhs - rhs

    def identity_2(a):
        da, da2 = delta(a), delta(mul(a, a))
        T = _product_u(U, np.multiply.outer(one, a) + np.multiply.outer(a, one), da)
        lhs = d_1(T) + one_d(T) + flip23(d_1(T))
        rhs = (2 * leg_left(a, one_d(da), 1)
               + leg_left(a, flip23(d_1(da)), 0)
               + _product_u(U, outer(da, one, 0), flip23(outer(da, one, 2)))
               + d_1(da2))
        return lhs - rhs

    def identity_3(a, b):
        a2 = mul(a, a)
        ab = mul(a, b)
        db, da = delta(b), delta(a)
        return (delta(mul(a2, b)) - leg_right(delta(a2), b, 0) - leg_right(db, a2, 1)
                + 2 * _product_u(U, db, np.multiply.outer(a, a))
                - 2 * leg_right(delta(ab), a, 0)
                + 2 * leg_right(leg_right(da, b, 0), a, 0)
                + 2 * leg_right(leg_right(da, b, 1), a, 1)
                - 2 * leg_right(da, ab, 1))

    candidates = [lift(alg.basis(i)) for i in range(d)]
    candidates += [lift(alg.basis(i) + alg.basis(j)) for i, j in itertools.combinations(range(d), 2)]
    count = 0
    for idx, a in enumerate(candidates):
        for name, value in (("identity_1", identity_1(a)), ("identity_2", identity_2(a))):
            count += 1
            if not is_zero(value):
                return AxiomReport(False, "jordan", 0, count, {"identity": name, "element": to_lists(a[:d])})
        for j in range(d):
            count += 1
            if not is_zero(identity_3(a, lift(alg.basis(j)))):
                return AxiomReport(False, "jordan", 0, count,
                                   {"identity": "identity_3", "element": to_lists(a[:d]), "b": j})
    return AxiomReport(True, "jordan", 0, count)


# ---------------------------------------------------------------- classical double


@dataclass
class Double:
    """D(A, delta) on A + A*: indices 0..d-1 for b_i, d..2d-1 for the dual basis f_i."""

    algebra: Algebra
    ev: np.ndarray
    dim_a: int

    @property
    def metric(self) -> MetricAlgebra:
        return MetricAlgebra(self.algebra, self.ev)

    def structure_dump(self):
        return {"dim": self.algebra.dim, "structure": to_lists(self.algebra.C), "gram": to_lists(self.ev)}


def build_double(B: FiniteBialgebra) -> Double:
    """Multiplication on A + A*: f_i f_j, b_i f_j and f_j b_i from delta and the structure constants."""
    d = B.dim
    C = B.algebra.C
    Delta = B.delta
    S = zeros(2 * d, 2 * d, 2 * d)
    S[:d, :d, :d] = C
    for i in range(d):
        for j in range(d):
            for k in range(d):
                # f_i f_j = sum_k delta(b_k)[i, j] f_k
                S[d + i, d + j, d + k] = Delta[k, i, j]
                # b_i f_j = (f_j (x) 1) delta(b_i) + f_j R_{b_i}
                S[i, d + j, k] = Delta[i, j, k]
                S[i, d + j, d + k] = C[k, i, j]
                # f_j b_i = (1 (x) f_j) delta(b_i) + f_j L_{b_i}
                S[d + j, i, k] = Delta[i, k, j]
                S[d + j, i, d + k] = C[i, k, j]
    ev = zeros(2 * d, 2 * d)
    for i in range(d):
        ev[i, d + i] = 1
        ev[d + i, i] = 1
    labels = B.algebra.labels + [f"{lab}*" for lab in B.algebra.labels]
    return Double(Algebra(S, labels=labels, name="double"), ev, d)


def _ev_checks(D: Double):
    alg, G = D.algebra, D.ev
    n = alg.dim
    symmetric = is_zero(G - G.T)
    nondegenerate = linalg.rank(G.tolist()) == n
    assoc = True
    for i in range(n):
        for j in range(n):
            ij = alg.multiply(alg.basis(i), alg.basis(j))
            for k in range(n):
                jk = alg.multiply(alg.basis(j), alg.basis(k))
                if ij @ G[:, k] != G[i, :] @ jk:
                    assoc = False
                    break
            if not assoc:
                break
        if not assoc:
            break
    return symmetric, nondegenerate, assoc


def double_category(B: FiniteBialgebra) -> dict:
    """Category predicates of D(A, delta) together with its Manin-triple invariants."""
    D = build_double(B)
    d = B.dim
    report = category_predicates(D.algebra).as_dict()
    symmetric, nondegenerate, assoc = _ev_checks(D)
    plus = [D.algebra.basis(i) for i in range(d)]
    minus = [D.algebra.basis(d + i) for i in range(d)]
    triple = manin_triple_check(D.algebra, D.ev, plus, minus, check_metric=False)
    report.update({
        "ev_symmetric": symmetric,
        "ev_nondegenerate": nondegenerate,
        "ev_associative": assoc,
        "manin_triple": triple.as_dict(),
    })
    if triple.ok:
        report["determines_delta"] = bool(is_zero(determined_delta(D.algebra, D.ev, plus, minus) - B.delta))
    return report


# ---------------------------------------------------------------- Manin triples


@dataclass
class ManinReport:
    complementary: bool
    isotropic_plus: bool
    isotropic_minus: bool
    closed_plus: bool
    closed_minus: bool
    first_failure: dict | None = None
    extra: dict = field(default_factory=dict)

    @property
    def ok(self):
        return (self.complementary and self.isotropic_plus and self.isotropic_minus
                and self.closed_plus and self.closed_minus)

    def __bool__(self):
        return self.ok

    def as_dict(self):
        out = {
            "ok": self.ok,
            "complementary": self.complementary,
            "isotropic_plus": self.isotropic_plus,
            "isotropic_minus": self.isotropic_minus,
            "closed_plus": self.closed_plus,
            "closed_minus": self.closed_minus,
            "first_failure": self.first_failure,
        }
        out.update(self.extra)
        return out


def manin_triple_check(alg: Algebra, gram, plus, minus, check_metric: bool = True) -> ManinReport:
    """Finite-dimensional Manin triple conditions for spanning families of M_+ and M_-."""
    G = np.asarray(gram, dtype=object)
    if check_metric:
        MetricAlgebra(alg, G)
    plus = [np.asarray(v, dtype=object) for v in plus]
    minus = [np.asarray(v, dtype=object) for v in minus]
    first = None
    vecs = [list(v) for v in plus + minus]
    complementary = (linalg.rank(vecs) == alg.dim and linalg.rank([list(v) for v in plus])
                     + linalg.rank([list(v) for v in minus]) == alg.dim)
    if not complementary:
        first = {"check": "complementary"}

    def isotropic(family, name):
        nonlocal first
        for (p, u), (q, v) in itertools.product(enumerate(family), repeat=2):
            if u @ G @ v != 0:
                first = first or {"check": f"isotropic_{name}", "pair": [p, q]}
                return False
        return True

    def closed(family, name):
        nonlocal first
        rows = [list(v) for v in family]
        for (p, u), (q, v) in itertools.product(enumerate(family), repeat=2):
            if not linalg.in_span(rows, list(alg.multiply(u, v))):
                first = first or {"check": f"closed_{name}", "pair": [p, q]}
                return False
        return True

    return ManinReport(complementary, isotropic(plus, "plus"), isotropic(minus, "minus"),
                       closed(plus, "plus"), closed(minus, "minus"), first)


def determined_delta(alg: Algebra, gram, plus, minus):
    """delta on M_+ with beta(delta(a), n_i (x) n_j) = beta(a, n_i n_j), in the basis ``plus``."""
    G = np.asarray(gram, dtype=object)
    plus = [np.asarray(v, dtype=object) for v in plus]
    minus = [np.asarray(v, dtype=object) for v in minus]
    if len(plus) != len(minus):
        raise NotComplementary("M_+ and M_- bases have different sizes")
    P = [[u @ G @ v for v in minus] for u in plus]
    try:
        Pinv = linalg.inverse(P)
    except linalg.SingularMatrix as exc:
        raise NotComplementary("the pairing between M_+ and M_- is degenerate") from exc
    Pinv = np.array(Pinv, dtype=object)
    out = []
    for a in plus:
        X = np.array([[a @ G @ alg.multiply(u, v) for v in minus] for u in minus], dtype=object)
        out.append(Pinv.T @ X @ Pinv)
    return np.array(out, dtype=object)


def manin_triple_series(W: WBasis, P: ResiduePairing, window=(-4, 4)) -> ManinReport:
    """((D_n(A), beta), A[[z]], span W) in a window."""
    v, N = window
    M, n = W.M, W.n
    first = None
    iso_plus = True
    monos = [DnElement.monomial(M, n, k, M.algebra.basis(i)) for k in range(N + 1) for i in range(M.dim)]
    for x, y in itertools.product(monos, repeat=2):
        if P(x, y) != 0:
            iso_plus = False
            first = {"check": "isotropic_plus"}
            break
    span = wbasis_span_check(W, P, window)
    if first is None and span.first_failure is not None:
        first = span.first_failure
    return ManinReport(span.complementary, iso_plus, span.isotropic, True, span.subalgebra, first,
                       {"window": list(window), "rank_table": span.rank_table})


def determined_delta_series(W: WBasis, P: ResiduePairing, K: int, degree: int) -> Cocycle:
    """The cobracket determined by ((D_n(A), beta), A[[z]], span W) on b_i z^k, k <= K.

    Images are computed through total degree ``degree`` by inverting the
    pairing between monomials b_p z^a and generators w_{a,p} + t_{a,p}.
    """
    M, n, d = W.M, W.n, W.M.dim
    D = degree
    keys = [(a, p) for a in range(D + 1) for p in range(d)]
    gens = {key: W.generator(*key) for key in keys}
    monos = {key: DnElement.monomial(M, n, key[0], M.algebra.basis(key[1])) for key in keys}
    pairing = [[P(monos[u], gens[w]) for w in keys] for u in keys]
    try:
        Pinv = np.array(linalg.inverse(pairing), dtype=object)
    except linalg.SingularMatrix as exc:
        raise NotComplementary("monomials and generators pair degenerately in this window") from exc
    products = {(u, w): gens[u] * gens[w] for u in keys for w in keys}
    images = {}
    for k in range(K + 1):
        for i in range(d):
            a = monos.get((k, i)) or DnElement.monomial(M, n, k, M.algebra.basis(i))
            X = np.array([[P(a, products[(u, w)]) for w in keys] for u in keys], dtype=object)
            c = Pinv.T @ X @ Pinv
            terms = {}
            for (ui, (ea, p)), (wi, (eb, q)) in itertools.product(enumerate(keys), repeat=2):
                if ea + eb <= D and c[ui, wi] != 0:
                    T = terms.setdefault((ea, eb), zeros(d, d))
                    T[p, q] += c[ui, wi]
            images[(k, i)] = Series(terms, 2, D, (d, d))
    return Cocycle(M, K, images)


def cocycles_agree(a: Cocycle, b: Cocycle, K: int) -> dict | None:
    """None when both agree on all b_i z^k, k <= K, else the first difference."""
    d = a.M.dim
    for k in range(K + 1):
        for i in range(d):
            diff = a.image(k, i) - b.image(k, i)
            fail = _failure(diff.truncate(diff.trunc), ((k, i),))
            if fail is not None:
                return fail
    return None
