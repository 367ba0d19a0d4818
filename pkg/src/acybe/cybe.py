"""Series of type (n, lambda), the A-CYBE and A-GCYBE, and related conversions.

A series of type (n, lambda) is

    r(x, y) = y^n lambda(x) gamma / (x - y) + t(x, y),

stored through its numerator R = y^n lambda(x) gamma + (x - y) t. Tensor
coefficients are (d, d) object arrays with T[p, q] the coefficient of
b_p (x) b_q.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

import numpy as np

from .algebra import MetricAlgebra, casimir_gamma, is_zero, metric_algebra_from_json, metric_algebra_to_json, named_algebra, unitalize, zeros
from .dnalg import DnElement, ResiduePairing, WBasis, rank_table
from .errors import (
    DiagonalVanishes,
    EigencomponentMismatch,
    NonPolynomialTail,
    NotAUnit,
    NotDivisible,
    ParameterMismatch,
    ParseError,
    TruncationTooSmall,
    WindowTooSmall,
)
from .scalars import div, format_scalar, primitive_root
from .series import (
    INF,
    Laurent,
    Series,
    bernoulli_expansion,
    coeff_to_json,
    divide_by_diagonal,
    invert_series,
    series_from_json,
    series_to_json,
    vandermonde_divide,
)

_SUPERSCRIPT = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


def _is_one(lam: Series) -> bool:
    return lam.trunc == INF and lam.terms == {(0,): 1}


class StandardFormSeries:
    """r(x, y) = y^n lambda(x) gamma / (x - y) + t(x, y), known through ``trunc``."""

    def __init__(self, M: MetricAlgebra, n: int = 0, lam: Series | None = None,
                 tail: Series | None = None, trunc=None):
        if n < 0:
            raise ValueError("pole order n must be non-negative")
        d = M.dim
        self.M = M
        self.n = n
        self.lam = lam if lam is not None else Series.constant(1)
        if self.lam.nvars != 1 or self.lam.shape:
            raise ParameterMismatch("lambda must be a univariate scalar series")
        if self.lam.terms.get((0,), 0) == 0:
            raise NotAUnit("lambda(0) must be nonzero")
        tail = tail if tail is not None else Series.zero(2, INF, (d, d))
        if tail.nvars != 2 or tail.shape != (d, d):
            raise ParameterMismatch(f"tail must be a bivariate series with ({d}, {d}) coefficients")
        self.tail = tail if trunc is None else tail.truncate(trunc)

    @property
    def trunc(self):
        return self.tail.trunc

    @property
    def gamma(self):
        return casimir_gamma(self.M)

    def pole_factor(self) -> Series:
        """The scalar y^n lambda(x)."""
        terms = {(a, self.n): c for (a,), c in self.lam.terms.items()}
        return Series(terms, 2, self.lam.trunc + self.n)

    def numerator(self) -> Series:
        """R(x, y) = y^n lambda(x) gamma + (x - y) t(x, y)."""
        pole = self.pole_factor().scale(self.gamma)
        terms = {}
        for (a, b), T in self.tail.terms.items():
            for e, s in (((a + 1, b), 1), ((a, b + 1), -1)):
                terms[e] = terms[e] + s * T if e in terms else s * T
        shifted = Series(terms, 2, self.tail.trunc + 1, self.tail.shape)
        return pole + shifted

    def truncate(self, N):
        return StandardFormSeries(self.M, self.n, self.lam, self.tail, N)

    def __eq__(self, other):
        if not isinstance(other, StandardFormSeries):
            return NotImplemented
        return (self.n == other.n and self.M.dim == other.M.dim
                and self.lam == other.lam and self.tail == other.tail)

    __hash__ = None

    def type_text(self) -> str:
        lam = "1" if _is_one(self.lam) else self.lam.to_text()
        return f"({self.n},{lam})"

    def to_text(self) -> str:
        if self.n == 0:
            pole = "γ/(x−y)"
        elif self.n == 1:
            pole = "y·γ/(x−y)"
        else:
            pole = f"y{str(self.n).translate(_SUPERSCRIPT)}·γ/(x−y)"
        if not _is_one(self.lam):
            pole = pole.replace("γ", "λ(x)γ", 1)
        return f"{pole} + t, type {self.type_text()}"

    def __repr__(self):
        return f"StandardFormSeries(n={self.n}, lam={self.lam.to_text()}, tail={self.tail.to_text()})"


def classify(r: StandardFormSeries) -> dict:
    """Pole order and tail shape; deciding trigonometric tails is not attempted."""
    names = {0: "rational", 1: "quasi-trigonometric", 2: "quasi-rational"}
    polynomial = r.trunc == INF or r.tail.degree() < r.trunc
    return {
        "n": r.n,
        "tail": "polynomial" if polynomial else "unclassified at truncation",
        "form": names.get(r.n, "other") if polynomial and _is_one(r.lam) else "unclassified at truncation",
    }


# ---------------------------------------------------------------- normalization


def normalize_type(a: Series, s: Series, M: MetricAlgebra, N=None) -> StandardFormSeries:
    """Write a(x, y) gamma / (x - y) + s(x, y) in the form of type (n, lambda)."""
    if N is not None:
        a, s = a.truncate(N), s.truncate(N)
    diag = a.diagonal()
    if diag.is_zero():
        raise DiagonalVanishes(f"a(z, z) vanishes through degree {diag.trunc}")
    n = int(diag.valuation())
    lam = Series({(k - n,): c for (k,), c in diag.terms.items()}, 1, diag.trunc - n)
    pole = Series({(e, n): c for (e,), c in lam.terms.items()}, 2, lam.trunc + n)
    b = divide_by_diagonal(a - pole)
    tail = b.scale(casimir_gamma(M)) + s
    return StandardFormSeries(M, n, lam, tail)


def _swap_and_flip(f: Series) -> Series:
    """f(x, y) -> tau f(y, x)."""
    return f.permute((1, 0)).map(lambda T: T.T.copy(), f.shape)


def bar(r: StandardFormSeries) -> StandardFormSeries:
    """r_bar(x, y) = -tau r(y, x), renormalized."""
    a = r.pole_factor().permute((1, 0))
    s = -_swap_and_flip(r.tail)
    return normalize_type(a, s, r.M)


def is_skew(r: StandardFormSeries) -> bool:
    return bar(r) == r


# ---------------------------------------------------------------- leg products


def _contract_13_12(C, T, S):
    # T^{13} S^{12}: (b_i b_k) (x) b_l (x) b_j
    return np.einsum("ikm,ij,kl->mlj", C, T, S)


def _contract_12_23(C, T, S):
    # T^{12} S^{23}: b_i (x) (b_j b_k) (x) b_l
    return np.einsum("jkm,ij,kl->iml", C, T, S)


def _contract_23_13(C, T, S):
    # T^{23} S^{13}: b_k (x) b_i (x) (b_j b_l)
    return np.einsum("jlm,ij,kl->kim", C, T, S)


def _place(T, legs, d):
    """Embed a (d, d) tensor into U (x) U (x) U at ``legs``, unit elsewhere."""
    X = zeros(d + 1, d + 1, d + 1)
    missing = ({0, 1, 2} - set(legs)).pop()
    sub = [slice(0, d)] * 3
    sub[missing] = d
    X[tuple(sub)] = T if legs[0] < legs[1] else T.T
    return X


def unital_leg_product(alg, T, legs_t, S, legs_s):
    """T^{legs_t} S^{legs_s} computed in the unitalization A + k.

    Raises ValueError if the result leaves A (x) A (x) A.
    """
    d = alg.dim
    U = unitalize(alg).C
    X = _place(np.asarray(T, dtype=object), legs_t, d)
    Y = _place(np.asarray(S, dtype=object), legs_s, d)
    res = np.einsum("apx,bqy,crz,abc,pqr->xyz", U, U, U, X, Y)
    inside = res[:d, :d, :d]
    rest = res.copy()
    rest[:d, :d, :d] = 0
    if not is_zero(rest):
        raise ValueError("leg product does not lie in A (x) A (x) A")
    return inside


def constant_cyb(alg, t, t_bar=None):
    """t^{13} t^{12} - t^{12} t^{23} + s^{23} t^{13} for constant tensors, s = t_bar or t."""
    t = np.asarray(t, dtype=object)
    s = t if t_bar is None else np.asarray(t_bar, dtype=object)
    return (unital_leg_product(alg, t, (0, 2), t, (0, 1))
            - unital_leg_product(alg, t, (0, 1), s, (1, 2))
            + unital_leg_product(alg, s, (1, 2), t, (0, 2)))


def _add(terms, e, v):
    if e in terms:
        terms[e] = terms[e] + v
    else:
        terms[e] = v


def _numerator_products(C, R, Rlast, top, method="contract", alg=None):
    """The three pairwise products of numerators, as trivariate term dicts."""
    items = [(e, T) for e, T in R.terms.items() if sum(e) <= top]
    last = [(e, T) for e, T in Rlast.terms.items() if sum(e) <= top]
    P1, P2, P3 = {}, {}, {}
    if method == "unital":
        f1 = lambda T, S: unital_leg_product(alg, T, (0, 2), S, (0, 1))
        f2 = lambda T, S: unital_leg_product(alg, T, (0, 1), S, (1, 2))
        f3 = lambda T, S: unital_leg_product(alg, T, (1, 2), S, (0, 2))
    else:
        f1 = lambda T, S: _contract_13_12(C, T, S)
        f2 = lambda T, S: _contract_12_23(C, T, S)
        f3 = lambda T, S: _contract_23_13(C, T, S)
    for (a, b), T in items:
        for (c, e), S in items:
            if a + b + c + e > top:
                continue
            _add(P1, (a + c, e, b), f1(T, S))
            _add(P2, (a, b + c, e), f2(T, S))
    for (a, b), T in last:
        for (c, e), S in items:
            if a + b + c + e > top:
                continue
            _add(P3, (c, a, b + e), f3(T, S))
    return P1, P2, P3


def _times_difference(terms, i, j, out, sign):
    """out += sign * (z_i - z_j) * terms."""
    for e, v in terms.items():
        for k, s in ((i, sign), (j, -sign)):
            f = list(e)
            f[k] += 1
            _add(out, tuple(f), s * v)


def cyb_numerator(r: StandardFormSeries, N: int, equation: str = "cybe", method: str = "contract") -> Series:
    """(z1-z2)(z1-z3)(z2-z3) times CYB(r) (or GCYB(r)), through total degree N + 3."""
    if equation not in ("cybe", "gcybe"):
        raise ValueError(f"unknown equation {equation!r}")
    R = r.numerator()
    if R.trunc < N + 2:
        raise TruncationTooSmall(f"numerator known through degree {R.trunc}, need {N + 2}")
    Rlast = _swap_and_flip(R) if equation == "gcybe" else R
    alg = r.M.algebra
    P1, P2, P3 = _numerator_products(alg.C, R, Rlast, N + 2, method, alg)
    F = {}
    _times_difference(P1, 1, 2, F, 1)
    _times_difference(P2, 0, 2, F, -1)
    _times_difference(P3, 0, 1, F, 1)
    d = r.M.dim
    return Series(F, 3, N + 3, (d, d, d))


def cyb(r: StandardFormSeries, N: int = 6, method: str = "contract") -> Series:
    """r^13 r^12 - r^12 r^23 + r^23 r^13 through total degree N."""
    return vandermonde_divide(cyb_numerator(r, N, "cybe", method))


def gcyb(r: StandardFormSeries, N: int = 6, method: str = "contract") -> Series:
    """r^13 r^12 - r^12 r^23 + r_bar^23 r^13 through total degree N."""
    return vandermonde_divide(cyb_numerator(r, N, "gcybe", method))


def verification_report(value: Series, equation: str, N: int) -> dict:
    first = value.truncate(N).first_nonzero()
    if first is None:
        return {"equation": equation, "order": N, "verified_through_degree": N, "first_nonzero": None}
    exp, coeff = first
    return {
        "equation": equation,
        "order": N,
        "verified_through_degree": sum(exp) - 1,
        "first_nonzero": {"exp": list(exp), "coeff": coeff_to_json(coeff), "degree": sum(exp)},
    }


def verify(r: StandardFormSeries, N: int = 6, equation: str = "cybe") -> dict:
    """Zero test through degree N.

    When the expression has a pole the lowest nonzero numerator coefficient
    is reported; its degree minus 3 is the lowest homogeneous degree.
    """
    F = cyb_numerator(r, N, equation)
    try:
        value = vandermonde_divide(F)
    except NotDivisible:
        exp, coeff = F.first_nonzero()
        deg = sum(exp) - 3
        return {
            "equation": equation,
            "order": N,
            "verified_through_degree": deg - 1,
            "first_nonzero": {"exp": list(exp), "coeff": coeff_to_json(coeff), "degree": deg, "numerator": True},
        }
    return verification_report(value, equation, N)


# ---------------------------------------------------------------- series <-> subspace


def series_to_subspace(r: StandardFormSeries) -> WBasis:
    """Tails t_{k,i}(x) with t = sum t_{k,i} (x) b_i y^k."""
    tail = r.tail
    if tail.trunc != INF and any(sum(e) == tail.trunc for e in tail.terms):
        raise NonPolynomialTail(f"tail has terms at its truncation degree {tail.trunc}")
    d = r.M.dim
    tails = {}
    for (a, k), T in tail.terms.items():
        for i in range(d):
            col = T[:, i]
            if any(c != 0 for c in col):
                tails.setdefault((k, i), {})[(a,)] = col.copy()
    return WBasis(r.M, r.n, {key: Series(t, 1, INF, (d,)) for key, t in tails.items()}, r.lam)


def subspace_to_series(W: WBasis, lam: Series | None = None) -> StandardFormSeries:
    """Inverse of :func:`series_to_subspace`; lam must agree with the basis normalization."""
    if lam is not None and not lam == W.lam:
        raise ParameterMismatch("renormalizing a WBasis to a different lambda is not supported")
    d = W.M.dim
    terms = {}
    for (k, i), t in W.tails.items():
        for (a,), c in t.terms.items():
            T = terms.setdefault((a, k), zeros(d, d))
            T[:, i] += c
    return StandardFormSeries(W.M, W.n, W.lam, Series(terms, 2, INF, (d, d)))


@dataclass
class PairingReport:
    ok: bool
    window: tuple
    generator_bound: int
    checked: int
    first_failure: dict | None = None
    rank_table: list = field(default_factory=list)

    def __bool__(self):
        return self.ok

    def as_dict(self):
        return {"ok": self.ok, "window": list(self.window), "generator_bound": self.generator_bound,
                "checked": self.checked, "first_failure": self.first_failure, "rank_table": self.rank_table}


def _bound(r, P, window):
    if P.n != r.n or P.M.dim != r.M.dim:
        raise ParameterMismatch("pairing and series have different parameters")
    v, N = window
    if N < r.n - 1:
        raise WindowTooSmall(f"window end {N} must be at least n - 1 = {r.n - 1}")
    return max(r.n - v, r.n)


def pairing_table(r: StandardFormSeries, s: StandardFormSeries, P: ResiduePairing, K: int):
    """beta(r_{k,i}, s_{l,j}) for k, l < K."""
    A = series_to_subspace(r).generators(K)
    B = series_to_subspace(s).generators(K)
    return [[P(g, h) for h in B] for g in A]


def orthogonality_check(r: StandardFormSeries, P: ResiduePairing, window=(-3, 3)) -> PairingReport:
    """A(r) pairs to zero with A(r_bar), and A(r_bar) is complementary to A[[z]] in the window."""
    K = _bound(r, P, window)
    rb = bar(r)
    d = r.M.dim
    table = pairing_table(r, rb, P, K)
    first = None
    for a, row in enumerate(table):
        for b, val in enumerate(row):
            if val != 0 and first is None:
                first = {"pair": [[a // d, a % d], [b // d, b % d]], "value": format_scalar(val)}
    ok_rank, ranks = rank_table(r.M, r.n, series_to_subspace(rb).generators, window[0], window[1])
    if not ok_rank and first is None:
        bad = next(t for t in ranks if t["rank"] != t["size"])
        first = {"check": "complementary", "window": bad["window"]}
    return PairingReport(first is None, tuple(window), K, len(table) ** 2, first, ranks)


def _pairing_vectors(gens, P, M, n, top):
    """rows[g][a * d + p] = beta(g, b_p z^a) for a <= top."""
    d = M.dim
    monos = [DnElement.monomial(M, n, a, M.algebra.basis(p)) for a in range(top + 1) for p in range(d)]
    return np.array([[P(g, m) for m in monos] for g in gens], dtype=object)


def gcyb_pairing_identity(r: StandardFormSeries, P: ResiduePairing, window=(-2, 2)) -> PairingReport:
    """beta^3(rbar_{k1,i1} (x) r_{k2,i2} (x) r_{k3,i3}, GCYB(r)) = beta(rbar_{k1,i1}, r_{k3,i3} r_{k2,i2})."""
    K = _bound(r, P, window)
    M, n, d = r.M, r.n, r.M.dim
    top = K - 1
    phi = gcyb(r, 3 * top)
    box = zeros(top + 1, top + 1, top + 1, d, d, d)
    for (a, b, c), T in phi.terms.items():
        if max(a, b, c) <= top:
            box[a, b, c] = T
    m = (top + 1) * d
    Phi = box.transpose(0, 3, 1, 4, 2, 5).reshape(m, m, m)

    gens = series_to_subspace(r).generators(K)
    gens_bar = series_to_subspace(bar(r)).generators(K)
    V = _pairing_vectors(gens, P, M, n, top)
    Vb = _pairing_vectors(gens_bar, P, M, n, top)
    lhs = np.tensordot(Vb, Phi, axes=([1], [0]))
    lhs = np.tensordot(lhs, V, axes=([1], [1]))
    lhs = np.tensordot(lhs, V, axes=([1], [1]))

    first = None
    nonzero = 0
    count = 0
    for x, g1 in enumerate(gens_bar):
        for z, g3 in enumerate(gens):
            for y, g2 in enumerate(gens):
                rhs = P(g1, g3 * g2)
                count += 1
                if rhs != 0:
                    nonzero += 1
                if lhs[x, y, z] != rhs and first is None:
                    first = {"triple": [[x // d, x % d], [y // d, y % d], [z // d, z % d]],
                             "lhs": format_scalar(lhs[x, y, z]), "rhs": format_scalar(rhs)}
    report = PairingReport(first is None, tuple(window), K, count, first)
    report.nonzero = nonzero
    return report


# ---------------------------------------------------------------- gauge action


@dataclass
class GaugeData:
    """phi(z): (d, d) matrix series, column j the image of b_j; u: coordinate change."""

    phi: Series
    u: Series

    def validate(self, M: MetricAlgebra, N: int):
        if self.u.terms.get((0,), 0) != 0 or self.u.terms.get((1,), 0) == 0:
            raise ParameterMismatch("u must satisfy u(0) = 0 and u'(0) != 0")
        phi0 = self.phi.terms.get((0,))
        if phi0 is None or not _invertible(phi0):
            raise ParameterMismatch("phi(0) must be invertible")
        alg = M.algebra
        top = min(N, self.phi.trunc)
        for i in range(M.dim):
            for j in range(M.dim):
                lhs = self.phi.map(lambda P: P @ alg.multiply(alg.basis(i), alg.basis(j)), (M.dim,))
                fi = self.phi.map(lambda P: P[:, i].copy(), (M.dim,))
                fj = self.phi.map(lambda P: P[:, j].copy(), (M.dim,))
                rhs = fi.mul(fj, alg.multiply, (M.dim,))
                if not (lhs.truncate(top) == rhs.truncate(top)):
                    raise ParameterMismatch(f"phi is not multiplicative on (b_{i}, b_{j})")


def _invertible(P):
    from . import linalg

    return linalg.rank(P.tolist()) == P.shape[0]


def _powers(u: Series, top: int, N):
    out = [Series.constant(1).with_trunc(N)]
    for _ in range(top):
        out.append(out[-1].mul(u).truncate(N))
    return out


def gauge_transform(r: StandardFormSeries, g: GaugeData, N: int = 6) -> StandardFormSeries:
    """(phi(x) (x) phi(y)) r(u(x), u(y)), renormalized to standard form."""
    g.validate(r.M, N)
    top = N + 1
    R = r.numerator()
    if R.trunc < top:
        raise TruncationTooSmall(f"numerator known through degree {R.trunc}, need {top}")
    R = R.truncate(top)
    d = r.M.dim
    upow = _powers(g.u, R.degree() if R.terms else 0, top)
    sub = Series.zero(2, top, (d, d))
    for (a, b), T in R.terms.items():
        scal = upow[a].embed([0], 2).mul(upow[b].embed([1], 2)).truncate(top)
        sub = sub + scal.scale(T)
    diff = g.u.embed([0], 2) - g.u.embed([1], 2)
    q = divide_by_diagonal(diff.truncate(top + 1))
    sub = sub.mul(invert_series(q, top)).truncate(top)

    out = {}
    for (a, b), T in sub.terms.items():
        for (c,), Pc in g.phi.terms.items():
            for (e,), Pe in g.phi.terms.items():
                if a + b + c + e <= top:
                    _add(out, (a + c, b + e), Pc @ T @ Pe.T)
    R2 = Series(out, 2, min(top, g.phi.trunc + sub.valuation() if sub.terms else top), (d, d))

    gamma = casimir_gamma(r.M)
    p, q_ = next((p, q_) for p in range(d) for q_ in range(d) if gamma[p, q_] != 0)
    diag = R2.diagonal()
    c = diag.map(lambda T: div(T[p, q_], gamma[p, q_]), ())
    if not (diag == c.scale(gamma)):
        raise ParameterMismatch("the gauge transformation does not preserve gamma on the diagonal")
    n = int(c.valuation())
    lam = Series({(k - n,): v for (k,), v in c.terms.items()}, 1, c.trunc - n)
    pole = Series({(e, n): v for (e,), v in lam.terms.items()}, 2, lam.trunc + n)
    tail = divide_by_diagonal(R2 - pole.scale(gamma))
    return StandardFormSeries(r.M, n, lam, tail)


# ---------------------------------------------------------------- standard forms


@dataclass
class TrigFormData:
    """sigma of order m, optional eigencomponents gamma_j, tail {(p, q): T} in the loop variable."""

    sigma: np.ndarray
    m: int
    tail: dict = field(default_factory=dict)
    gamma_components: list | None = None

    @property
    def epsilon(self):
        return primitive_root(self.m)


def eigencomponents(M: MetricAlgebra, sigma, m: int):
    """gamma_j = (1/m) sum_l eps^(-jl) (sigma^l (x) 1) gamma for j = 0..m-1."""
    gamma = casimir_gamma(M)
    eps = primitive_root(m)
    sigma = np.asarray(sigma, dtype=object)
    powers = [gamma]
    for _ in range(1, m):
        powers.append(sigma @ powers[-1])
    out = []
    for j in range(m):
        acc = zeros(M.dim, M.dim)
        for ell, G in enumerate(powers):
            acc = acc + G * (eps ** (-(j * ell) % m) if m > 1 else 1)
        out.append(acc * Fraction(1, m))
    return out


def check_eigencomponents(M: MetricAlgebra, sigma, m: int, comps):
    gamma = casimir_gamma(M)
    eps = primitive_root(m)
    sigma = np.asarray(sigma, dtype=object)
    if len(comps) != m:
        raise EigencomponentMismatch(f"expected {m} eigencomponents, got {len(comps)}")
    total = sum(comps[1:], comps[0])
    if not is_zero(total - gamma):
        raise EigencomponentMismatch("eigencomponents do not sum to gamma")
    for j, G in enumerate(comps):
        if not is_zero(sigma @ G - G * (eps ** j if m > 1 else 1)):
            raise EigencomponentMismatch(f"component {j} is not in the eps^{j} eigenspace of sigma")


def _check_automorphism(M, sigma, m):
    alg = M.algebra
    d = M.dim
    P = np.eye(d, dtype=int).astype(object)
    for _ in range(m):
        P = sigma @ P
    if not is_zero(P - np.eye(d, dtype=int).astype(object)):
        raise ParameterMismatch(f"sigma does not have order dividing {m}")
    for i in range(d):
        for j in range(d):
            lhs = sigma @ alg.multiply(alg.basis(i), alg.basis(j))
            rhs = alg.multiply(sigma[:, i], sigma[:, j])
            if not is_zero(lhs - rhs):
                raise ParameterMismatch("sigma is not an algebra automorphism")


def _difference_power_series(h: Series, top: int):
    """The bivariate scalar series h(x - y) through degree top."""
    terms = {}
    for (k,), c in h.terms.items():
        if k > top:
            continue
        for i in range(k + 1):
            _add(terms, (i, k - i), c * comb(k, i) * (-1) ** (k - i))
    return Series(terms, 2, min(top, h.trunc))


def _trig_series(M, data: TrigFormData, N: int):
    d = M.dim
    m = data.m
    sigma = np.asarray(data.sigma, dtype=object)
    _check_automorphism(M, sigma, m)
    comps = data.gamma_components if data.gamma_components is not None else eigencomponents(M, sigma, m)
    comps = [np.asarray(G, dtype=object) for G in comps]
    check_eigencomponents(M, sigma, m, comps)

    B = bernoulli_expansion(N + 1)
    regular = Series.zero(2, N, (d, d))
    for j in range(1, m + 1):
        # exponent weight j runs over 1..m; weight m carries gamma_0
        w = Fraction(j, m)
        E = Series({(k,): w ** k / factorial(k) for k in range(N + 2)}, 1, N + 1)
        f = B.mul(Laurent.from_series(E))
        h = Series({(k,): c for k, c in f.terms.items() if k >= 0}, 1, f.trunc)
        regular = regular + _difference_power_series(h, N).scale(comps[j % m])
    tail = {}
    for (p, q), T in data.tail.items():
        T = np.asarray(T, dtype=object)
        for a in range(N + 1):
            for b in range(N + 1 - a):
                c = Fraction(p, m) ** a / factorial(a) * Fraction(q, m) ** b / factorial(b)
                if c != 0:
                    _add(tail, (a, b), c * T)
    return regular + Series(tail, 2, N, (d, d))


_KINDS = {
    "rational": 0, "quasi_trigonometric": 1, "quasi-trigonometric": 1, "quasi-trig": 1,
    "quasi_rational": 2, "quasi-rational": 2,
}


def emit_standard_form(kind: str, params, M: MetricAlgebra, N: int = 6) -> StandardFormSeries:
    """Candidate series of one of the four standard forms (not certified as solutions)."""
    d = M.dim
    if kind in _KINDS:
        tail = params if params is not None else Series.zero(2, INF, (d, d))
        return StandardFormSeries(M, _KINDS[kind], Series.constant(1), tail)
    if kind in ("trigonometric", "trig"):
        s = _trig_series(M, params, N)
        a = Series.constant(1, 2).with_trunc(N + 1)
        return normalize_type(a, s, M)
    raise ValueError(f"unknown standard form {kind!r}")


def constant_tail(M: MetricAlgebra, T) -> Series:
    T = np.asarray(T, dtype=object)
    return Series({(0, 0): T}, 2, INF, (M.dim, M.dim))


# ---------------------------------------------------------------- JSON


def solution_to_json(r: StandardFormSeries) -> dict:
    return {
        "algebra": metric_algebra_to_json(r.M),
        "n": r.n,
        "lambda": series_to_json(r.lam, ["z"]),
        "tail": series_to_json(r.tail, ["x", "y"]),
        "trunc": None if r.trunc == INF else r.trunc,
    }


def solution_from_json(doc, M: MetricAlgebra | None = None) -> StandardFormSeries:
    try:
        if M is None:
            spec = doc["algebra"]
            M = named_algebra(spec) if isinstance(spec, (str, dict)) and ("named" in spec or isinstance(spec, str)) \
                else metric_algebra_from_json(spec)
        d = M.dim
        n = int(doc.get("n", 0))
        lam = series_from_json(doc["lambda"]) if doc.get("lambda") is not None else None
        tail = series_from_json(doc["tail"], (d, d)) if doc.get("tail") is not None else None
        trunc = doc.get("trunc")
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed solution document: {exc}") from exc
    return StandardFormSeries(M, n, lam, tail, None if trunc is None else int(trunc))
