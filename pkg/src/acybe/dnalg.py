"""The algebra D_n(A) = A((z)) x A[z]/z^n, its residue pairings and generators.

An element is a pair (left, right): ``left`` is a :class:`Laurent` with
element coefficients and ``right`` a tuple of n element coefficients of the
class of a polynomial mod z^n. Generator indices i are 0-based.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg
from .algebra import MetricAlgebra, matrix_algebra, zeros
from .errors import IndexOutOfRange, ParameterMismatch, ParseError, WindowTooSmall
from .series import INF, Laurent, Series, coeff_from_json, coeff_to_json, invert_unit


def _nz(c):
    return any(v != 0 for v in c.flat)


class DnElement:
    __slots__ = ("M", "n", "left", "right")

    def __init__(self, M: MetricAlgebra, n: int, left: Laurent | None = None, right=None):
        if n < 0:
            raise ValueError("n must be non-negative")
        d = M.dim
        self.M = M
        self.n = n
        self.left = left if left is not None else Laurent({}, 0, INF, (d,))
        if self.left.shape != (d,):
            raise ParameterMismatch("left component must have element coefficients")
        right = list(right) if right is not None else []
        right = right[:n] + [zeros(d)] * (n - len(right[:n]))
        self.right = tuple(np.asarray(c, dtype=object) for c in right)

    @classmethod
    def diagonal(cls, M, n, f):
        """The image (f, [f]) of a polynomial or series f over A."""
        if isinstance(f, Series):
            left = Laurent.from_series(f)
            right = [f.terms.get((k,), zeros(M.dim)) for k in range(n)]
            if f.trunc < n - 1:
                raise WindowTooSmall(f"series known only through degree {f.trunc}, need {n - 1}")
        else:
            left = Laurent({0: np.asarray(f, dtype=object)}, 0, INF, (M.dim,))
            right = [np.asarray(f, dtype=object)] + [zeros(M.dim)] * (n - 1)
        return cls(M, n, left, right)

    @classmethod
    def monomial(cls, M, n, k, a):
        """The diagonal image of a z^k for k >= 0."""
        a = np.asarray(a, dtype=object)
        left = Laurent({k: a}, min(k, 0), INF, (M.dim,))
        right = [a if j == k else zeros(M.dim) for j in range(n)]
        return cls(M, n, left, right)

    def _same(self, other):
        if not isinstance(other, DnElement) or other.n != self.n or other.M is not self.M and other.M.dim != self.M.dim:
            raise ParameterMismatch("elements of different D_n(A)")

    def __add__(self, other):
        self._same(other)
        return DnElement(self.M, self.n, self.left + other.left,
                         [a + b for a, b in zip(self.right, other.right)])

    def __neg__(self):
        return DnElement(self.M, self.n, -self.left, [-a for a in self.right])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return DnElement(self.M, self.n, self.left.scale(c), [c * a for a in self.right])

    def __rmul__(self, c):
        return self.scale(c)

    def __mul__(self, other):
        if not isinstance(other, DnElement):
            return self.scale(other)
        return dn_multiply(self, other)

    def times_scalar_series(self, lam: Series):
        """Multiply by the scalar series (lam, [lam])."""
        lam_l = Laurent.from_series(lam)
        left = lam_l.mul(self.left, lambda s, a: s * a, (self.M.dim,))
        right = [zeros(self.M.dim) for _ in range(self.n)]
        for j in range(self.n):
            for i in range(j + 1):
                c = lam.terms.get((i,), 0)
                if c != 0:
                    right[j] = right[j] + c * self.right[j - i]
        return DnElement(self.M, self.n, left, right)

    def is_zero(self) -> bool:
        return self.left.is_zero() and not any(_nz(c) for c in self.right)

    def __eq__(self, other):
        if not isinstance(other, DnElement):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        right = [c.tolist() for c in self.right]
        return f"DnElement(n={self.n}, left={self.left!r}, right={right})"


def dn_multiply(x: DnElement, y: DnElement) -> DnElement:
    """Componentwise product; the right component is reduced mod z^n."""
    x._same(y)
    mul = x.M.algebra.multiply
    left = x.left.mul(y.left, mul, (x.M.dim,))
    right = [zeros(x.M.dim) for _ in range(x.n)]
    for i, a in enumerate(x.right):
        if not _nz(a):
            continue
        for j, b in enumerate(y.right):
            if i + j < x.n and _nz(b):
                right[i + j] = right[i + j] + mul(a, b)
    return DnElement(x.M, x.n, left, right)


def residue(f: Laurent):
    """Coefficient of z^-1."""
    return f.residue()


class ResiduePairing:
    """beta_(n,lam)((a1,[a2]), (b1,[b2])) = res_0 z^-n lam^-1 (beta(a1,b1) - beta(a2,b2))."""

    def __init__(self, M: MetricAlgebra, n: int, lam: Series | None = None, general_lambda: bool = False):
        self.M = M
        self.n = n
        self.lam = lam if lam is not None else Series.constant(1)
        c0 = self.lam.terms.get((0,), 0)
        if c0 == 0:
            raise ValueError("lambda must be a unit")
        if c0 != 1 and not general_lambda:
            raise ValueError("lambda(0) must be 1 unless general_lambda=True")
        self._mu = None
        self._mu_deg = -1

    def _inverse_lambda(self, deg):
        if deg > self.lam.trunc:
            raise WindowTooSmall(f"lambda known only through degree {self.lam.trunc}, need {deg}")
        if deg > self._mu_deg:
            self._mu = invert_unit(self.lam, deg)
            self._mu_deg = deg
        return self._mu

    def _scalar(self, f: Laurent):
        """res_0 z^-n lam^-1 f for a scalar Laurent f."""
        n = self.n
        if not f.terms:
            if f.trunc < n - 1:
                raise WindowTooSmall(f"pairing needs degree {n - 1}, window ends at {f.trunc}")
            return 0
        v = min(f.terms)
        if f.trunc < n - 1:
            raise WindowTooSmall(f"pairing needs degree {n - 1}, window ends at {f.trunc}")
        if v > n - 1:
            return 0
        mu = self._inverse_lambda(n - 1 - v)
        return sum((mu.terms.get((j,), 0) * f.terms.get(n - 1 - j, 0) for j in range(n - v)), 0)

    def _beta_laurent(self, a: Laurent, b: Laurent):
        return a.mul(b, self.M.beta, ())

    def _beta_right(self, x: DnElement, y: DnElement):
        terms = {}
        for i, a in enumerate(x.right):
            for j, b in enumerate(y.right):
                if i + j < self.n:
                    terms[i + j] = terms.get(i + j, 0) + self.M.beta(a, b)
        return Laurent(terms, 0, INF, ())

    def __call__(self, x: DnElement, y: DnElement):
        return self._scalar(self._beta_laurent(x.left, y.left) - self._beta_right(x, y))

    def plus(self, x: DnElement, y: DnElement):
        return self._scalar(self._beta_laurent(x.left, y.left))

    def minus(self, x: DnElement, y: DnElement):
        return self._scalar(self._beta_right(x, y))


def beta_n_lambda(P: ResiduePairing, x: DnElement, y: DnElement):
    return P(x, y)


# ---------------------------------------------------------------- pole expansion


def pole_expansion(n: int, upto: int, M: MetricAlgebra | None = None):
    """Coefficients E_k (k = -n .. upto) of 1/(x - y) = sum_k E_k y^k in D_n(k)."""
    M = M or matrix_algebra(1)
    one = M.algebra.element([1] + [0] * (M.dim - 1)) if M.dim == 1 else None
    if one is None:
        raise ValueError("pole_expansion lives in D_n of the one-dimensional algebra")
    out = {}
    for k in range(-n, 0):
        right = [zeros(1) for _ in range(n)]
        right[-k - 1] = -one
        out[k] = DnElement(M, n, None, right)
    for k in range(0, upto + 1):
        out[k] = DnElement(M, n, Laurent({-k - 1: one}, -k - 1, INF, (1,)))
    return out


def check_pole_expansion(n: int, upto: int) -> bool:
    """((x,[x]) - y) * expansion = (1, 1) coefficientwise for y^-n .. y^upto."""
    M = matrix_algebra(1)
    E = pole_expansion(n, upto, M)
    x = DnElement.monomial(M, n, 1, M.algebra.basis(0))
    unit = DnElement.monomial(M, n, 0, M.algebra.basis(0))
    zero = DnElement(M, n)
    for k in range(-n, upto + 1):
        got = x * E[k] - E.get(k - 1, zero)
        if got != (unit if k == 0 else zero):
            return False
    return True


def w_generator(M: MetricAlgebra, n: int, k: int, i: int) -> DnElement:
    """w_{k,i}: (0, -[b_i^* x^(n-1-k)]) for k < n, (b_i^* x^(n-1-k), 0) otherwise."""
    if k < 0 or not 0 <= i < M.dim:
        raise IndexOutOfRange(f"generator index ({k}, {i}) out of range")
    dual = M.gram_inverse[:, i].copy()
    if k < n:
        right = [zeros(M.dim) for _ in range(n)]
        right[n - 1 - k] = -dual
        return DnElement(M, n, None, right)
    e = n - 1 - k
    return DnElement(M, n, Laurent({e: dual}, e, INF, (M.dim,)))


w_generators = w_generator


# ---------------------------------------------------------------- WBasis


@dataclass
class WBasis:
    """The family {lam * w_{k,i} + t_{k,i}}; tails are exact polynomials over A."""

    M: MetricAlgebra
    n: int
    tails: dict = field(default_factory=dict)
    lam: Series = None

    def __post_init__(self):
        if self.lam is None:
            self.lam = Series.constant(1)
        self.tails = {key: t for key, t in self.tails.items() if not t.is_zero()}

    @property
    def tail_bound(self) -> int:
        return max((k + 1 for k, _ in self.tails), default=0)

    def tail(self, k, i) -> Series:
        return self.tails.get((k, i), Series.zero(1, INF, (self.M.dim,)))

    def generator(self, k, i) -> DnElement:
        w = w_generator(self.M, self.n, k, i)
        if not (len(self.lam.terms) == 1 and self.lam.terms.get((0,)) == 1 and self.lam.trunc == INF):
            w = w.times_scalar_series(self.lam)
        t = self.tails.get((k, i))
        if t is not None:
            w = w + DnElement.diagonal(self.M, self.n, t)
        return w

    def generators(self, K):
        return [self.generator(k, i) for k in range(K) for i in range(self.M.dim)]

    def max_tail_degree(self) -> int:
        return max((t.degree() for t in self.tails.values()), default=0)

    def __eq__(self, other):
        if not isinstance(other, WBasis) or other.n != self.n or other.M.dim != self.M.dim:
            return False
        keys = set(self.tails) | set(other.tails)
        return all(self.tail(*k) == other.tail(*k) for k in keys) and self.lam == other.lam


def element_poly_to_json(f: Series):
    return [{"exp": e[0], "coeff": coeff_to_json(c)} for e, c in sorted(f.terms.items())]


def element_poly_from_json(data, d):
    terms = {}
    for t in data:
        terms[(int(t["exp"]),)] = coeff_from_json(t["coeff"])
    return Series(terms, 1, INF, (d,))


def wbasis_to_json(W: WBasis):
    from .series import series_to_json

    doc = {
        "n": W.n,
        "tail_bound": W.tail_bound,
        "tails": {f"{k},{i}": element_poly_to_json(t) for (k, i), t in sorted(W.tails.items())},
    }
    if not (len(W.lam.terms) == 1 and W.lam.terms.get((0,)) == 1):
        doc["lambda"] = series_to_json(W.lam, ["z"])
    return doc


def wbasis_from_json(doc, M: MetricAlgebra) -> WBasis:
    from .series import series_from_json

    try:
        tails = {}
        for key, data in doc.get("tails", {}).items():
            k, i = (int(x) for x in key.split(","))
            tails[(k, i)] = element_poly_from_json(data, M.dim)
        lam = series_from_json(doc["lambda"]) if "lambda" in doc else None
        W = WBasis(M, int(doc["n"]), tails, lam)
    except (KeyError, ValueError, TypeError) as exc:
        raise ParseError(f"malformed WBasis document: {exc}") from exc
    return W


# ---------------------------------------------------------------- windowed linear algebra


class WindowSpace:
    """Coordinates on D_n(A) restricted to left exponents in [lo, hi].

    The quotient by z^(hi+1) A[[z]] x 0 is taken, which lies inside the
    diagonal copy of A[[z]] as soon as hi + 1 >= n.
    """

    def __init__(self, M, n, lo, hi):
        if hi + 1 < n:
            raise WindowTooSmall(f"window end {hi} must be at least n - 1 = {n - 1}")
        self.M, self.n, self.lo, self.hi = M, n, lo, hi
        self.d = M.dim
        self.size = self.d * (hi - lo + 1) + self.d * n

    def vector(self, x: DnElement):
        d = self.d
        v = [0] * self.size
        if x.left.trunc < self.hi:
            raise WindowTooSmall(f"element known only through degree {x.left.trunc}, window ends at {self.hi}")
        for k, c in x.left.terms.items():
            if k < self.lo:
                raise WindowTooSmall(f"element has exponent {k} below the window start {self.lo}")
            if k <= self.hi:
                off = (k - self.lo) * d
                for j in range(d):
                    v[off + j] = c[j]
        base = d * (self.hi - self.lo + 1)
        for k, c in enumerate(x.right):
            for j in range(d):
                v[base + k * d + j] = c[j]
        return v

    def diagonal_monomials(self):
        return [(m, j) for m in range(0, self.hi + 1) for j in range(self.d)]


class Decomposer:
    """Splits elements along D_n(A) = A[[z]] + span(generators) inside a window."""

    def __init__(self, space: WindowSpace, generators):
        self.space = space
        self.generators = list(generators)
        M, n = space.M, space.n
        cols = [space.vector(DnElement.monomial(M, n, m, M.algebra.basis(j)))
                for m, j in space.diagonal_monomials()]
        self.ndiag = len(cols)
        cols += [space.vector(g) for g in self.generators]
        self.columns = cols
        self.matrix = linalg.transpose(cols) if cols else []
        self.rank = linalg.rank(self.matrix) if cols else 0
        self.square = len(cols) == space.size
        self._rref = None

    @property
    def complementary(self) -> bool:
        return self.square and self.rank == self.space.size

    def solve_many(self, targets):
        """Coordinates of each target (diagonal part first), or None if outside the span."""
        if not targets:
            return []
        vecs = [self.space.vector(t) for t in targets]
        ncol = len(self.columns)
        aug = [list(row) + [v[r] for v in vecs] for r, row in enumerate(self.matrix)]
        rows, pivots = linalg.rref(aug)
        if pivots[:ncol] != list(range(ncol)):
            raise linalg.SingularMatrix("generators and diagonal monomials are dependent in this window")
        out = []
        for t in range(len(vecs)):
            col = ncol + t
            if col in pivots:
                out.append(None)
            else:
                out.append([rows[r][col] for r in range(ncol)])
        return out

    def split(self, target):
        """(diagonal series over A, generator coefficients) with target = diag + sum c g."""
        (x,) = self.solve_many([target])
        if x is None:
            return None
        return self._diag_series(x[: self.ndiag]), x[self.ndiag:]

    def _diag_series(self, coords):
        d = self.space.d
        terms = {}
        for (m, j), c in zip(self.space.diagonal_monomials(), coords):
            if c != 0:
                terms.setdefault((m,), zeros(d))[j] += c
        return Series(terms, 1, INF, (d,))


@dataclass
class SpanReport:
    isotropic: bool
    complementary: bool
    subalgebra: bool
    window: tuple
    generator_bound: int
    rank_table: list
    first_failure: dict | None = None

    @property
    def ok(self):
        return self.isotropic and self.complementary and self.subalgebra

    def __bool__(self):
        return self.ok

    def as_dict(self):
        return {
            "isotropic": self.isotropic,
            "complementary": self.complementary,
            "subalgebra": self.subalgebra,
            "window": list(self.window),
            "generator_bound": self.generator_bound,
            "rank_table": self.rank_table,
            "first_failure": self.first_failure,
        }


def _left_extent(g: DnElement):
    ks = list(g.left.terms)
    return (min(ks), max(ks)) if ks else (0, 0)


def rank_table(M, n, gens_for, lo_min, hi):
    """Per-window ranks of diagonal monomials together with the generators."""
    table = []
    ok = True
    for lo in range(0, min(lo_min, 0) - 1, -1):
        space = WindowSpace(M, n, lo, hi)
        dec = Decomposer(space, gens_for(n - lo))
        full = dec.complementary
        ok &= full
        table.append({"window": [lo, hi], "size": space.size, "columns": len(dec.columns), "rank": dec.rank})
    return ok, table


def wbasis_span_check(W: WBasis, P: ResiduePairing, window=(-4, 4)) -> SpanReport:
    """Isotropy, complementarity to A[[z]] and closure of span(W) in a window.

    window = (v, N): generators whose principal part reaches down to z^v are
    tested (index k < n - v) and diagonal monomials up to z^N are used.
    """
    if P.n != W.n or P.M.dim != W.M.dim:
        raise ParameterMismatch("pairing and subspace live in different D_n(A)")
    v, N = window
    n, M = W.n, W.M
    if N < n - 1:
        raise WindowTooSmall(f"window end {N} must be at least n - 1 = {n - 1}")
    K = max(n - v, n)
    gens = {(k, i): W.generator(k, i) for k in range(K) for i in range(M.dim)}

    first = None
    isotropic = True
    for a, ga in gens.items():
        for b, gb in gens.items():
            val = P(ga, gb)
            if val != 0:
                isotropic = False
                first = first or {"check": "isotropic", "pair": [list(a), list(b)], "value": str(val)}
                break
        if not isotropic:
            break

    complementary, table = rank_table(M, n, W.generators, v, N)
    if not complementary and first is None:
        bad = next(r for r in table if r["rank"] != r["size"])
        first = {"check": "complementary", "window": bad["window"], "rank": bad["rank"], "size": bad["size"]}

    subalgebra = True
    products = {}
    for a, ga in gens.items():
        for b, gb in gens.items():
            products[(a, b)] = ga * gb
    by_window = {}
    for key, p in products.items():
        lo, top = _left_extent(p)
        lo = min(lo, v, 0)
        by_window.setdefault(lo, []).append(key)
    hi = max([N, n - 1, W.max_tail_degree() + W.lam.degree() + n]
             + [_left_extent(p)[1] for p in products.values()])
    for lo in sorted(by_window, reverse=True):
        keys = by_window[lo]
        dec = Decomposer(WindowSpace(M, n, lo, hi), W.generators(n - lo))
        sols = dec.solve_many([products[k] for k in keys])
        for key, x in zip(keys, sols):
            if x is None or any(c != 0 for c in x[: dec.ndiag]):
                subalgebra = False
                if first is None:
                    first = {"check": "subalgebra", "pair": [list(key[0]), list(key[1])]}
                break
        if not subalgebra:
            break
    return SpanReport(isotropic, complementary, subalgebra, (v, N), K, table, first)


# ---------------------------------------------------------------- trace extensions


class RnElement:
    """Element (a, [b]) of R_n = k((z)) x k[z]/z^n with trace t(a,[b]) = res_0 (a - b)/(z^n lam)."""

    def __init__(self, n, left: Laurent, right=None, lam: Series | None = None):
        self.n = n
        self.left = left
        right = list(right or [])
        self.right = tuple(right[:n] + [0] * (n - len(right[:n])))
        self.lam = lam if lam is not None else Series.constant(1)

    def __add__(self, other):
        return RnElement(self.n, self.left + other.left, [a + b for a, b in zip(self.right, other.right)], self.lam)

    def __mul__(self, other):
        right = [0] * self.n
        for i, a in enumerate(self.right):
            for j, b in enumerate(other.right):
                if i + j < self.n:
                    right[i + j] += a * b
        return RnElement(self.n, self.left * other.left, right, self.lam)

    def trace(self):
        f = self.left - Laurent(dict(enumerate(self.right)), 0, INF, ())
        M = matrix_algebra(1)
        return ResiduePairing(M, self.n, self.lam, general_lambda=True)._scalar(f)


class RInfinityElement:
    """Element f + sum_j c_j a_j of k[[z]] + span{a_j}, truncated at index bound K.

    a_j a_k = 0, a_j z^k = a_(j-k) for k <= j and 0 otherwise, t(a_j) = delta_j0.
    """

    def __init__(self, series: dict | None = None, a: dict | None = None, bound: int = 8):
        self.bound = bound
        self.series = {k: c for k, c in (series or {}).items() if c != 0 and k <= bound}
        self.a = {k: c for k, c in (a or {}).items() if c != 0 and k <= bound}

    def __add__(self, other):
        s = dict(self.series)
        for k, c in other.series.items():
            s[k] = s.get(k, 0) + c
        a = dict(self.a)
        for k, c in other.a.items():
            a[k] = a.get(k, 0) + c
        return RInfinityElement(s, a, min(self.bound, other.bound))

    def __mul__(self, other):
        bound = min(self.bound, other.bound)
        s = {}
        for i, c in self.series.items():
            for j, e in other.series.items():
                s[i + j] = s.get(i + j, 0) + c * e
        a = {}
        for j, c in self.a.items():
            for k, e in other.series.items():
                if k <= j:
                    a[j - k] = a.get(j - k, 0) + c * e
        for j, c in other.a.items():
            for k, e in self.series.items():
                if k <= j:
                    a[j - k] = a.get(j - k, 0) + c * e
        return RInfinityElement(s, a, bound)

    def __eq__(self, other):
        return (self + RInfinityElement({k: -c for k, c in other.series.items()},
                                        {k: -c for k, c in other.a.items()}, other.bound)).is_zero()

    __hash__ = None

    def is_zero(self):
        return not self.series and not self.a

    def trace(self):
        return self.a.get(0, 0)
