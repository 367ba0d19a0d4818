"""Truncated formal power series and Laurent series with exact coefficients.

A :class:`Series` in k variables stores a sparse map from exponent tuples to
coefficients together with a total-degree truncation ``trunc``: coefficients
of degree <= trunc are known, higher ones are not. ``trunc = math.inf`` marks
an exact polynomial. Coefficients are exact scalars or numpy object arrays
(elements and tensors of an algebra); ``shape`` records which.
"""
from __future__ import annotations

import math
from fractions import Fraction
from itertools import product as iproduct

import numpy as np

from .errors import (
    IncompatibleCoefficients,
    NonvanishingConstantTerm,
    NotAUnit,
    NotDivisible,
    ParseError,
)
from .scalars import div, format_scalar, parse_scalar

INF = math.inf
VAR_NAMES = {1: ("z",), 2: ("x", "y"), 3: ("z1", "z2", "z3")}


def _zero(shape):
    return np.zeros(shape, dtype=object) if shape else 0


def _nonzero(c) -> bool:
    if isinstance(c, np.ndarray):
        return any(v != 0 for v in c.flat)
    return c != 0


def _shape(c):
    return c.shape if isinstance(c, np.ndarray) else ()


def _default_product(a, b):
    if isinstance(a, np.ndarray) and isinstance(b, np.ndarray):
        raise IncompatibleCoefficients("two array coefficients need an explicit product")
    return a * b


def _product_shape(s1, s2):
    if s1 and s2:
        raise IncompatibleCoefficients("two array coefficients need an explicit product")
    return s1 or s2


class Series:
    """Truncated power series in ``nvars`` variables."""

    __slots__ = ("nvars", "terms", "trunc", "shape")

    def __init__(self, terms=None, nvars: int = 1, trunc=INF, shape=()):
        self.nvars = nvars
        self.trunc = trunc
        self.shape = tuple(shape)
        clean = {}
        for exp, c in (terms or {}).items():
            exp = (exp,) if isinstance(exp, int) else tuple(exp)
            if len(exp) != nvars or min(exp, default=0) < 0:
                raise ValueError(f"bad exponent {exp} for a series in {nvars} variables")
            if sum(exp) <= trunc and _nonzero(c):
                if _shape(c) != self.shape:
                    raise IncompatibleCoefficients(f"coefficient shape {_shape(c)} != {self.shape}")
                clean[exp] = c
        self.terms = clean

    # ---------------------------------------------------------- constructors
    @classmethod
    def constant(cls, c, nvars=1, trunc=INF):
        return cls({(0,) * nvars: c}, nvars, trunc, _shape(c))

    @classmethod
    def monomial(cls, exp, c=1, trunc=INF):
        exp = (exp,) if isinstance(exp, int) else tuple(exp)
        return cls({exp: c}, len(exp), trunc, _shape(c))

    @classmethod
    def zero(cls, nvars=1, trunc=INF, shape=()):
        return cls({}, nvars, trunc, shape)

    @classmethod
    def from_coeffs(cls, coeffs, trunc=None):
        """Univariate series c0 + c1 z + ...; default truncation is the list length - 1."""
        trunc = len(coeffs) - 1 if trunc is None else trunc
        shape = _shape(coeffs[0]) if coeffs else ()
        return cls({(k,): c for k, c in enumerate(coeffs)}, 1, trunc, shape)

    # ---------------------------------------------------------- access
    def coeff(self, exp):
        exp = (exp,) if isinstance(exp, int) else tuple(exp)
        if sum(exp) > self.trunc:
            raise ValueError(f"degree {sum(exp)} is beyond the truncation {self.trunc}")
        return self.terms.get(exp, _zero(self.shape))

    def __getitem__(self, exp):
        return self.coeff(exp)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def valuation(self):
        return min((sum(e) for e in self.terms), default=INF)

    def is_zero(self) -> bool:
        return not self.terms

    def truncate(self, N):
        return Series(self.terms, self.nvars, min(N, self.trunc), self.shape)

    def with_trunc(self, N):
        """Same terms, declared truncation N (terms above N are dropped)."""
        return Series(self.terms, self.nvars, N, self.shape)

    def homogeneous(self, m):
        return {e: c for e, c in self.terms.items() if sum(e) == m}

    def first_nonzero(self):
        """(exponent, coefficient) of lowest total degree, ties broken lexicographically."""
        if not self.terms:
            return None
        exp = min(self.terms, key=lambda e: (sum(e), tuple(-x for x in e)))
        return exp, self.terms[exp]

    # ---------------------------------------------------------- arithmetic
    def _check(self, other):
        if not isinstance(other, Series) or other.nvars != self.nvars:
            raise IncompatibleCoefficients("series in different variables")
        if other.shape != self.shape:
            raise IncompatibleCoefficients(f"coefficient shapes {self.shape} and {other.shape}")

    def __add__(self, other):
        if not isinstance(other, Series):
            other = Series.constant(other, self.nvars) if other != 0 else Series.zero(self.nvars, INF, self.shape)
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms[e] + c if e in terms else c
        return Series(terms, self.nvars, min(self.trunc, other.trunc), self.shape)

    __radd__ = __add__

    def __neg__(self):
        return Series({e: -c for e, c in self.terms.items()}, self.nvars, self.trunc, self.shape)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        """Multiply every coefficient by the constant c (scalar or array)."""
        shape = _product_shape(self.shape, _shape(c))
        return Series({e: _default_product(c, v) for e, v in self.terms.items()}, self.nvars, self.trunc, shape)

    def map(self, fn, shape=None):
        """Apply fn to each coefficient (fn must be linear)."""
        terms = {e: fn(c) for e, c in self.terms.items()}
        if shape is None:
            shape = _shape(next(iter(terms.values()))) if terms else self.shape
        return Series(terms, self.nvars, self.trunc, shape)

    def mul(self, other, product=None, shape=None):
        """Cauchy product; ``product`` is the bilinear map on coefficients."""
        if not isinstance(other, Series) or other.nvars != self.nvars:
            raise IncompatibleCoefficients("series in different variables")
        if product is None:
            product = _default_product
            shape = _product_shape(self.shape, other.shape)
        trunc = _product_trunc(self, other)
        terms = {}
        for e1, c1 in self.terms.items():
            d1 = sum(e1)
            for e2, c2 in other.terms.items():
                if d1 + sum(e2) > trunc:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                p = product(c1, c2)
                terms[e] = terms[e] + p if e in terms else p
        if shape is None:
            shape = _shape(next(iter(terms.values()))) if terms else ()
        return Series(terms, self.nvars, trunc, shape)

    def __mul__(self, other):
        if isinstance(other, Series):
            return self.mul(other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        result = Series.constant(1, self.nvars)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        if other.nvars != self.nvars:
            return False
        N = min(self.trunc, other.trunc)
        return (self - other).truncate(N).is_zero() if self.shape == other.shape else False

    __hash__ = None

    # ---------------------------------------------------------- variable changes
    def permute(self, perm):
        """New series whose variable i is old variable perm[i]."""
        terms = {tuple(e[perm[i]] for i in range(self.nvars)): c for e, c in self.terms.items()}
        return Series(terms, self.nvars, self.trunc, self.shape)

    def embed(self, positions, nvars):
        """Rename variable i to variable positions[i] of an nvars-variable series."""
        terms = {}
        for e, c in self.terms.items():
            new = [0] * nvars
            for i, p in enumerate(positions):
                new[p] += e[i]
            terms[tuple(new)] = c
        return Series(terms, nvars, self.trunc, self.shape)

    def diagonal(self):
        """Restriction to all variables equal: a univariate series."""
        terms = {}
        for e, c in self.terms.items():
            k = (sum(e),)
            terms[k] = terms[k] + c if k in terms else c
        return Series(terms, 1, self.trunc, self.shape)

    def __repr__(self):
        return f"Series({self.to_text()}, trunc={self.trunc})"

    def to_text(self) -> str:
        names = VAR_NAMES.get(self.nvars, tuple(f"z{i + 1}" for i in range(self.nvars)))
        parts = []
        for e in sorted(self.terms, key=lambda e: (sum(e), tuple(-x for x in e))):
            c = self.terms[e]
            mono = "*".join(f"{n}^{k}" if k > 1 else n for n, k in zip(names, e) if k)
            cs = format_scalar(c) if not isinstance(c, np.ndarray) else "[" + ", ".join(map(format_scalar, c.flat)) + "]"
            parts.append(f"({cs})*{mono}" if mono else f"({cs})")
        body = " + ".join(parts) or "0"
        return body if self.trunc == INF else f"{body} + O(deg {self.trunc + 1})"


def _product_trunc(f, g):
    if not f.terms and not g.terms:
        return min(f.trunc, g.trunc)
    vf = f.valuation() if f.terms else f.trunc + 1
    vg = g.valuation() if g.terms else g.trunc + 1
    return min(f.trunc + vg, g.trunc + vf)


class Laurent:
    """Univariate Laurent series known on the exponent window [low, trunc]."""

    __slots__ = ("terms", "low", "trunc", "shape")

    def __init__(self, terms=None, low: int = 0, trunc=INF, shape=()):
        self.low = low
        self.trunc = trunc
        self.shape = tuple(shape)
        clean = {}
        for k, c in (terms or {}).items():
            if k < low:
                raise ValueError(f"exponent {k} below the window start {low}")
            if k <= trunc and _nonzero(c):
                if _shape(c) != self.shape:
                    raise IncompatibleCoefficients(f"coefficient shape {_shape(c)} != {self.shape}")
                clean[k] = c
        self.terms = clean

    @classmethod
    def from_series(cls, f: Series, shift: int = 0):
        return cls({e[0] + shift: c for e, c in f.terms.items()}, shift, f.trunc + shift, f.shape)

    @classmethod
    def monomial(cls, k, c=1, trunc=INF):
        return cls({k: c}, min(k, 0), trunc, _shape(c))

    @property
    def window(self):
        return (self.low, self.trunc)

    def coeff(self, k):
        if k > self.trunc:
            raise ValueError(f"exponent {k} is beyond the window end {self.trunc}")
        return self.terms.get(k, _zero(self.shape))

    __getitem__ = coeff

    def valuation(self):
        return min(self.terms, default=INF)

    def is_zero(self):
        return not self.terms

    def truncate(self, N):
        return Laurent(self.terms, self.low, min(self.trunc, N), self.shape)

    def __add__(self, other):
        if not isinstance(other, Laurent):
            other = Laurent({0: other} if _nonzero(other) else {}, 0, INF, _shape(other) or self.shape)
        if other.shape != self.shape:
            raise IncompatibleCoefficients("coefficient shapes differ")
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms[k] + c if k in terms else c
        return Laurent(terms, min(self.low, other.low), min(self.trunc, other.trunc), self.shape)

    __radd__ = __add__

    def __neg__(self):
        return Laurent({k: -c for k, c in self.terms.items()}, self.low, self.trunc, self.shape)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        shape = _product_shape(self.shape, _shape(c))
        return Laurent({k: _default_product(c, v) for k, v in self.terms.items()}, self.low, self.trunc, shape)

    def map(self, fn, shape=None):
        terms = {k: fn(c) for k, c in self.terms.items()}
        if shape is None:
            shape = _shape(next(iter(terms.values()))) if terms else self.shape
        return Laurent(terms, self.low, self.trunc, shape)

    def shift(self, s: int):
        """Multiply by z^s."""
        return Laurent({k + s: c for k, c in self.terms.items()}, self.low + s, self.trunc + s, self.shape)

    def mul(self, other, product=None, shape=None):
        if product is None:
            product = _default_product
            shape = _product_shape(self.shape, other.shape)
        vf = self.valuation() if self.terms else self.trunc + 1
        vg = other.valuation() if other.terms else other.trunc + 1
        trunc = min(self.trunc + vg, other.trunc + vf)
        terms = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = k1 + k2
                if k > trunc:
                    continue
                p = product(c1, c2)
                terms[k] = terms[k] + p if k in terms else p
        if shape is None:
            shape = _shape(next(iter(terms.values()))) if terms else ()
        low = self.low + other.low
        return Laurent(terms, min(low, trunc) if trunc != INF else low, trunc, shape)

    def __mul__(self, other):
        if isinstance(other, Laurent):
            return self.mul(other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, Laurent):
            return NotImplemented
        N = min(self.trunc, other.trunc)
        return (self - other).truncate(N).is_zero()

    __hash__ = None

    def residue(self):
        """Coefficient of z^-1."""
        from .errors import WindowTooSmall

        if self.trunc < -1:
            raise WindowTooSmall(f"window {self.window} does not reach exponent -1")
        return self.terms.get(-1, _zero(self.shape))

    def __repr__(self):
        parts = [f"({format_scalar(c) if not isinstance(c, np.ndarray) else c.tolist()})*z^{k}"
                 for k, c in sorted(self.terms.items())]
        return f"Laurent({' + '.join(parts) or '0'}, window=[{self.low}, {self.trunc}])"


# ---------------------------------------------------------------- special operations


def invert_unit(f: Series, N) -> Series:
    """Multiplicative inverse of a univariate scalar series up to degree N."""
    if f.nvars != 1 or f.shape:
        raise IncompatibleCoefficients("invert_unit needs a univariate scalar series")
    f0 = f.terms.get((0,), 0)
    if f0 == 0:
        raise NotAUnit("constant term is zero")
    N = min(N, f.trunc)
    inv0 = div(1, f0)
    g = [inv0]
    for k in range(1, N + 1):
        s = sum((f.terms.get((j,), 0) * g[k - j] for j in range(1, k + 1)), 0)
        g.append(-inv0 * s)
    return Series({(k,): c for k, c in enumerate(g)}, 1, N)


def invert_series(f: Series, N) -> Series:
    """Inverse of a scalar series in any number of variables, up to total degree N."""
    if f.shape:
        raise IncompatibleCoefficients("invert_series needs a scalar series")
    zero_exp = (0,) * f.nvars
    f0 = f.terms.get(zero_exp, 0)
    if f0 == 0:
        raise NotAUnit("constant term is zero")
    N = min(N, f.trunc)
    if N == INF:
        raise ValueError("an inverse series needs a finite degree bound")
    inv0 = div(1, f0)
    h = Series({e: -c * inv0 for e, c in f.terms.items() if e != zero_exp}, f.nvars, N)
    result = Series.constant(1, f.nvars).with_trunc(N)
    power = result
    for _ in range(int(N)):
        power = power.mul(h).truncate(N)
        if power.is_zero():
            break
        result = result + power
    return result.scale(inv0).with_trunc(N)


def substitute(f: Series, u: Series, N) -> Series:
    """Composition f(u(z)) up to degree N; requires u(0) = 0."""
    if f.nvars != 1 or u.nvars != 1:
        raise IncompatibleCoefficients("substitute works on univariate series")
    if _nonzero(u.terms.get((0,), 0)):
        raise NonvanishingConstantTerm("inner series must vanish at 0")
    vu = u.valuation() if u.terms else u.trunc + 1
    top = f.degree() if f.trunc == INF else f.trunc
    N = min(N, u.trunc, (f.trunc + 1) * vu - 1 if f.trunc != INF else INF)
    if top < 0:
        return Series.zero(1, N, f.shape)
    result = Series.constant(f.coeff(top), 1).with_trunc(N) if _nonzero(f.coeff(top)) else Series.zero(1, N, f.shape)
    for j in range(top - 1, -1, -1):
        result = result.mul(u, lambda a, b: a * b, f.shape).truncate(N)
        c = f.terms.get((j,))
        if c is not None:
            result = result + Series.constant(c, 1)
    return result.with_trunc(N)


def exp_series(N: int, shape=()) -> Series:
    """sum_k z^k / k! up to degree N."""
    return Series({(k,): Fraction(1, math.factorial(k)) for k in range(N + 1)}, 1, N)


def bernoulli_expansion(N: int) -> Laurent:
    """1/(e^z - 1) on the window [-1, N], via exact inversion of (e^z - 1)/z."""
    q = Series({(k,): Fraction(1, math.factorial(k + 1)) for k in range(N + 2)}, 1, N + 1)
    return Laurent.from_series(invert_unit(q, N + 1), shift=-1)


def divide_by_difference(f: Series, a: int = 0, b: int = 1, label=None) -> Series:
    """g with (z_a - z_b) g = f, exact through total degree trunc - 1.

    Raises NotDivisible at the lowest total degree where f does not vanish on
    the diagonal z_a = z_b.
    """
    if a == b:
        raise ValueError("need two distinct variables")
    label = label or f"z{a + 1}=z{b + 1}"
    groups = {}
    for e, c in f.terms.items():
        rest = tuple(x for i, x in enumerate(e) if i not in (a, b))
        groups.setdefault((rest, e[a] + e[b]), {})[e[a]] = c
    out = {}
    failures = []
    zero = _zero(f.shape)
    for (rest, m), cs in groups.items():
        g = [zero] * m
        if m > 0:
            g[m - 1] = cs.get(m, zero)
            for i in range(m - 1, 0, -1):
                g[i - 1] = cs.get(i, zero) + g[i]
        residual = cs.get(0, zero) + (g[0] if m > 0 else zero)
        if _nonzero(residual):
            failures.append((m + sum(rest), rest, m))
            continue
        for i, gi in enumerate(g):
            if _nonzero(gi):
                e = _insert(rest, a, i, b, m - 1 - i, f.nvars)
                out[e] = gi
    if failures:
        deg = min(failures)[0]
        raise NotDivisible(f"not divisible: nonzero on the diagonal {label} at total degree {deg}",
                           diagonal=label, degree=deg)
    return Series(out, f.nvars, f.trunc - 1, f.shape)


def _insert(rest, a, ea, b, eb, nvars):
    e = []
    it = iter(rest)
    for i in range(nvars):
        if i == a:
            e.append(ea)
        elif i == b:
            e.append(eb)
        else:
            e.append(next(it))
    return tuple(e)


def divide_by_diagonal(f: Series) -> Series:
    """g with (x - y) g = f for a bivariate series."""
    if f.nvars != 2:
        raise IncompatibleCoefficients("divide_by_diagonal needs a bivariate series")
    return divide_by_difference(f, 0, 1, label="x=y")


def vandermonde_divide(F: Series) -> Series:
    """G with (z1-z2)(z1-z3)(z2-z3) G = F, exact through total degree trunc - 3."""
    if F.nvars != 3:
        raise IncompatibleCoefficients("vandermonde_divide needs a trivariate series")
    G = F
    for shift, (a, b) in enumerate(((0, 1), (0, 2), (1, 2))):
        try:
            G = divide_by_difference(G, a, b)
        except NotDivisible as exc:
            deg = exc.degree + shift
            raise NotDivisible(f"not divisible: nonzero on the diagonal {exc.diagonal} at total degree {deg}",
                               diagonal=exc.diagonal, degree=deg) from None
    return G


def difference_series(nvars, a, b):
    """The polynomial z_a - z_b."""
    ea = tuple(int(i == a) for i in range(nvars))
    eb = tuple(int(i == b) for i in range(nvars))
    return Series({ea: 1, eb: -1}, nvars)


# ---------------------------------------------------------------- JSON


def coeff_to_json(c):
    if isinstance(c, np.ndarray):
        return [coeff_to_json(x) for x in c] if c.ndim else format_scalar(c.item())
    return format_scalar(c)


def coeff_from_json(data):
    if isinstance(data, list):
        arr = np.array(_parse_nested(data), dtype=object)
        return arr
    return parse_scalar(data)


def _parse_nested(data):
    if isinstance(data, list):
        return [_parse_nested(x) for x in data]
    return parse_scalar(data)


def series_to_json(f, names=None):
    if isinstance(f, Laurent):
        names = names or ["z"]
        terms = [{"exp": [k], "coeff": coeff_to_json(c)} for k, c in sorted(f.terms.items())]
        return {"vars": list(names), "trunc": None if f.trunc == INF else f.trunc,
                "window": [f.low, None if f.trunc == INF else f.trunc], "terms": terms}
    names = names or list(VAR_NAMES.get(f.nvars, [f"z{i + 1}" for i in range(f.nvars)]))
    terms = [{"exp": list(e), "coeff": coeff_to_json(f.terms[e])}
             for e in sorted(f.terms, key=lambda e: (sum(e), tuple(-x for x in e)))]
    doc = {"vars": list(names), "trunc": None if f.trunc == INF else f.trunc, "terms": terms}
    if f.shape:
        doc["shape"] = list(f.shape)
    return doc


def series_from_json(doc, shape=None):
    try:
        names = doc["vars"]
        trunc = INF if doc.get("trunc") is None else int(doc["trunc"])
        terms = {}
        for t in doc["terms"]:
            exp = tuple(int(x) for x in t["exp"])
            c = coeff_from_json(t["coeff"])
            terms[exp] = terms[exp] + c if exp in terms else c
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed series document: {exc}") from exc
    if "window" in doc:
        low = int(doc["window"][0])
        return Laurent({e[0]: c for e, c in terms.items()}, low, trunc, _infer_shape(terms, doc, shape))
    return Series(terms, len(names), trunc, _infer_shape(terms, doc, shape))


def _infer_shape(terms, doc, shape):
    if shape is not None:
        return tuple(shape)
    if "shape" in doc:
        return tuple(doc["shape"])
    for c in terms.values():
        return _shape(c)
    return ()


def all_exponents(nvars, max_degree):
    """Exponent tuples of total degree <= max_degree in graded order."""
    for deg in range(max_degree + 1):
        for e in iproduct(range(deg + 1), repeat=nvars):
            if sum(e) == deg:
                yield e
