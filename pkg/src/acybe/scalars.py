"""Exact scalars: Python ints, ``fractions.Fraction`` and cyclotomic numbers.

Rational scalars are plain ``int`` or ``Fraction`` values. Elements of a
cyclotomic field Q(zeta_m) are :class:`Cyclotomic` instances; any operation
whose result happens to be rational returns a ``Fraction`` instead.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .errors import DivisionByZero, IncompatibleCyclotomicOrders, ParseError


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Integer coefficients of the m-th cyclotomic polynomial, lowest degree first."""
    if m < 1:
        raise ValueError("cyclotomic order must be positive")
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num = _exact_poly_div(num, cyclotomic_polynomial(d))
    return tuple(num)


def _exact_poly_div(num, den):
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1] // den[-1]
        out[i] = c
        for j, dj in enumerate(den):
            num[i + j] -= c * dj
    return out


def euler_phi(m: int) -> int:
    return len(cyclotomic_polynomial(m)) - 1


def _reduce(poly, m):
    phi = cyclotomic_polynomial(m)
    deg = len(phi) - 1
    poly = [Fraction(c) for c in poly]
    for i in range(len(poly) - 1, deg - 1, -1):
        c = poly[i]
        if c:
            for j in range(deg + 1):
                poly[i - deg + j] -= c * phi[j]
    poly = poly[:deg] + [Fraction(0)] * max(0, deg - len(poly))
    return tuple(poly)


def _make(m, coeffs):
    if all(c == 0 for c in coeffs[1:]):
        return coeffs[0] if coeffs else Fraction(0)
    return Cyclotomic(m, coeffs, _reduced=True)


class Cyclotomic:
    """An element of Q(zeta_m) in the power basis 1, zeta, ..., zeta^(phi(m)-1)."""

    __slots__ = ("m", "coeffs")

    def __init__(self, m: int, coeffs, _reduced: bool = False):
        self.m = m
        self.coeffs = tuple(coeffs) if _reduced else _reduce(coeffs, m)

    def promote(self, order: int) -> "Cyclotomic":
        if order == self.m:
            return self
        if order % self.m:
            raise IncompatibleCyclotomicOrders(f"cannot embed zeta_{self.m} into zeta_{order}")
        step = order // self.m
        poly = [Fraction(0)] * (step * len(self.coeffs))
        for i, c in enumerate(self.coeffs):
            poly[i * step] = c
        return Cyclotomic(order, poly)

    def _common(self, other):
        if isinstance(other, Cyclotomic):
            if other.m == self.m:
                return self, other
            if other.m % self.m == 0:
                return self.promote(other.m), other
            if self.m % other.m == 0:
                return self, other.promote(self.m)
            raise IncompatibleCyclotomicOrders(f"orders {self.m} and {other.m} are incompatible")
        if isinstance(other, (int, Fraction)):
            return self, Cyclotomic(self.m, (other,) + (0,) * (len(self.coeffs) - 1), True)
        return None, None

    def __add__(self, other):
        a, b = self._common(other)
        if a is None:
            return NotImplemented
        return _make(a.m, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.m, tuple(-c for c in self.coeffs), True)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return _make(self.m, tuple(c * other for c in self.coeffs))
        a, b = self._common(other)
        if a is None:
            return NotImplemented
        prod = [Fraction(0)] * (len(a.coeffs) + len(b.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    prod[i + j] += x * y
        return _make(a.m, _reduce(prod, a.m))

    __rmul__ = __mul__

    def inverse(self):
        from .linalg import solve

        if not any(self.coeffs):
            raise DivisionByZero("division by zero")
        n = len(self.coeffs)
        cols = []
        for j in range(n):
            basis = [0] * (j + 1)
            basis[j] = 1
            cols.append((self * Cyclotomic(self.m, basis)))
        mat = [[_coeff(col, self.m, i) for col in cols] for i in range(n)]
        x = solve(mat, [1] + [0] * (n - 1))
        return _make(self.m, tuple(Fraction(c) for c in x))

    def __truediv__(self, other):
        if isinstance(other, Cyclotomic):
            return self * other.inverse()
        if other == 0:
            raise DivisionByZero("division by zero")
        return self * (1 / Fraction(other))

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = Fraction(1), self
        while e:
            if e & 1:
                result = base * result
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        try:
            a, b = self._common(other)
        except IncompatibleCyclotomicOrders:
            return False
        return a.coeffs == b.coeffs

    def __hash__(self):
        if not any(self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash((self.m, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        return f"Cyclotomic({self.m}, {list(map(str, self.coeffs))})"

    def __str__(self):
        return format_scalar(self)


def _coeff(x, m, i):
    if isinstance(x, Cyclotomic):
        return x.promote(m).coeffs[i]
    return x if i == 0 else 0


def primitive_root(m: int):
    """zeta_m; m = 1 and m = 2 give the rationals 1 and -1."""
    if m < 1:
        raise ValueError("m must be positive")
    if m == 1:
        return Fraction(1)
    if m == 2:
        return Fraction(-1)
    return Cyclotomic(m, (0, 1))


def div(a, b):
    """a / b without ever producing a float."""
    if b == 0 and not isinstance(b, Cyclotomic):
        raise DivisionByZero("division by zero")
    if isinstance(a, int) and isinstance(b, int):
        return Fraction(a, b)
    return a / b


def inv(a):
    return div(1, a)


def is_rational(x) -> bool:
    return isinstance(x, (int, Fraction))


def format_scalar(x) -> str:
    """Canonical string: "p/q", "p" for integers, "[c0,...]@zeta_m" for cyclotomics."""
    if isinstance(x, Cyclotomic):
        return "[" + ",".join(format_scalar(c) for c in x.coeffs) + f"]@zeta_{x.m}"
    if isinstance(x, bool) or not isinstance(x, (int, Fraction)):
        raise TypeError(f"not an exact scalar: {x!r}")
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


_CYC = re.compile(r"^\[(.*)\]@zeta_(\d+)$")


def parse_scalar(s):
    """Inverse of :func:`format_scalar`; ints pass through unchanged."""
    if isinstance(s, bool):
        raise ParseError(f"not a scalar: {s!r}")
    if isinstance(s, int):
        return s
    if not isinstance(s, str):
        raise ParseError(f"not a scalar: {s!r}")
    s = s.strip()
    match = _CYC.match(s)
    if match:
        parts = [p for p in match.group(1).split(",") if p.strip()]
        value = _make(int(match.group(2)), _reduce([parse_scalar(p) for p in parts], int(match.group(2))))
        return value
    try:
        value = Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a scalar: {s!r}") from exc
    if "." in s or "e" in s.lower():
        raise ParseError(f"decimal notation is not exact: {s!r}")
    return value.numerator if value.denominator == 1 else value


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)
