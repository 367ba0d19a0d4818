"""Associative Stolin pairs and the rational / quasi-rational solutions they define.

Matrices in M_n are stored as coordinate vectors over the matrix units,
e_ij at index i*n + j, matching :func:`acybe.algebra.matrix_algebra`.
The block of rows/columns >= n - k is the "lower" block; P_k forbids the
lower-left block and N_k allows exponents up to 1 / 0 / -1 in the
upper-right / diagonal / lower-left blocks.

D_eps = A + eps A is realised as N_k / z^-2 N_k through x -> d x d^-1 with
d = diag(1, .., 1, z, .., z): eps corresponds to z^-1 in the rational case
and to [z] in A[z]/z^2 in the quasi-rational case.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg
from .algebra import matrix_algebra, zeros
from .cybe import StandardFormSeries, series_to_subspace, subspace_to_series, verify
from .dnalg import WBasis
from .errors import IndexOutOfRange, InvalidPair, NotInOrder, ParseError, WindowTooSmall
from .scalars import format_scalar, parse_scalar
from .series import INF, Laurent, Series


def _lower(n, k, i):
    return i >= n - k


def _block_bound(n, k, i, j):
    """Largest z-exponent allowed in entry (i, j) of N_k."""
    return int(_lower(n, k, j)) - int(_lower(n, k, i))


def _check_type(n, k, top):
    if n < 1 or not 0 <= k <= top:
        raise IndexOutOfRange(f"type k={k} out of range for n={n}")


def _unit(n, i, j):
    v = zeros(n * n)
    v[i * n + j] = 1
    return v


def parabolic_P_k(n: int, k: int):
    """Basis of P_k as coordinate vectors: every e_ij outside the lower-left block."""
    _check_type(n, k, n - 1)
    return [_unit(n, i, j) for i in range(n) for j in range(n) if _block_bound(n, k, i, j) >= 0]


def upper_right_block(n: int, k: int):
    """Basis of P_k^perp for the trace form: the upper-right block."""
    _check_type(n, k, n)
    return [_unit(n, i, j) for i in range(n) for j in range(n) if _block_bound(n, k, i, j) == 1]


@dataclass
class OrderNk:
    """N_k = d^-1 A[z^-1] d, restricted to exponents >= lo for spanning purposes."""

    n: int
    k: int
    window: tuple = (-3, 1)

    def bound(self, i, j) -> int:
        return _block_bound(self.n, self.k, i, j)

    def contains(self, x: Laurent) -> bool:
        """Coefficient-wise test; x has element coefficients of length n^2."""
        if x.trunc < 1:
            raise WindowTooSmall(f"membership needs coefficients through degree 1, known through {x.trunc}")
        return self.violation(x) is None

    def violation(self, x: Laurent):
        """First (exponent, i, j) breaking the block bounds, or None."""
        n = self.n
        for e in sorted(x.terms):
            c = x.terms[e]
            for i in range(n):
                for j in range(n):
                    if c[i * n + j] != 0 and e > self.bound(i, j):
                        return (e, i, j)
        return None

    def spanning_family(self):
        """The monomials e_ij z^e of N_k with lo <= e <= min(hi, bound)."""
        lo, hi = self.window
        n = self.n
        out = []
        for i in range(n):
            for j in range(n):
                for e in range(lo, min(hi, self.bound(i, j)) + 1):
                    out.append(Laurent({e: _unit(n, i, j)}, min(e, 0), INF, (n * n,)))
        return out


def order_N_k(n: int, k: int, window=(-3, 1)) -> OrderNk:
    _check_type(n, k, n)
    return OrderNk(n, k, tuple(window))


def conjugate_to_polynomial(x: Laurent, n: int, k: int) -> Laurent:
    """d x d^-1 with d = diag(1, .., 1, z, .., z) (k entries z)."""
    terms = {}
    for e, c in x.terms.items():
        for i in range(n):
            for j in range(n):
                v = c[i * n + j]
                if v != 0:
                    s = int(_lower(n, k, i)) - int(_lower(n, k, j))
                    terms.setdefault(e + s, zeros(n * n))[i * n + j] += v
    low = min([x.low - 1] + list(terms))
    trunc = x.trunc - 1 if x.trunc != INF else INF
    return Laurent(terms, low, trunc, (n * n,))


def reduce_mod_order(x: Laurent, n: int, k: int):
    """Class of x in N_k / z^-2 N_k as (a0, a1) with x -> a0 + eps a1."""
    X = conjugate_to_polynomial(x, n, k)
    return X.terms.get(0, zeros(n * n)), X.terms.get(-1, zeros(n * n))


# ---------------------------------------------------------------- the pair


def _vec(m):
    return np.asarray(m, dtype=object).reshape(-1)


@dataclass
class StolinPair:
    n: int
    k: int
    S_basis: list
    chi: list

    def __post_init__(self):
        d = self.n * self.n
        self.S_basis = [_vec(b) for b in self.S_basis]
        if any(b.size != d for b in self.S_basis):
            raise InvalidPair(f"basis matrices must be {self.n}x{self.n}")
        m = len(self.S_basis)
        self.chi = [list(row) for row in self.chi] if m else []
        if len(self.chi) != m or any(len(row) != m for row in self.chi):
            raise InvalidPair(f"chi must be a {m}x{m} matrix over the S-basis")

    @property
    def dim(self) -> int:
        return len(self.S_basis)

    def form(self, u, v):
        """chi on coordinate vectors over the S-basis."""
        return sum((u[a] * self.chi[a][b] * v[b] for a in range(self.dim) for b in range(self.dim)), 0)

    def coordinates(self, x):
        """Coordinates of a matrix over the S-basis, or None if x is not in S."""
        if not self.S_basis:
            return [] if all(c == 0 for c in x) else None
        mat = [[b[r] for b in self.S_basis] for r in range(self.n * self.n)]
        return linalg.solve_any(mat, list(x))

    def canonical(self) -> "StolinPair":
        """The same pair over the row-reduced basis of S."""
        if not self.S_basis:
            return StolinPair(self.n, self.k, [], [])
        rows = linalg.span_basis([list(b) for b in self.S_basis])
        if len(rows) != self.dim:
            raise InvalidPair("S-basis is linearly dependent")
        C = [self.coordinates(r) for r in rows]
        chi = linalg.matmul(linalg.matmul(C, self.chi), linalg.transpose(C))
        return StolinPair(self.n, self.k, [np.array(r, dtype=object) for r in rows], chi)

    def __eq__(self, other):
        if not isinstance(other, StolinPair):
            return NotImplemented
        if (self.n, self.k, self.dim) != (other.n, other.k, other.dim):
            return False
        a, b = self.canonical(), other.canonical()
        return (all(list(x) == list(y) for x, y in zip(a.S_basis, b.S_basis))
                and all(x == y for ra, rb in zip(a.chi, b.chi) for x, y in zip(ra, rb)))

    __hash__ = None


@dataclass
class PairReport:
    independent: bool
    closed: bool
    complements_P_k: bool
    skew: bool
    cocycle: bool
    nondegenerate: bool
    first_failure: dict | None = None

    @property
    def ok(self) -> bool:
        return (self.independent and self.closed and self.complements_P_k
                and self.skew and self.cocycle and self.nondegenerate)

    def __bool__(self):
        return self.ok

    def as_dict(self):
        return {"ok": self.ok, "independent": self.independent, "closed": self.closed,
                "complements_P_k": self.complements_P_k, "skew": self.skew, "cocycle": self.cocycle,
                "nondegenerate": self.nondegenerate, "first_failure": self.first_failure}


def _intersection_with_P(p: StolinPair):
    """Coordinate vectors (over the S-basis) of a basis of S cap P_k."""
    n, k = p.n, p.k
    rows = [[b[i * n + j] for b in p.S_basis]
            for i in range(n) for j in range(n) if _block_bound(n, k, i, j) < 0]
    if not rows:
        return [[Fraction(int(a == b)) for a in range(p.dim)] for b in range(p.dim)]
    return linalg.nullspace(rows, p.dim)


def check_stolin_pair(p: StolinPair) -> PairReport:
    _check_type(p.n, p.k, p.n - 1)
    M = matrix_algebra(p.n)
    mul = M.algebra.multiply
    m = p.dim
    first = None

    def fail(check, **info):
        nonlocal first
        if first is None:
            first = {"check": check, **info}

    vecs = [list(b) for b in p.S_basis]
    independent = linalg.rank(vecs) == m if m else True
    if not independent:
        fail("independent")

    closed = True
    products = {}
    for a in range(m):
        for b in range(m):
            c = p.coordinates(mul(p.S_basis[a], p.S_basis[b])) if independent else None
            if c is None:
                closed = False
                fail("closed", pair=[a, b])
                break
            products[(a, b)] = c
        if not closed:
            break

    P = [list(v) for v in parabolic_P_k(p.n, p.k)]
    complements = linalg.rank(vecs + P) == p.n * p.n
    if not complements:
        fail("complements_P_k", rank=linalg.rank(vecs + P))

    skew = all(p.chi[a][b] == -p.chi[b][a] for a in range(m) for b in range(m))
    if not skew:
        a, b = next((a, b) for a in range(m) for b in range(m) if p.chi[a][b] != -p.chi[b][a])
        fail("skew", pair=[a, b])

    cocycle = closed
    if closed:
        basis = [[Fraction(int(a == b)) for a in range(m)] for b in range(m)]
        for a1, a2, a3 in itertools.product(range(m), repeat=3):
            val = (p.form(products[(a1, a2)], basis[a3]) + p.form(products[(a2, a3)], basis[a1])
                   + p.form(products[(a3, a1)], basis[a2]))
            if val != 0:
                cocycle = False
                fail("cocycle", triple=[a1, a2, a3], value=format_scalar(val))
                break
    elif first is not None and first["check"] != "closed":
        fail("cocycle", reason="S is not closed")

    nondegenerate = False
    if independent:
        C = _intersection_with_P(p)
        restricted = [[p.form(u, v) for v in C] for u in C]
        nondegenerate = linalg.rank(restricted) == len(C) if C else True
        if not nondegenerate:
            fail("nondegenerate", dim_intersection=len(C), rank=linalg.rank(restricted))
    return PairReport(independent, closed, complements, skew, cocycle, nondegenerate, first)


# ---------------------------------------------------------------- D_eps


class EpsilonDouble:
    """A + eps A with eps^2 = 0 and beta_eps(a1 + eps a2, b1 + eps b2) = beta(a1, b2) + beta(a2, b1).

    Elements are pairs (a0, a1) of coordinate vectors.
    """

    def __init__(self, n: int):
        self.n = n
        self.M = matrix_algebra(n)
        self.d = n * n

    def multiply(self, x, y):
        mul = self.M.algebra.multiply
        return mul(x[0], y[0]), mul(x[0], y[1]) + mul(x[1], y[0])

    def beta(self, x, y):
        return self.M.beta(x[0], y[1]) + self.M.beta(x[1], y[0])

    def flat(self, x):
        return list(x[0]) + list(x[1])

    def split(self, v):
        v = np.asarray(v, dtype=object)
        return v[: self.d].copy(), v[self.d:].copy()

    def basis(self):
        d = self.d
        out = []
        for part in (0, 1):
            for i in range(d):
                e = zeros(2 * d)
                e[part * d + i] = 1
                out.append(self.split(e))
        return out

    def metric_checks(self) -> dict:
        B = self.basis()
        gram = [[self.beta(x, y) for y in B] for x in B]
        symmetric = all(gram[i][j] == gram[j][i] for i in range(len(B)) for j in range(len(B)))
        nondegenerate = linalg.rank(gram) == len(B)
        associative = all(self.beta(self.multiply(x, y), z) == self.beta(x, self.multiply(y, z))
                          for x in B for y in B for z in B)
        return {"symmetric": symmetric, "nondegenerate": nondegenerate, "associative": associative}

    def order_image(self, k: int):
        """Span of the image of A[[z]] cap N_k, computed from the spanning family of N_k."""
        fam = order_N_k(self.n, k, (0, 1)).spanning_family()
        vecs = [self.flat(reduce_mod_order(x, self.n, k)) for x in fam]
        return linalg.span_basis(vecs)

    def expected_order_image(self, k: int):
        d = self.d
        vecs = [list(v) + [0] * d for v in parabolic_P_k(self.n, k)]
        vecs += [[0] * d + list(v) for v in upper_right_block(self.n, k)]
        return linalg.span_basis(vecs)


def _dual_images(p: StolinPair):
    """The elements sum_q s_q b_q^* for s in the S-basis: a complement to S^perp."""
    M = matrix_algebra(p.n)
    Ginv = M.gram_inverse
    return [Ginv.dot(s) for s in p.S_basis]


def orthogonal_of_S(p: StolinPair):
    M = matrix_algebra(p.n)
    d = p.n * p.n
    if not p.S_basis:
        return [_unit_vec(d, i) for i in range(d)]
    rows = [list(M.gram.dot(s)) for s in p.S_basis]
    return [np.array(v, dtype=object) for v in linalg.nullspace(rows, d)]


def _unit_vec(d, i):
    v = zeros(d)
    v[i] = 1
    return v


def representative_f(p: StolinPair):
    """f~(a_j) in the span of the dual images with beta(f~(a_j), a_l) = chi(a_j, a_l)."""
    M = matrix_algebra(p.n)
    duals = _dual_images(p)
    m = p.dim
    if not m:
        return []
    E = [[M.beta(u, s) for s in p.S_basis] for u in duals]
    Einv = linalg.inverse(E)
    out = []
    for j in range(m):
        c = [sum((p.chi[j][l] * Einv[l][q] for l in range(m)), 0) for q in range(m)]
        out.append(sum((c[q] * duals[q] for q in range(m)), zeros(p.n * p.n)))
    return out


@dataclass
class LagrangianSubspace:
    """V = {a + eps f~(a)} + eps S^perp inside D_eps, with the checks run on it."""

    pair: StolinPair
    basis: list
    f_images: list
    isotropic: bool
    subalgebra: bool
    complementary: bool
    D: EpsilonDouble = field(repr=False, default=None)

    @property
    def ok(self):
        return self.isotropic and self.subalgebra and self.complementary

    def decompose(self, x):
        """(q0, q1) in P_k + eps P_k^perp and v in V with x = (q0 + eps q1) + v."""
        D, n, k = self.D, self.pair.n, self.pair.k
        P = [(v, zeros(D.d)) for v in parabolic_P_k(n, k)] + [(zeros(D.d), v) for v in upper_right_block(n, k)]
        cols = [D.flat(c) for c in P] + [D.flat(c) for c in self.basis]
        sol = linalg.solve(linalg.transpose(cols), D.flat(x))
        q = [zeros(D.d), zeros(D.d)]
        for c, (a0, a1) in zip(sol[: len(P)], P):
            q[0] = q[0] + c * a0
            q[1] = q[1] + c * a1
        return tuple(q)


def pair_to_lagrangian(p: StolinPair) -> LagrangianSubspace:
    report = check_stolin_pair(p)
    if not report:
        raise InvalidPair(f"not an associative Stolin pair: {report.first_failure}")
    D = EpsilonDouble(p.n)
    f = representative_f(p)
    basis = [(a.copy(), fa) for a, fa in zip(p.S_basis, f)]
    basis += [(zeros(D.d), s) for s in orthogonal_of_S(p)]
    flat = [D.flat(v) for v in basis]
    isotropic = all(D.beta(x, y) == 0 for x in basis for y in basis)
    subalgebra = all(linalg.in_span(flat, D.flat(D.multiply(x, y))) for x in basis for y in basis)
    P = D.expected_order_image(p.k)
    complementary = len(flat) == D.d and linalg.rank(flat + P) == 2 * D.d
    V = LagrangianSubspace(p, basis, f, isotropic, subalgebra, complementary, D)
    if not V.ok:
        raise InvalidPair(f"constructed subspace fails: isotropic={isotropic}, "
                          f"subalgebra={subalgebra}, complementary={complementary}")
    return V


# ---------------------------------------------------------------- solutions


def _tail_series(p0, p1, d):
    terms = {}
    if any(c != 0 for c in p0):
        terms[(0,)] = p0
    if any(c != 0 for c in p1):
        terms[(1,)] = p1
    return Series(terms, 1, INF, (d,))


def _lift(q0, q1, n, k):
    """The polynomial p = p0 + z p1 in A[[z]] cap N_k with class q0 + eps q1."""
    d = n * n
    p0, p1 = zeros(d), zeros(d)
    for i in range(n):
        for j in range(n):
            s = _block_bound(n, k, i, j)
            idx = i * n + j
            if s == 0:
                p0[idx] = q0[idx]
            elif s == 1:
                p0[idx] = q1[idx]
                p1[idx] = q0[idx]
    return p0, p1


def _verified(r: StandardFormSeries, order: int):
    report = verify(r, order, "cybe")
    if report["first_nonzero"] is not None:
        raise InvalidPair(f"constructed series fails the CYBE: {report['first_nonzero']}")
    return r


def rational_from_pair(p: StolinPair, order: int = 6) -> StandardFormSeries:
    """r = gamma/(x - y) + t for the Lagrangian subalgebra W = preimage of V in N_k.

    The tail is t_{k,i} = -p with b_i^* z^(-1-k) - p in W and p in A[[z]];
    it vanishes for k >= 2, so t has degree at most one in each variable.
    """
    if order < 2:
        raise WindowTooSmall(f"order {order} does not reach the tail degree 2")
    V = pair_to_lagrangian(p)
    n, k = p.n, p.k
    M = matrix_algebra(n)
    d = M.dim
    tails = {}
    for gen in (0, 1):
        for i in range(d):
            dual = M.gram_inverse[:, i].copy()
            target = Laurent({-1 - gen: dual}, -1 - gen, INF, (d,))
            c = reduce_mod_order(target, n, k)
            q0, q1 = V.decompose(c)
            p0, p1 = _lift(q0, q1, n, k)
            tails[(gen, i)] = _tail_series(-p0, -p1, d)
    return _verified(subspace_to_series(WBasis(M, 0, tails)), order)


def quasi_rational_from_pair(p: StolinPair, order: int = 6) -> StandardFormSeries:
    """y^2 gamma/(x - y) + t for W = N_k x W_-, W_- the copy of V in A[z]/z^2.

    For generator index k < 2 the right component -[b_i^* z^(1-k)] is moved
    into W_- by a diagonal polynomial q0 + z q1 in A[[z]] cap N_k; its class
    mod z^2 is q0 + [z] q1 with q0 in P_k and q1 in P_k^perp.
    """
    if order < 2:
        raise WindowTooSmall(f"order {order} does not reach the tail degree 2")
    V = pair_to_lagrangian(p)
    n, k = p.n, p.k
    M = matrix_algebra(n)
    d = M.dim
    tails = {}
    for gen in (0, 1):
        for i in range(d):
            dual = M.gram_inverse[:, i].copy()
            right = [zeros(d), zeros(d)]
            right[1 - gen] = -dual
            q0, q1 = V.decompose((-right[0], -right[1]))
            tails[(gen, i)] = _tail_series(q0, q1, d)
    return _verified(subspace_to_series(WBasis(M, 2, tails)), order)


def _pair_from_subspace(V_vectors, n, k) -> StolinPair:
    D = EpsilonDouble(n)
    d = D.d
    rows = linalg.span_basis([list(v) for v in V_vectors])
    if len(rows) != d:
        raise InvalidPair(f"image in D_eps has dimension {len(rows)}, expected {d}")
    heads = linalg.span_basis([r[:d] for r in rows])
    S = [np.array(h, dtype=object) for h in heads]
    M = matrix_algebra(n)
    lifts = []
    for s in S:
        sol = linalg.solve_any(linalg.transpose([r[:d] for r in rows]), list(s))
        tail = sum((c * np.array(r[d:], dtype=object) for c, r in zip(sol, rows)), zeros(d))
        lifts.append(tail)
    chi = [[M.beta(fa, b) for b in S] for fa in lifts]
    pair = StolinPair(n, k, S, chi)
    report = check_stolin_pair(pair)
    if not report:
        raise InvalidPair(f"recovered pair is invalid: {report.first_failure}")
    return pair


def pair_from_solution(r: StandardFormSeries, k: int) -> StolinPair:
    """Inverse of the two builders for series of type (0, 1) or (2, 1) over a matrix algebra."""
    d = r.M.dim
    n = round(d ** 0.5)
    if n * n != d or r.n not in (0, 2):
        raise InvalidPair("only rational and quasi-rational series over M_n are supported")
    _check_type(n, k, n - 1)
    W = series_to_subspace(r)
    order = order_N_k(n, k)
    K = max(2, W.tail_bound)
    vectors = []
    D = EpsilonDouble(n)
    for gen in range(K):
        for i in range(d):
            g = W.generator(gen, i)
            bad = order.violation(g.left)
            if bad is not None:
                e, a, b = bad
                raise NotInOrder(f"generator ({gen}, {i}) has e{a + 1}{b + 1} z^{e} outside N_{k}")
            if r.n == 0:
                vectors.append(D.flat(reduce_mod_order(g.left, n, k)))
            else:
                vectors.append(D.flat((g.right[0], g.right[1])))
    return _pair_from_subspace(vectors, n, k)


# ---------------------------------------------------------------- enumeration


def _connes_cocycles(n, S):
    """Basis of the skew forms on span(S) satisfying the Connes identity."""
    p = StolinPair(n, 0, S, [[0] * len(S) for _ in S])
    m = len(S)
    mul = matrix_algebra(n).algebra.multiply
    pairs = [(a, b) for a in range(m) for b in range(a + 1, m)]
    index = {ab: t for t, ab in enumerate(pairs)}

    def coeff_row(u, c):
        row = [0] * len(pairs)
        for a in range(m):
            for b in range(m):
                if a < b:
                    row[index[(a, b)]] += u[a] * (1 if b == c else 0)
                elif a > b:
                    row[index[(b, a)]] -= u[a] * (1 if b == c else 0)
        return row

    eqs = []
    for a1, a2, a3 in itertools.product(range(m), repeat=3):
        row = [0] * len(pairs)
        for x, y, z in ((a1, a2, a3), (a2, a3, a1), (a3, a1, a2)):
            u = p.coordinates(mul(S[x], S[y]))
            row = [r + c for r, c in zip(row, coeff_row(u, z))]
        if any(row):
            eqs.append(row)
    sols = linalg.nullspace(eqs, len(pairs)) if eqs else [
        [Fraction(int(i == j)) for i in range(len(pairs))] for j in range(len(pairs))]
    forms = []
    for s in sols:
        chi = [[0] * m for _ in range(m)]
        for (a, b), t in index.items():
            chi[a][b], chi[b][a] = s[t], -s[t]
        forms.append(chi)
    return forms


def enumerate_unit_pairs(n: int, k: int, coefficients=(0, 1, -1, 2)):
    """Stolin pairs whose S is spanned by matrix units, n <= 2.

    For each closed set of units with S + P_k = A, the first valid chi found
    among small integer combinations of a Connes-cocycle basis is kept.
    """
    if n > 2:
        raise IndexOutOfRange("the unit-subset enumerator is limited to n <= 2")
    _check_type(n, k, n - 1)
    units = [(i, j) for i in range(n) for j in range(n)]
    found = []
    for size in range(len(units) + 1):
        for subset in itertools.combinations(units, size):
            S = [_unit(n, i, j) for i, j in subset]
            trial = StolinPair(n, k, S, [[0] * size for _ in range(size)])
            report = check_stolin_pair(trial)
            if not (report.closed and report.complements_P_k):
                continue
            forms = _connes_cocycles(n, S)
            for combo in itertools.product(coefficients, repeat=len(forms)):
                chi = [[sum((c * f[a][b] for c, f in zip(combo, forms)), 0) for b in range(size)]
                       for a in range(size)]
                pair = StolinPair(n, k, S, chi)
                if check_stolin_pair(pair):
                    found.append(pair)
                    break
    return found


# ---------------------------------------------------------------- JSON


def pair_to_json(p: StolinPair) -> dict:
    n = p.n
    return {
        "n": n,
        "k": p.k,
        "S_basis": [[[format_scalar(b[i * n + j]) for j in range(n)] for i in range(n)] for b in p.S_basis],
        "chi": [[format_scalar(c) for c in row] for row in p.chi],
    }


def pair_from_json(doc) -> StolinPair:
    try:
        n, k = int(doc["n"]), int(doc["k"])
        S = [np.array([[parse_scalar(c) for c in row] for row in mat], dtype=object) for mat in doc["S_basis"]]
        chi = [[parse_scalar(c) for c in row] for row in doc["chi"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed pair document: {exc}") from exc
    return StolinPair(n, k, S, chi)
