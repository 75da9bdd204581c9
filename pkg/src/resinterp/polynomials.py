"""Sparse multivariate polynomials and box-truncated Taylor jets.

Exponent vectors are plain tuples of non-negative ints.  The componentwise
partial order between them (`index_leq`) defines the "boxes" of indices that
truncated series live on.  Polynomials are canonical term maps: no zero
coefficient is ever stored, so exact-mode equality is equality of dicts.
"""

from __future__ import annotations

import itertools
import math

from .errors import ArityError, BackendMismatch, CenterError, SingularSeries
from .scalars import EXACT, FLOAT, FloatScalar, invert
from .scalars import one as scalar_one
from .scalars import zero as scalar_zero


# ----------------------------------------------------------------- multi-indices

def index_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def index_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def index_leq(a, b):
    """Componentwise a <= b."""
    return all(x <= y for x, y in zip(a, b))


def unit_index(n, k):
    return tuple(1 if i == k else 0 for i in range(n))


def multi_factorial(idx):
    """Product of componentwise factorials, as a plain int."""
    out = 1
    for e in idx:
        out *= math.factorial(e)
    return out


def box_indices(box):
    """All multi-indices 0 <= idx <= box, in lexicographic order."""
    return itertools.product(*(range(b + 1) for b in box))


def graded_lex_key(idx):
    return (sum(idx), idx)


def graded_box_indices(box):
    """Box indices sorted by total order, then lexicographically."""
    return sorted(box_indices(box), key=graded_lex_key)


# ------------------------------------------------------------------- polynomials

def _accumulate(terms, idx, coeff):
    prev = terms.get(idx)
    if prev is None:
        if not coeff.is_zero():
            terms[idx] = coeff
        return
    total = prev + coeff
    if total.is_zero():
        del terms[idx]
    else:
        terms[idx] = total


class MPoly:
    """Sparse polynomial in `nvars` variables over one scalar backend."""

    __slots__ = ("nvars", "backend", "terms")

    def __init__(self, nvars, backend, terms=None):
        # takes ownership of `terms`; callers must pass a canonical dict
        self.nvars = nvars
        self.backend = backend
        self.terms = terms if terms is not None else {}

    # -- constructors

    @classmethod
    def zero(cls, nvars, backend):
        return cls(nvars, backend, {})

    @classmethod
    def constant(cls, nvars, value):
        terms = {} if value.is_zero() else {(0,) * nvars: value}
        return cls(nvars, value.backend, terms)

    @classmethod
    def variable(cls, nvars, k, backend):
        if not 0 <= k < nvars:
            raise ArityError(f"variable index {k} out of range for {nvars} variables")
        return cls(nvars, backend, {unit_index(nvars, k): scalar_one(backend)})

    @classmethod
    def monomial(cls, nvars, exponents, coeff):
        exponents = tuple(exponents)
        if len(exponents) != nvars:
            raise ArityError("exponent tuple length does not match variable count")
        terms = {} if coeff.is_zero() else {exponents: coeff}
        return cls(nvars, coeff.backend, terms)

    @classmethod
    def from_terms(cls, nvars, backend, items):
        """Build from (exponents, Scalar) pairs, validating and canonicalizing."""
        terms = {}
        for exponents, coeff in items:
            exponents = tuple(exponents)
            if len(exponents) != nvars:
                raise ArityError("exponent tuple length does not match variable count")
            if any(e < 0 for e in exponents):
                raise ArityError("negative exponent")
            if coeff.backend != backend:
                raise BackendMismatch("coefficient backend does not match polynomial")
            _accumulate(terms, exponents, coeff)
        return cls(nvars, backend, terms)

    # -- inspection

    def is_zero(self):
        return not self.terms

    def coeff(self, idx):
        return self.terms.get(tuple(idx), scalar_zero(self.backend))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: graded_lex_key(kv[0]))

    def degree_box(self):
        """Componentwise maximum exponent; all zeros for the zero polynomial."""
        box = [0] * self.nvars
        for idx in self.terms:
            for i, e in enumerate(idx):
                if e > box[i]:
                    box[i] = e
        return tuple(box)

    def total_degree(self):
        return max((sum(idx) for idx in self.terms), default=0)

    def max_coeff_magnitude(self):
        return max((c.magnitude() for c in self.terms.values()), default=0.0)

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            return NotImplemented
        return (self.nvars == other.nvars and self.backend == other.backend
                and self.terms == other.terms)

    def __repr__(self):
        return f"MPoly(nvars={self.nvars}, backend={self.backend!r}, terms={len(self.terms)})"

    def _check_compat(self, other):
        if self.nvars != other.nvars:
            raise ArityError(f"variable counts differ: {self.nvars} vs {other.nvars}")
        if self.backend != other.backend:
            raise BackendMismatch("cannot combine polynomials over different backends")

    # -- ring arithmetic

    def __add__(self, other):
        self._check_compat(other)
        out = dict(self.terms)
        for idx, c in other.terms.items():
            _accumulate(out, idx, c)
        return MPoly(self.nvars, self.backend, out)

    def __sub__(self, other):
        self._check_compat(other)
        out = dict(self.terms)
        for idx, c in other.terms.items():
            _accumulate(out, idx, -c)
        return MPoly(self.nvars, self.backend, out)

    def __neg__(self):
        return MPoly(self.nvars, self.backend,
                     {idx: -c for idx, c in self.terms.items()})

    def __mul__(self, other):
        self._check_compat(other)
        out = {}
        for ia, ca in self.terms.items():
            for ib, cb in other.terms.items():
                _accumulate(out, index_add(ia, ib), ca * cb)
        return MPoly(self.nvars, self.backend, out)

    def scale(self, s):
        if s.backend != self.backend:
            raise BackendMismatch("scalar backend does not match polynomial")
        if s.is_zero():
            return MPoly.zero(self.nvars, self.backend)
        out = {}
        for idx, c in self.terms.items():
            _accumulate(out, idx, c * s)
        return MPoly(self.nvars, self.backend, out)

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers take non-negative integers")
        out = MPoly.constant(self.nvars, scalar_one(self.backend))
        base = self
        while k:
            if k & 1:
                out = out * base
            if k > 1:
                base = base * base
            k >>= 1
        return out

    # -- calculus

    def partial_derivative(self, order):
        """Iterated partial derivative by the multi-index `order`."""
        order = tuple(order)
        if len(order) != self.nvars:
            raise ArityError("derivative order length does not match variable count")
        out = {}
        for idx, c in self.terms.items():
            if not index_leq(order, idx):
                continue
            factor = 1
            for e, o in zip(idx, order):
                factor *= math.perm(e, o)
            _accumulate(out, index_sub(idx, order), c * factor)
        return MPoly(self.nvars, self.backend, out)

    def evaluate(self, point):
        """Evaluate at a point, Horner-style variable by variable."""
        point = tuple(point)
        if len(point) != self.nvars:
            raise ArityError("point length does not match variable count")
        for v in point:
            if v.backend != self.backend:
                raise BackendMismatch("point backend does not match polynomial")
        return _eval_terms(self.terms, self.nvars, point, self.backend)

    def taylor_shift(self, shift):
        """Substitute z -> z + shift; result(u) = self(u + shift)."""
        shift = tuple(shift)
        if len(shift) != self.nvars:
            raise ArityError("shift length does not match variable count")
        for s in shift:
            if s.backend != self.backend:
                raise BackendMismatch("shift backend does not match polynomial")
        cur = self.terms
        for i, s in enumerate(shift):
            if s.is_zero() or not cur:
                continue
            max_e = max(idx[i] for idx in cur)
            powers = [scalar_one(self.backend)]
            for _ in range(max_e):
                powers.append(powers[-1] * s)
            nxt = {}
            for idx, c in cur.items():
                e = idx[i]
                if e == 0:
                    _accumulate(nxt, idx, c)
                    continue
                base = list(idx)
                for j in range(e + 1):
                    base[i] = j
                    _accumulate(nxt, tuple(base), c * math.comb(e, j) * powers[e - j])
            cur = nxt
        if cur is self.terms:
            cur = dict(cur)
        return MPoly(self.nvars, self.backend, cur)

    def substitute(self, k, value):
        """Replace variable k by a scalar; the result no longer uses it."""
        if not 0 <= k < self.nvars:
            raise ArityError(f"variable index {k} out of range")
        if value.backend != self.backend:
            raise BackendMismatch("substituted value backend does not match")
        powers = {0: scalar_one(self.backend)}
        out = {}
        for idx, c in self.terms.items():
            e = idx[k]
            if e not in powers:
                p = powers[max(powers)]
                for j in range(max(powers) + 1, e + 1):
                    p = p * value
                    powers[j] = p
            base = list(idx)
            base[k] = 0
            _accumulate(out, tuple(base), c * powers[e])
        return MPoly(self.nvars, self.backend, out)

    def synthetic_divide(self, k, root):
        """Divide by (z_k - root): returns (quotient, remainder).

        The remainder is a polynomial free of variable k; it equals the
        substitution of `root` into variable k of self.
        """
        if not 0 <= k < self.nvars:
            raise ArityError(f"variable index {k} out of range")
        if root.backend != self.backend:
            raise BackendMismatch("root backend does not match polynomial")
        by_exp = {}
        for idx, c in self.terms.items():
            base = list(idx)
            e = base[k]
            base[k] = 0
            by_exp.setdefault(e, {})[tuple(base)] = c
        if not by_exp:
            return MPoly.zero(self.nvars, self.backend), MPoly.zero(self.nvars, self.backend)
        top = max(by_exp)
        quotient = {}
        carry = {}
        for e in range(top - 1, -1, -1):
            cur = {}
            for idx, c in by_exp.get(e + 1, {}).items():
                _accumulate(cur, idx, c)
            for idx, c in carry.items():
                _accumulate(cur, idx, c * root)
            for idx, c in cur.items():
                lifted = list(idx)
                lifted[k] = e
                quotient[tuple(lifted)] = c
            carry = cur
        remainder = {}
        for idx, c in by_exp.get(0, {}).items():
            _accumulate(remainder, idx, c)
        for idx, c in carry.items():
            _accumulate(remainder, idx, c * root)
        return (MPoly(self.nvars, self.backend, quotient),
                MPoly(self.nvars, self.backend, remainder))


def _eval_terms(terms, nvars, point, backend):
    if not terms:
        return scalar_zero(backend)
    if nvars == 0:
        return terms.get((), scalar_zero(backend))
    groups = {}
    for idx, c in terms.items():
        groups.setdefault(idx[-1], {})[idx[:-1]] = c
    x = point[-1]
    exps = sorted(groups, reverse=True)
    acc = _eval_terms(groups[exps[0]], nvars - 1, point[:-1], backend)
    for e_prev, e in zip(exps, exps[1:]):
        acc = acc * x ** (e_prev - e) + _eval_terms(groups[e], nvars - 1, point[:-1], backend)
    if exps[-1]:
        acc = acc * x ** exps[-1]
    return acc


def shifted_monomial(nvars, center, exponents, backend):
    """The expanded polynomial prod_i (z_i - center_i)^{exponents_i}."""
    exponents = tuple(exponents)
    center = tuple(center)
    if len(exponents) != nvars or len(center) != nvars:
        raise ArityError("center/exponents length does not match variable count")
    mono = MPoly.monomial(nvars, exponents, scalar_one(backend))
    if all(c.is_zero() for c in center):
        return mono
    return mono.taylor_shift(tuple(-c for c in center))


# -------------------------------------------------------------- truncated series

class TruncSeries:
    """Taylor jet on the box of multi-indices <= `box`, centered at `center`.

    Stores only the coefficients inside the box and promises nothing outside.
    """

    __slots__ = ("nvars", "box", "center", "backend", "coeffs")

    def __init__(self, nvars, box, center, backend, coeffs=None):
        self.nvars = nvars
        self.box = tuple(box)
        self.center = tuple(center)
        self.backend = backend
        self.coeffs = coeffs if coeffs is not None else {}
        if len(self.box) != nvars or len(self.center) != nvars:
            raise ArityError("box/center length does not match variable count")

    @classmethod
    def from_poly(cls, poly, center, box):
        """Taylor jet of a polynomial: recenter, then keep indices <= box."""
        center = tuple(center)
        box = tuple(box)
        shifted = poly.taylor_shift(center)
        coeffs = {idx: c for idx, c in shifted.terms.items() if index_leq(idx, box)}
        return cls(poly.nvars, box, center, poly.backend, coeffs)

    def coeff(self, idx):
        return self.coeffs.get(tuple(idx), scalar_zero(self.backend))

    def _check_compat(self, other):
        if self.nvars != other.nvars:
            raise ArityError("variable counts differ")
        if self.backend != other.backend:
            raise BackendMismatch("cannot combine series over different backends")
        if any(a != b for a, b in zip(self.center, other.center)):
            raise CenterError("series expansion centers differ")

    def multiply(self, other, box=None):
        """Truncated Cauchy product; `other` may be a polynomial, which is
        jetted at this series' center first."""
        if isinstance(other, MPoly):
            other = TruncSeries.from_poly(other, self.center,
                                          box if box is not None else self.box)
        self._check_compat(other)
        if box is None:
            box = tuple(min(a, b) for a, b in zip(self.box, other.box))
        out = {}
        for ia, ca in self.coeffs.items():
            for ib, cb in other.coeffs.items():
                idx = index_add(ia, ib)
                if index_leq(idx, box):
                    _accumulate(out, idx, ca * cb)
        return TruncSeries(self.nvars, box, self.center, self.backend, out)

    def inverse(self):
        """Multiplicative inverse on the box, by graded recursion.

        With a_0 the constant coefficient, b_0 = 1/a_0 and
        b_alpha = -(1/a_0) * sum_{0 < beta <= alpha} a_beta * b_{alpha-beta};
        the recursion is well-founded because |alpha - beta| < |alpha|.
        """
        origin = (0,) * self.nvars
        a0 = self.coeffs.get(origin)
        if a0 is None or a0.is_zero():
            raise SingularSeries("series has zero constant term")
        inv0 = invert(a0)
        out = {origin: inv0}
        for alpha in graded_box_indices(self.box):
            if alpha == origin:
                continue
            total = scalar_zero(self.backend)
            for beta, ab in self.coeffs.items():
                if beta == origin or not index_leq(beta, alpha):
                    continue
                b = out.get(index_sub(alpha, beta))
                if b is not None:
                    total = total + ab * b
            if not total.is_zero():
                out[alpha] = -(inv0 * total)
        return TruncSeries(self.nvars, self.box, self.center, self.backend, out)

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return (self.nvars == other.nvars and self.box == other.box
                and self.backend == other.backend
                and all(a == b for a, b in zip(self.center, other.center))
                and self.coeffs == other.coeffs)

    def __repr__(self):
        return f"TruncSeries(nvars={self.nvars}, box={self.box}, coeffs={len(self.coeffs)})"


# ----------------------------------------------------------------- determinants

def scalar_matrix_det(rows):
    """Determinant of a square matrix of scalars.

    Exact backend: fraction-free (Bareiss) elimination, exact divisions only.
    Float backend: Gaussian elimination with partial pivoting.
    """
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise ArityError("determinant needs a non-empty square matrix")
    backend = rows[0][0].backend
    for r in rows:
        for e in r:
            if e.backend != backend:
                raise BackendMismatch("mixed backends in matrix")
    if backend == EXACT:
        return _det_bareiss(rows)
    return _det_partial_pivot(rows)


def _det_bareiss(rows):
    n = len(rows)
    m = [list(r) for r in rows]
    sign = 1
    prev = scalar_one(EXACT)
    for k in range(n - 1):
        pivot_row = None
        for r in range(k, n):
            if not m[r][k].is_zero():
                pivot_row = r
                break
        if pivot_row is None:
            return scalar_zero(EXACT)
        if pivot_row != k:
            m[k], m[pivot_row] = m[pivot_row], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
            m[i][k] = scalar_zero(EXACT)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return -det if sign < 0 else det


def _det_partial_pivot(rows):
    n = len(rows)
    m = [[e.value for e in r] for r in rows]
    det = 1.0 + 0.0j
    for k in range(n):
        pivot_row = max(range(k, n), key=lambda r: abs(m[r][k]))
        if m[pivot_row][k] == 0.0:
            return scalar_zero(FLOAT)
        if pivot_row != k:
            m[k], m[pivot_row] = m[pivot_row], m[k]
            det = -det
        det *= m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            for j in range(k, n):
                m[i][j] -= f * m[k][j]
    return FloatScalar(det)


def poly_matrix_det(rows):
    """Determinant of a square matrix of polynomials by Laplace expansion
    with memoization over column subsets (n is small here)."""
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise ArityError("determinant needs a non-empty square matrix")
    nvars = rows[0][0].nvars
    backend = rows[0][0].backend
    memo = {}

    def minor(mask):
        if mask == 0:
            return MPoly.constant(nvars, scalar_one(backend))
        cached = memo.get(mask)
        if cached is not None:
            return cached
        r = n - bin(mask).count("1")
        acc = MPoly.zero(nvars, backend)
        sign = 1
        for c in range(n):
            bit = 1 << c
            if not mask & bit:
                continue
            entry = rows[r][c]
            if not entry.is_zero():
                term = entry * minor(mask & ~bit)
                acc = acc + term if sign > 0 else acc - term
            sign = -sign
        memo[mask] = acc
        return acc

    return minor((1 << n) - 1)


def jacobian_det(system, point):
    """Determinant of the first-partials matrix of a square system at a point."""
    n = len(system)
    point = tuple(point)
    if n == 0 or len(point) != n or any(p.nvars != n for p in system):
        raise ArityError("jacobian needs a square system and matching point")
    rows = []
    for p in system:
        rows.append([p.partial_derivative(unit_index(n, k)).evaluate(point)
                     for k in range(n)])
    return scalar_matrix_det(rows)
