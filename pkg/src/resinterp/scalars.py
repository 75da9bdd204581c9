"""Coefficient field backends.

Two interchangeable backends implement the scalar arithmetic used everywhere
else: exact Gaussian rationals (a + b*i with Fraction components) and complex
double-precision floats.  A value never changes backend implicitly; mixing the
two in one expression raises BackendMismatch.  Use `lower_to_float` for the
one explicit, lossy conversion.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import BackendMismatch, DivisionByZero, ParseError

EXACT = "exact"
FLOAT = "float"


class Scalar:
    """Common base of ExactScalar and FloatScalar."""

    __slots__ = ()
    backend = None

    def is_zero(self):
        raise NotImplementedError

    def magnitude(self):
        raise NotImplementedError


class ExactScalar(Scalar):
    """Gaussian rational: re + im*i with exact rational components."""

    __slots__ = ("re", "im")
    backend = EXACT

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def _coerce(self, other):
        if isinstance(other, ExactScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return ExactScalar(other)
        if isinstance(other, Scalar):
            raise BackendMismatch("cannot mix exact and float scalars")
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExactScalar(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExactScalar(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return ExactScalar(-self.re, -self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExactScalar(self.re * o.re - self.im * o.im,
                           self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * invert(o)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * invert(self)

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("scalar powers take non-negative integers")
        out = ExactScalar(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def is_zero(self):
        return self.re == 0 and self.im == 0

    def magnitude(self):
        return math.sqrt(float(self.re * self.re + self.im * self.im))

    def __repr__(self):
        return f"ExactScalar({render_scalar(self)!r})"


class FloatScalar(Scalar):
    """Complex double-precision scalar."""

    __slots__ = ("value",)
    backend = FLOAT

    def __init__(self, value=0.0):
        self.value = complex(value)

    def _coerce(self, other):
        if isinstance(other, FloatScalar):
            return other
        if isinstance(other, (int, float, complex)):
            return FloatScalar(other)
        if isinstance(other, Scalar):
            raise BackendMismatch("cannot mix exact and float scalars")
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FloatScalar(self.value + o.value)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FloatScalar(self.value - o.value)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return FloatScalar(-self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FloatScalar(self.value * o.value)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * invert(o)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * invert(self)

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("scalar powers take non-negative integers")
        return FloatScalar(self.value ** k)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.value == o.value

    def __hash__(self):
        return hash(self.value)

    def is_zero(self):
        return self.value == 0.0

    def magnitude(self):
        return abs(self.value)

    def __repr__(self):
        return f"FloatScalar({self.value!r})"


def zero(backend):
    return ExactScalar(0) if backend == EXACT else FloatScalar(0.0)


def one(backend):
    return ExactScalar(1) if backend == EXACT else FloatScalar(1.0)


def from_int(k, backend):
    return ExactScalar(k) if backend == EXACT else FloatScalar(float(k))


def invert(a):
    """Multiplicative inverse; DivisionByZero when a vanishes."""
    if a.backend == EXACT:
        norm = a.re * a.re + a.im * a.im
        if norm == 0:
            raise DivisionByZero("cannot invert exact zero")
        return ExactScalar(a.re / norm, -a.im / norm)
    if a.value == 0.0:
        raise DivisionByZero("cannot invert float zero")
    return FloatScalar(1.0 / a.value)


def lower_to_float(a):
    """Explicit (lossy) conversion of an exact scalar to the float backend."""
    if a.backend == FLOAT:
        return a
    return FloatScalar(complex(float(a.re), float(a.im)))


_RATIONAL = r"[+-]?\d+(?:\s*/\s*\d+)?"
_EXACT_RE = re.compile(
    rf"^\s*(?P<re>{_RATIONAL})\s*"
    rf"(?:(?P<sign>[+-])\s*(?P<im>[+-]?\d+(?:\s*/\s*\d+)?)\s*[iI])?\s*$"
)


def parse_scalar(text, backend):
    """Parse scalar text in the numeric grammar of the given backend.

    Exact grammar: ``rational [("+"|"-") rational "i"]`` with
    ``rational = [sign] integer ["/" positive-integer]``.
    Float grammar: ``real [, imag]`` as decimal floats.
    """
    if not isinstance(text, str):
        raise ParseError(f"scalar text must be a string, got {type(text).__name__}")
    if backend == EXACT:
        m = _EXACT_RE.match(text)
        if m is None:
            raise ParseError(f"not an exact scalar: {text!r}")
        try:
            re_part = Fraction(m.group("re").replace(" ", ""))
            im_part = Fraction(0)
            if m.group("im") is not None:
                im_part = Fraction(m.group("im").replace(" ", ""))
                if m.group("sign") == "-":
                    im_part = -im_part
        except ZeroDivisionError:
            raise ParseError(f"zero denominator in scalar: {text!r}") from None
        return ExactScalar(re_part, im_part)
    if backend == FLOAT:
        parts = text.split(",")
        if len(parts) not in (1, 2):
            raise ParseError(f"not a float scalar: {text!r}")
        try:
            re_part = float(parts[0])
            im_part = float(parts[1]) if len(parts) == 2 else 0.0
        except ValueError:
            raise ParseError(f"not a float scalar: {text!r}") from None
        return FloatScalar(complex(re_part, im_part))
    raise ParseError(f"unknown backend: {backend!r}")


def render_scalar(a):
    """Inverse of parse_scalar; exact round-trip on both backends."""
    if a.backend == EXACT:
        if a.im == 0:
            return str(a.re)
        sign = "+" if a.im > 0 else "-"
        return f"{a.re}{sign}{abs(a.im)}i"
    return f"{a.value.real!r}, {a.value.imag!r}"


@dataclass(frozen=True)
class Tolerance:
    """Zero-test and comparison policy.  Ignored entirely in exact mode."""

    abs_eps: float = 1e-9
    rel_eps: float = 1e-9

    def __post_init__(self):
        if self.abs_eps < 0 or self.rel_eps < 0:
            raise ValueError("tolerances must be non-negative")

    def is_zero(self, a, scale=1.0):
        """Zero test; `scale` is the caller's magnitude reference."""
        if a.backend == EXACT:
            return a.is_zero()
        return abs(a.value) <= max(self.abs_eps, self.rel_eps * scale)

    def close(self, a, b, scale=1.0):
        _require_same_backend(a, b)
        if a.backend == EXACT:
            return a == b
        return abs(a.value - b.value) <= max(self.abs_eps, self.rel_eps * scale)


DEFAULT_TOLERANCE = Tolerance()


def _require_same_backend(a, b):
    if a.backend != b.backend:
        raise BackendMismatch(f"mixed backends: {a.backend} vs {b.backend}")


def approx_eq(a, b, tol=DEFAULT_TOLERANCE):
    """Backend-aware equality: exact equality, or |a-b| within tolerance
    relative to max(|a|, |b|)."""
    _require_same_backend(a, b)
    if a.backend == EXACT:
        return a == b
    return abs(a.value - b.value) <= max(
        tol.abs_eps, tol.rel_eps * max(abs(a.value), abs(b.value))
    )
