"""Exact arithmetic and the rings used by the k-SUM machinery.

Scalars are :class:`fractions.Fraction`, which is already canonical
(positive denominator, reduced) and hashes consistently, so it doubles as
the dictionary key in the solvers.  Complex numbers are pairs of fractions.
Vectors (real or complex) use the Hadamard product.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Iterable, Sequence, Union

from .errors import FormatError, StructuralError

Rational = Fraction

_DECIMAL = re.compile(r"[+-]?\d+(\.\d+)?")
_RATIO = re.compile(r"([+-]?\d+)/(\d+)")


def parse_number(text) -> Fraction:
    """Parse a number literal: ``-12``, ``3.25`` or ``p/q`` with ``q > 0``.

    Python ints and Fractions pass through.  Floats are rejected so that no
    binary rounding ever sneaks in at the I/O boundary.
    """
    if isinstance(text, bool):
        raise FormatError(f"not a number literal: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str):
        raise FormatError(f"not a number literal: {text!r}")
    s = text.strip()
    if _DECIMAL.fullmatch(s):
        return Fraction(s)
    m = _RATIO.fullmatch(s)
    if m:
        if int(m.group(2)) == 0:
            raise FormatError(f"zero denominator in {text!r}")
        return Fraction(int(m.group(1)), int(m.group(2)))
    raise FormatError(f"not a number literal: {text!r}")


def format_number(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True, slots=True)
class ComplexRational:
    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        if not isinstance(self.re, Fraction):
            object.__setattr__(self, "re", Fraction(self.re))
        if not isinstance(self.im, Fraction):
            object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def of(cls, x) -> "ComplexRational":
        if isinstance(x, ComplexRational):
            return x
        if isinstance(x, complex):
            raise TypeError("binary complex values are not exact")
        return cls(Fraction(x), Fraction(0))

    def __add__(self, other):
        o = _coerce_complex(other)
        if o is None:
            return NotImplemented
        return ComplexRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce_complex(other)
        if o is None:
            return NotImplemented
        return ComplexRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _coerce_complex(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = _coerce_complex(other)
        if o is None:
            return NotImplemented
        return ComplexRational(self.re * o.re - self.im * o.im,
                               self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce_complex(other)
        if o is None:
            return NotImplemented
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("complex division by zero")
        return ComplexRational((self.re * o.re + self.im * o.im) / den,
                               (self.im * o.re - self.re * o.im) / den)

    def __rtruediv__(self, other):
        o = _coerce_complex(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return ComplexRational(-self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conjugate(self) -> "ComplexRational":
        return ComplexRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __str__(self):
        re_, im_ = format_number(self.re), format_number(abs(self.im))
        sign = "-" if self.im < 0 else "+"
        return f"{re_}{sign}{im_}i"


def _coerce_complex(x):
    if isinstance(x, ComplexRational):
        return x
    if isinstance(x, (int, Fraction)):
        return ComplexRational(Fraction(x), Fraction(0))
    return None


I = ComplexRational(0, 1)


# ---------------------------------------------------------------- rings

SCALAR, COMPLEX, VECTOR, CVECTOR = "scalar", "complex", "vector", "cvector"
_TAGS = (SCALAR, COMPLEX, VECTOR, CVECTOR)


@dataclass(frozen=True, slots=True)
class Ring:
    """Tag plus arity.  ``vector``/``cvector`` are R^m / C^m."""

    tag: str
    arity: int = 1

    def __post_init__(self):
        if self.tag not in _TAGS:
            raise StructuralError(f"unknown ring tag {self.tag!r}")
        if self.arity < 1 or (self.tag in (SCALAR, COMPLEX) and self.arity != 1):
            raise StructuralError(f"bad arity {self.arity} for {self.tag}")

    @property
    def is_complex(self) -> bool:
        return self.tag in (COMPLEX, CVECTOR)

    def _unit(self, value: int) -> "RingElement":
        if self.tag == SCALAR:
            return Scalar(Fraction(value))
        if self.tag == COMPLEX:
            return Complex(ComplexRational(value))
        if self.tag == VECTOR:
            return Vector(tuple(Fraction(value) for _ in range(self.arity)))
        return Vector(tuple(ComplexRational(value) for _ in range(self.arity)))

    def zero(self) -> "RingElement":
        return self._unit(0)

    def one(self) -> "RingElement":
        return self._unit(1)

    def element(self, value) -> "RingElement":
        """Build an element of this ring from a plain value / sequence."""
        if self.tag == SCALAR:
            return Scalar(value)
        if self.tag == COMPLEX:
            return Complex(ComplexRational.of(value))
        items = tuple(value)
        if len(items) != self.arity:
            raise StructuralError(f"expected {self.arity} components, got {len(items)}")
        if self.tag == VECTOR:
            return Vector(tuple(Fraction(x) for x in items))
        return Vector(tuple(ComplexRational.of(x) for x in items))


class RingElement:
    """Common operator plumbing; concrete classes are Scalar, Complex, Vector."""

    __slots__ = ()

    def __add__(self, other):
        return ring_add(self, other)

    def __mul__(self, other):
        return ring_mul(self, other)

    def __sub__(self, other):
        return ring_add(self, -other)

    def components(self) -> tuple:
        raise NotImplementedError


@dataclass(frozen=True, slots=True)
class Scalar(RingElement):
    value: Fraction

    def __post_init__(self):
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))

    @property
    def ring(self) -> Ring:
        return Ring(SCALAR)

    def __neg__(self):
        return Scalar(-self.value)

    def components(self):
        return (self.value,)


@dataclass(frozen=True, slots=True)
class Complex(RingElement):
    value: ComplexRational

    @property
    def ring(self) -> Ring:
        return Ring(COMPLEX)

    def __neg__(self):
        return Complex(-self.value)

    def components(self):
        return (self.value.re, self.value.im)


@dataclass(frozen=True, slots=True)
class Vector(RingElement):
    items: tuple

    def __post_init__(self):
        items = tuple(self.items)
        if not items:
            raise StructuralError("empty vector")
        if isinstance(items[0], ComplexRational):
            if not all(isinstance(x, ComplexRational) for x in items):
                raise StructuralError("mixed real/complex vector")
        else:
            items = tuple(Fraction(x) for x in items)
        object.__setattr__(self, "items", items)

    @property
    def ring(self) -> Ring:
        tag = CVECTOR if isinstance(self.items[0], ComplexRational) else VECTOR
        return Ring(tag, len(self.items))

    def __neg__(self):
        return Vector(tuple(-x for x in self.items))

    def components(self):
        if isinstance(self.items[0], ComplexRational):
            return tuple(c for x in self.items for c in (x.re, x.im))
        return self.items


def _check_same(a: RingElement, b: RingElement) -> Ring:
    ra, rb = a.ring, b.ring
    if ra != rb:
        raise StructuralError(f"ring mismatch: {ra} vs {rb}")
    return ra


def ring_add(a: RingElement, b: RingElement) -> RingElement:
    _check_same(a, b)
    if isinstance(a, Scalar):
        return Scalar(a.value + b.value)
    if isinstance(a, Complex):
        return Complex(a.value + b.value)
    return Vector(tuple(x + y for x, y in zip(a.items, b.items)))


def ring_mul(a: RingElement, b: RingElement) -> RingElement:
    _check_same(a, b)
    if isinstance(a, Scalar):
        return Scalar(a.value * b.value)
    if isinstance(a, Complex):
        return Complex(a.value * b.value)
    return Vector(tuple(x * y for x, y in zip(a.items, b.items)))


@dataclass(frozen=True)
class FloatBackendPolicy:
    """Tolerance for zero tests in the (benchmark-only) float backend."""

    epsilon: float = 0.0

    def __post_init__(self):
        if not self.epsilon >= 0:
            raise ValueError("epsilon must be nonnegative")


EXACT = "exact"


def is_zero(a: RingElement, policy: Union[str, FloatBackendPolicy] = EXACT) -> bool:
    if isinstance(policy, FloatBackendPolicy):
        return max(abs(float(c)) for c in a.components()) <= policy.epsilon
    return not any(a.components())


# ------------------------------------------------------ exact linear algebra

def common_denominator(values: Iterable[Fraction]) -> int:
    return reduce(lcm, (Fraction(v).denominator for v in values), 1)


def det(matrix: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    a = [[Fraction(x) for x in row] for row in matrix]
    n = len(a)
    if any(len(row) != n for row in a):
        raise StructuralError("determinant of a non-square matrix")
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            result = -result
        p = a[col][col]
        result *= p
        for r in range(col + 1, n):
            f = a[r][col] / p
            if f:
                row, top = a[r], a[col]
                for c in range(col, n):
                    row[c] -= f * top[c]
    return result


def rank(matrix: Sequence[Sequence]) -> int:
    a = [[Fraction(x) for x in row] for row in matrix]
    if not a:
        return 0
    rows, cols = len(a), len(a[0])
    r = 0
    for col in range(cols):
        pivot = next((i for i in range(r, rows) if a[i][col] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        for i in range(r + 1, rows):
            f = a[i][col] / a[r][col]
            if f:
                for c in range(col, cols):
                    a[i][c] -= f * a[r][c]
        r += 1
        if r == rows:
            break
    return r
