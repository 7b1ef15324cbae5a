"""Exact arithmetic in Q(sqrt 2) and quaternions over it.

``Scalar`` holds ``r + s*sqrt(2)`` with arbitrary-precision rationals.
``Quaternion`` holds four components in the (1, i, j, k) basis.  Components
are normally ``Scalar``; the float path (transcendental group elements) stores
plain Python floats in the same class, and mixed Scalar/float arithmetic
degrades to float.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import total_ordering

from gmpy2 import is_square, isqrt, mpq

from .errors import DivisionByZero, NotExact

_MPQ = type(mpq(0))
_Q0 = mpq(0)
_SQRT2_F = math.sqrt(2.0)


def _rat(value):
    if type(value) is _MPQ:
        return value
    if isinstance(value, float):
        raise TypeError("floats are not exact rationals; pass a Fraction or string")
    return mpq(value)


def _rat_sqrt(q):
    """Exact square root of a non-negative rational, or None."""
    if q < 0:
        return None
    num, den = q.numerator, q.denominator
    if is_square(num) and is_square(den):
        return mpq(isqrt(num), isqrt(den))
    return None


@total_ordering
class Scalar:
    """Element r + s*sqrt(2) of Q(sqrt 2)."""

    __slots__ = ("r", "s")

    def __init__(self, r=0, s=0):
        self.r = _rat(r)
        self.s = _rat(s)

    @classmethod
    def _new(cls, r, s):
        obj = object.__new__(cls)
        obj.r = r
        obj.s = s
        return obj

    @classmethod
    def coerce(cls, value):
        if type(value) is cls:
            return value
        if isinstance(value, float):
            raise TypeError("floats are not exact")
        return cls._new(_rat(value), _Q0)

    def __repr__(self):
        return f"Scalar({self.r}, {self.s})"

    def __str__(self):
        if not self.s:
            return str(self.r)
        if not self.r:
            return f"{self.s}*sqrt2"
        sign = "+" if self.s > 0 else "-"
        return f"{self.r}{sign}{abs(self.s)}*sqrt2"

    def __add__(self, other):
        if type(other) is Scalar:
            return Scalar._new(self.r + other.r, self.s + other.s)
        if isinstance(other, float):
            return float(self) + other
        try:
            return Scalar._new(self.r + _rat(other), self.s)
        except (TypeError, ValueError):
            return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Scalar._new(-self.r, -self.s)

    def __sub__(self, other):
        if type(other) is Scalar:
            return Scalar._new(self.r - other.r, self.s - other.s)
        if isinstance(other, float):
            return float(self) - other
        try:
            return Scalar._new(self.r - _rat(other), self.s)
        except (TypeError, ValueError):
            return NotImplemented

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if type(other) is Scalar:
            if not self.s and not other.s:
                return Scalar._new(self.r * other.r, _Q0)
            return Scalar._new(
                self.r * other.r + 2 * self.s * other.s,
                self.r * other.s + self.s * other.r,
            )
        if isinstance(other, float):
            return float(self) * other
        try:
            o = _rat(other)
        except (TypeError, ValueError):
            return NotImplemented
        return Scalar._new(self.r * o, self.s * o)

    __rmul__ = __mul__

    def inverse(self):
        d = self.r * self.r - 2 * self.s * self.s
        if not d:
            # r^2 = 2 s^2 has no rational solution besides r = s = 0
            raise DivisionByZero("inverse of zero in Q(sqrt 2)")
        return Scalar._new(self.r / d, -self.s / d)

    def __truediv__(self, other):
        if type(other) is Scalar:
            return self * other.inverse()
        if isinstance(other, float):
            return float(self) / other
        try:
            o = _rat(other)
        except (TypeError, ValueError):
            return NotImplemented
        if not o:
            raise DivisionByZero("division by zero")
        return Scalar._new(self.r / o, self.s / o)

    def __rtruediv__(self, other):
        if isinstance(other, float):
            return other / float(self)
        return Scalar.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE_S
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __bool__(self):
        return bool(self.r) or bool(self.s)

    def __eq__(self, other):
        if type(other) is Scalar:
            return self.r == other.r and self.s == other.s
        if isinstance(other, float):
            return float(self) == other
        if isinstance(other, (int, Fraction, _MPQ)):
            return not self.s and self.r == other
        return NotImplemented

    def __hash__(self):
        if not self.s:
            return hash(self.r)
        return hash((self.r, self.s))

    def __float__(self):
        return float(self.r) + float(self.s) * _SQRT2_F

    def sign(self) -> int:
        """Exact sign of r + s*sqrt(2)."""
        r, s = self.r, self.s
        rs = (r > 0) - (r < 0)
        ss = (s > 0) - (s < 0)
        if rs == ss or ss == 0:
            return rs
        if rs == 0:
            return ss
        # opposite signs: compare r^2 with 2 s^2
        if r * r > 2 * s * s:
            return rs
        return ss

    def __lt__(self, other):
        if isinstance(other, float):
            return float(self) < other
        return (self - Scalar.coerce(other)).sign() < 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def galois_conjugate(self):
        return Scalar._new(self.r, -self.s)

    def is_rational(self) -> bool:
        return not self.s

    def sqrt(self):
        """Exact square root in Q(sqrt 2); raises NotExact when it does not exist."""
        if self.sign() < 0:
            raise NotExact(f"negative radicand {self}")
        r, s = self.r, self.s
        if not s:
            root = _rat_sqrt(r)
            if root is not None:
                return Scalar._new(root, _Q0)
            half = _rat_sqrt(r / 2)
            if half is not None:
                return Scalar._new(_Q0, half)
            raise NotExact(f"sqrt({self}) is not in Q(sqrt 2)")
        # (c + d sqrt2)^2 = c^2 + 2 d^2 + 2 c d sqrt2
        disc = _rat_sqrt(r * r - 2 * s * s)
        if disc is not None:
            for x in ((r + disc) / 2, (r - disc) / 2):
                c = _rat_sqrt(x)
                if c:
                    cand = Scalar._new(c, s / (2 * c))
                    if cand.sign() < 0:
                        cand = -cand
                    if cand * cand == self:
                        return cand
        raise NotExact(f"sqrt({self}) is not in Q(sqrt 2)")


ZERO_S = Scalar(0)
ONE_S = Scalar(1)
SQRT2 = Scalar(0, 1)
HALF_SQRT2 = Scalar(0, Fraction(1, 2))


def as_scalar(value):
    """Coerce ints/rationals to Scalar; leave Scalar and float untouched."""
    if type(value) is Scalar or isinstance(value, float):
        return value
    return Scalar._new(_rat(value), _Q0)


def is_zero(value, tol: float = 0.0) -> bool:
    if isinstance(value, float):
        return abs(value) <= tol
    if isinstance(value, Quaternion):
        return value.is_zero(tol)
    return not value


class Quaternion:
    """w + x i + y j + z k."""

    __slots__ = ("w", "x", "y", "z")

    def __init__(self, w=0, x=0, y=0, z=0):
        self.w = as_scalar(w)
        self.x = as_scalar(x)
        self.y = as_scalar(y)
        self.z = as_scalar(z)

    @classmethod
    def _new(cls, w, x, y, z):
        obj = object.__new__(cls)
        obj.w = w
        obj.x = x
        obj.y = y
        obj.z = z
        return obj

    @classmethod
    def coerce(cls, value):
        if isinstance(value, Quaternion):
            return value
        return cls._new(as_scalar(value), ZERO_S, ZERO_S, ZERO_S)

    def parts(self):
        return (self.w, self.x, self.y, self.z)

    def __iter__(self):
        return iter(self.parts())

    def __repr__(self):
        return f"Quaternion({self.w}, {self.x}, {self.y}, {self.z})"

    def __str__(self):
        terms = []
        for c, unit in zip(self.parts(), ("", "i", "j", "k")):
            if c:
                terms.append(f"({c}){unit}" if unit else f"({c})")
        return " + ".join(terms) if terms else "0"

    def __add__(self, other):
        if not isinstance(other, Quaternion):
            other = Quaternion.coerce(other)
        return Quaternion._new(self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z)

    __radd__ = __add__

    def __neg__(self):
        return Quaternion._new(-self.w, -self.x, -self.y, -self.z)

    def __sub__(self, other):
        if not isinstance(other, Quaternion):
            other = Quaternion.coerce(other)
        return Quaternion._new(self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z)

    def __rsub__(self, other):
        return Quaternion.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return qmul(self, other)
        c = as_scalar(other)
        return Quaternion._new(self.w * c, self.x * c, self.y * c, self.z * c)

    def __rmul__(self, other):
        # real scalars are central
        c = as_scalar(other)
        return Quaternion._new(c * self.w, c * self.x, c * self.y, c * self.z)

    def __truediv__(self, other):
        if isinstance(other, Quaternion):
            raise TypeError("quaternion division is one-sided; use qinv explicitly")
        c = as_scalar(other)
        if is_zero(c):
            raise DivisionByZero("division of a quaternion by zero")
        return Quaternion._new(self.w / c, self.x / c, self.y / c, self.z / c)

    def __eq__(self, other):
        if not isinstance(other, Quaternion):
            try:
                other = Quaternion.coerce(other)
            except TypeError:
                return NotImplemented
        return self.w == other.w and self.x == other.x and self.y == other.y and self.z == other.z

    def __hash__(self):
        return hash(self.parts())

    def __bool__(self):
        return not self.is_zero()

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(is_zero(c, tol) for c in self.parts())

    def is_imaginary(self, tol: float = 0.0) -> bool:
        return is_zero(self.w, tol)

    def is_real(self, tol: float = 0.0) -> bool:
        return is_zero(self.x, tol) and is_zero(self.y, tol) and is_zero(self.z, tol)

    def conj(self):
        return Quaternion._new(self.w, -self.x, -self.y, -self.z)

    def re(self):
        return self.w

    def im(self):
        return Quaternion._new(ZERO_S if not isinstance(self.w, float) else 0.0, self.x, self.y, self.z)

    def norm2(self):
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def inverse(self):
        n = self.norm2()
        if is_zero(n):
            raise DivisionByZero("inverse of the zero quaternion")
        return self.conj() / n

    def to_float(self):
        return Quaternion._new(*(float(c) for c in self.parts()))

    def is_exact(self) -> bool:
        return all(type(c) is Scalar for c in self.parts())

    def distance(self, other) -> float:
        return math.sqrt(sum((float(a) - float(b)) ** 2 for a, b in zip(self.parts(), other.parts())))


def qmul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product p*q."""
    a1, b1, c1, d1 = p.w, p.x, p.y, p.z
    a2, b2, c2, d2 = q.w, q.x, q.y, q.z
    return Quaternion._new(
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    )


def qconj(q: Quaternion) -> Quaternion:
    return q.conj()


def qre(q: Quaternion):
    return q.re()


def qim(q: Quaternion) -> Quaternion:
    return q.im()


def qinv(q: Quaternion) -> Quaternion:
    return q.inverse()


def norm2(q: Quaternion):
    return q.norm2()


def commutator(p: Quaternion, q: Quaternion) -> Quaternion:
    return qmul(p, q) - qmul(q, p)


QZERO = Quaternion(0)
QONE = Quaternion(1)
QI = Quaternion(0, 1)
QJ = Quaternion(0, 0, 1)
QK = Quaternion(0, 0, 0, 1)
UNITS = (QONE, QI, QJ, QK)
IMAG_UNITS = (QI, QJ, QK)


def random_rational(rng, bound: int = 100) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_scalar(rng, bound: int = 100, irrational: bool = False) -> Scalar:
    s = random_rational(rng, bound) if irrational else 0
    return Scalar(random_rational(rng, bound), s)


def random_quaternion(rng, bound: int = 100, imaginary: bool = False, irrational: bool = False) -> Quaternion:
    w = 0 if imaginary else random_scalar(rng, bound, irrational)
    return Quaternion(w, *(random_scalar(rng, bound, irrational) for _ in range(3)))


def random_unit_quaternion(rng, bound: int = 10) -> Quaternion:
    """Rational unit quaternion (1 - v)^-1 (1 + v) for a random imaginary v."""
    v = random_quaternion(rng, bound, imaginary=True)
    return qmul(qinv(QONE - v), QONE + v)
