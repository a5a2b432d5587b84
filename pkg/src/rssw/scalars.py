"""Exact scalar arithmetic: rationals, Gaussian rationals and quaternions.

Rationals are ``gmpy2.mpq`` values. Quaternions are stored by their four
real coordinates ``a + b i + c j + d k`` (Hamilton convention, ``ij = k``);
the complex pair ``(z, w)`` with ``q = z + j w`` is available as properties
and gives the 2x2 complex matrix ``[[z, -conj(w)], [w, conj(z)]]``, which is
a ring homomorphism from the quaternions.
"""

from __future__ import annotations

import random
from fractions import Fraction

import gmpy2

Rational = type(gmpy2.mpq())

__all__ = [
    "Rational",
    "rational",
    "GaussComplex",
    "Quaternion",
    "Matrix2",
    "qmul",
    "qconj",
    "qinv",
    "ONE",
    "I",
    "J",
    "K",
    "ZERO",
    "random_rational",
    "random_quaternion",
]


def rational(x) -> Rational:
    """Coerce ``x`` (int, str, Fraction, mpq) to an exact rational."""
    if isinstance(x, Rational):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted in exact arithmetic")
    if isinstance(x, Fraction):
        return gmpy2.mpq(x.numerator, x.denominator)
    return gmpy2.mpq(x)


_SCALAR_TYPES = (int, Rational, Fraction, str)
_Q0 = gmpy2.mpq(0)
_Q1 = gmpy2.mpq(1)


class GaussComplex:
    """Element ``re + im*i`` of the Gaussian rationals Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = rational(re)
        self.im = rational(im)

    @classmethod
    def _raw(cls, re, im):
        obj = cls.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    def __add__(self, other):
        other = _as_gc(other)
        return GaussComplex._raw(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_gc(other)
        return GaussComplex._raw(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return _as_gc(other) - self

    def __neg__(self):
        return GaussComplex._raw(-self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, GaussComplex):
            return GaussComplex._raw(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        if not isinstance(other, _SCALAR_TYPES):
            return NotImplemented
        r = rational(other)
        return GaussComplex._raw(self.re * r, self.im * r)

    __rmul__ = __mul__

    def conj(self) -> "GaussComplex":
        return GaussComplex._raw(self.re, -self.im)

    def abs2(self) -> Rational:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GaussComplex":
        n = self.abs2()
        if n == 0:
            raise ZeroDivisionError("GaussComplex division by zero")
        return GaussComplex._raw(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if isinstance(other, GaussComplex):
            return self * other.inverse()
        r = rational(other)
        if r == 0:
            raise ZeroDivisionError("GaussComplex division by zero")
        return GaussComplex._raw(self.re / r, self.im / r)

    def __eq__(self, other):
        if isinstance(other, GaussComplex):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Rational, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return self.im == 0

    def __repr__(self):
        return f"GaussComplex({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


def _as_gc(x) -> GaussComplex:
    if isinstance(x, GaussComplex):
        return x
    return GaussComplex._raw(rational(x), _Q0)


class Quaternion:
    """Exact quaternion ``a + b i + c j + d k``.

    The complex-pair view is ``q = z + j w`` with ``z = a + b i`` and
    ``w = c - d i``; then ``matrix()`` is multiplicative, so quaternion
    products and 2x2 matrix products agree.
    """

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a=0, b=0, c=0, d=0):
        self.a = rational(a)
        self.b = rational(b)
        self.c = rational(c)
        self.d = rational(d)

    @classmethod
    def _raw(cls, a, b, c, d):
        obj = cls.__new__(cls)
        obj.a = a
        obj.b = b
        obj.c = c
        obj.d = d
        return obj

    @classmethod
    def from_zw(cls, z, w) -> "Quaternion":
        z = _as_gc(z)
        w = _as_gc(w)
        return cls._raw(z.re, z.im, w.re, -w.im)

    @classmethod
    def from_complex(cls, z) -> "Quaternion":
        z = _as_gc(z)
        return cls._raw(z.re, z.im, _Q0, _Q0)

    @property
    def z(self) -> GaussComplex:
        return GaussComplex._raw(self.a, self.b)

    @property
    def w(self) -> GaussComplex:
        return GaussComplex._raw(self.c, -self.d)

    def coords(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def matrix(self) -> "Matrix2":
        z, w = self.z, self.w
        return Matrix2(z, -w.conj(), w, z.conj())

    def column(self) -> tuple:
        """First column ``(z, w)`` of the matrix form: the spinor as a C^2 vector."""
        return (self.z, self.w)

    def __add__(self, other):
        return Quaternion._raw(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def __sub__(self, other):
        return Quaternion._raw(self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d)

    def __neg__(self):
        return Quaternion._raw(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            a1, b1, c1, d1 = self.a, self.b, self.c, self.d
            a2, b2, c2, d2 = other.a, other.b, other.c, other.d
            return Quaternion._raw(
                a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
                a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
                a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
                a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
            )
        if isinstance(other, GaussComplex):
            return self * Quaternion.from_complex(other)
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, GaussComplex):
            return Quaternion.from_complex(other) * self
        return self.scale(other)

    def scale(self, r) -> "Quaternion":
        r = rational(r)
        return Quaternion._raw(self.a * r, self.b * r, self.c * r, self.d * r)

    def conj(self) -> "Quaternion":
        return Quaternion._raw(self.a, -self.b, -self.c, -self.d)

    def norm2(self) -> Rational:
        return self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d

    def inverse(self) -> "Quaternion":
        n = self.norm2()
        if n == 0:
            raise ZeroDivisionError("zero quaternion has no inverse")
        return Quaternion._raw(self.a / n, -self.b / n, -self.c / n, -self.d / n)

    def real_part(self) -> Rational:
        return self.a

    def dot(self, other: "Quaternion") -> Rational:
        """Euclidean inner product of the coordinate vectors."""
        return self.a * other.a + self.b * other.b + self.c * other.c + self.d * other.d

    def __eq__(self, other):
        if isinstance(other, Quaternion):
            return self.a == other.a and self.b == other.b and self.c == other.c and self.d == other.d
        if isinstance(other, (int, Rational, Fraction)):
            return self.b == 0 and self.c == 0 and self.d == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    def __bool__(self):
        return bool(self.a) or bool(self.b) or bool(self.c) or bool(self.d)

    def __repr__(self):
        return f"Quaternion({self.a}, {self.b}, {self.c}, {self.d})"

    def __str__(self):
        parts = []
        for coeff, unit in zip(self.coords(), ("", "i", "j", "k")):
            if coeff:
                parts.append(f"{coeff}{unit}")
        return " + ".join(parts) if parts else "0"


def qmul(a: Quaternion, b: Quaternion) -> Quaternion:
    return a * b


def qconj(a: Quaternion) -> Quaternion:
    return a.conj()


def qinv(a: Quaternion) -> Quaternion:
    """Inverse ``conj(a) / |a|^2``; raises ``ZeroDivisionError`` for ``a = 0``."""
    return a.inverse()


ZERO = Quaternion(0)
ONE = Quaternion(1)
I = Quaternion(0, 1)
J = Quaternion(0, 0, 1)
K = Quaternion(0, 0, 0, 1)


class Matrix2:
    """2x2 matrix over the Gaussian rationals, entries in row-major order."""

    __slots__ = ("m00", "m01", "m10", "m11")

    def __init__(self, m00=0, m01=0, m10=0, m11=0):
        self.m00 = _as_gc(m00)
        self.m01 = _as_gc(m01)
        self.m10 = _as_gc(m10)
        self.m11 = _as_gc(m11)

    @classmethod
    def zero(cls) -> "Matrix2":
        return cls()

    @classmethod
    def identity(cls) -> "Matrix2":
        return cls(1, 0, 0, 1)

    @classmethod
    def outer(cls, x: tuple, y: tuple) -> "Matrix2":
        """The rank-one matrix ``x y^*`` for column vectors ``x, y`` in C^2."""
        return cls(x[0] * y[0].conj(), x[0] * y[1].conj(), x[1] * y[0].conj(), x[1] * y[1].conj())

    def entries(self) -> tuple:
        return (self.m00, self.m01, self.m10, self.m11)

    def __add__(self, other):
        return Matrix2(*(x + y for x, y in zip(self.entries(), other.entries())))

    def __sub__(self, other):
        return Matrix2(*(x - y for x, y in zip(self.entries(), other.entries())))

    def __neg__(self):
        return Matrix2(*(-x for x in self.entries()))

    def __mul__(self, other):
        if isinstance(other, Matrix2):
            a, b, c, d = self.entries()
            e, f, g, h = other.entries()
            return Matrix2(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
        return Matrix2(*(x * other for x in self.entries()))

    def __rmul__(self, other):
        return Matrix2(*(other * x for x in self.entries()))

    def adjoint(self) -> "Matrix2":
        return Matrix2(self.m00.conj(), self.m10.conj(), self.m01.conj(), self.m11.conj())

    def trace(self) -> GaussComplex:
        return self.m00 + self.m11

    def det(self) -> GaussComplex:
        return self.m00 * self.m11 - self.m01 * self.m10

    def traceless_part(self) -> "Matrix2":
        half = self.trace() * gmpy2.mpq(1, 2)
        return Matrix2(self.m00 - half, self.m01, self.m10, self.m11 - half)

    def is_hermitian(self) -> bool:
        return self == self.adjoint()

    def is_skew_hermitian(self) -> bool:
        return self == -self.adjoint()

    def is_traceless(self) -> bool:
        return not self.trace()

    def frobenius2(self) -> Rational:
        return sum((x.abs2() for x in self.entries()), _Q0)

    def apply(self, v: tuple) -> tuple:
        return (self.m00 * v[0] + self.m01 * v[1], self.m10 * v[0] + self.m11 * v[1])

    def __eq__(self, other):
        if not isinstance(other, Matrix2):
            return NotImplemented
        return self.entries() == other.entries()

    def __hash__(self):
        return hash(self.entries())

    def __bool__(self):
        return any(self.entries())

    def __repr__(self):
        return "Matrix2([[{}, {}], [{}, {}]])".format(*self.entries())


def random_rational(rng: random.Random, bound: int = 100) -> Rational:
    return gmpy2.mpq(rng.randint(-bound, bound), rng.randint(1, bound))


def random_quaternion(rng: random.Random, bound: int = 100) -> Quaternion:
    return Quaternion._raw(*(random_rational(rng, bound) for _ in range(4)))
