"""Exact coefficient arithmetic: rationals and one quadratic extension Q(sqrt(d)).

A Scalar is a + b*sqrt(d) with a, b exact rationals (gmpy2.mpq) and d a
squarefree nonnegative integer.  d == 0 means the value is plain rational
(b is forced to zero).  Two scalars with different nonzero d never mix:
no claim in scope needs a biquadratic field, so mixing raises instead of
embedding.
"""

from __future__ import annotations

from gmpy2 import mpq


class FieldMismatchError(ValueError):
    """Raised when scalars from distinct quadratic extensions interact."""


_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def squarefree_split(k: int) -> tuple[int, int]:
    """Write k = c^2 * d with d squarefree; return (c, d).

    Desk-scale k only (trial division).
    """
    if k < 0:
        raise ValueError("squarefree_split needs k >= 0")
    if k == 0:
        return (0, 0)
    c, d = 1, 1
    p = 2
    rest = k
    while p * p <= rest:
        e = 0
        while rest % p == 0:
            rest //= p
            e += 1
        c *= p ** (e // 2)
        if e % 2:
            d *= p
        p += 1 if p == 2 else 2
    d *= rest
    return (c, d)


def _join_d(d1: int, d2: int) -> int:
    if d1 == d2 or d2 == 0:
        return d1
    if d1 == 0:
        return d2
    raise FieldMismatchError(f"cannot mix sqrt({d1}) with sqrt({d2})")


_MPQ0 = mpq(0)


class Scalar:
    """Immutable element of Q or Q(sqrt(d))."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d=0):
        a = mpq(a)
        b = mpq(b)
        if d < 0:
            raise ValueError("discriminant must be nonnegative")
        if b:
            if d == 0:
                b = _MPQ0
            elif d == 1:
                a, b = a + b, _MPQ0
                d = 0
            else:
                c, d0 = squarefree_split(d)
                if c != 1:  # fold square part into b
                    b *= c
                    d = d0
        if not b:
            b, d = _MPQ0, 0
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # -- conversions ------------------------------------------------------

    @staticmethod
    def coerce(x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        return Scalar(x)

    @staticmethod
    def sqrt(k: int) -> "Scalar":
        """sqrt(k) as a scalar; perfect squares degrade to Q."""
        c, d = squarefree_split(k)
        if d == 1 or d == 0:
            return Scalar(c)
        return Scalar(0, c, d)

    # -- predicates --------------------------------------------------------

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def is_rational(self) -> bool:
        return not self.b

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        o = Scalar.coerce(other)
        d = _join_d(self.d, o.d)
        return Scalar(self.a + o.a, self.b + o.b, d)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = Scalar.coerce(other)
        d = _join_d(self.d, o.d)
        return Scalar(self.a - o.a, self.b - o.b, d)

    def __rsub__(self, other):
        return Scalar.coerce(other) - self

    def __mul__(self, other):
        o = other if isinstance(other, Scalar) else Scalar(other)
        if not self.b and not o.b:
            return Scalar(self.a * o.a)
        d = _join_d(self.d, o.d)
        return Scalar(self.a * o.a + d * self.b * o.b, self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not self:
            raise ZeroDivisionError("scalar is zero")
        if not self.b:
            return Scalar(1 / self.a)
        nrm = self.a * self.a - self.d * self.b * self.b
        # nrm == 0 would mean sqrt(d) rational, impossible for squarefree d > 1
        return Scalar(self.a / nrm, -self.b / nrm, self.d)

    def __truediv__(self, other):
        return self * Scalar.coerce(other).inverse()

    def __rtruediv__(self, other):
        return Scalar.coerce(other) * self.inverse()

    def conjugate(self) -> "Scalar":
        """Field automorphism sqrt(d) -> -sqrt(d)."""
        return Scalar(self.a, -self.b, self.d)

    # -- comparison ----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.a == other.a and self.b == other.b and self.d == other.d
        if isinstance(other, (int, mpq)):
            return not self.b and self.a == other
        return NotImplemented

    def __hash__(self):
        if not self.b:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __repr__(self):
        if not self.b:
            return f"Scalar({self.a})"
        return f"Scalar({self.a}, {self.b}, d={self.d})"


ZERO = Scalar(0)
ONE = Scalar(1)
