"""Exact arithmetic in the quadratic field Q(sqrt(q)).

Every scalar that shows up in the q-Meixner constructions is of the form
``a + b*sqrt(q)`` with ``a, b`` rational, because the lattice steps
``q**(s - 1/2)`` bring in half-integer powers of ``q``.  A :class:`QField`
fixes the rational ``q`` for a session; :class:`QScalar` values carry a
reference to their field and refuse to mix with a different one.

When ``q`` is the square of a rational the square root is folded into the
rational part, so ``b`` is always zero and representations stay unique.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

import mpmath
from mpmath import libmp

from .errors import InvalidParams

DEFAULT_PRECISION = 256
DEFAULT_TOLERANCE_BITS = 128


def rational_sqrt(x: Fraction) -> Fraction | None:
    """Return the rational square root of ``x`` or ``None`` if there is none."""
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def fraction_to_mpf(x: Fraction, precision: int) -> mpmath.mpf:
    """Correctly rounded (nearest) conversion of a rational to an mpf."""
    x = Fraction(x)
    raw = libmp.from_rational(x.numerator, x.denominator, precision, libmp.round_nearest)
    return mpmath.mp.make_mpf(raw)


class QField:
    """The field Q(sqrt(q)) for a fixed rational ``0 < q < 1``."""

    __slots__ = ("q", "root", "_hash")

    def __init__(self, q):
        q = Fraction(q)
        if not 0 < q < 1:
            raise InvalidParams(f"q must lie in (0, 1), got {q}")
        self.q = q
        self.root = rational_sqrt(q)
        self._hash = hash(("QField", q))

    def __eq__(self, other):
        return isinstance(other, QField) and other.q == self.q

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"QField({self.q})"

    def __call__(self, a=0, b=0) -> QScalar:
        return QScalar(self, a, b)

    @property
    def sqrt_q(self) -> QScalar:
        return QScalar(self, 0, 1)

    def qpow(self, h: int) -> QScalar:
        """``q**h`` for an integer ``h``."""
        return QScalar(self, self.q ** h)

    def qpow_half(self, h: int) -> QScalar:
        """``q**(h/2)`` for an integer ``h``, exact."""
        if h % 2 == 0:
            return QScalar(self, self.q ** (h // 2))
        return QScalar(self, 0, self.q ** ((h - 1) // 2))

    def scalar_from_json(self, obj) -> QScalar:
        return QScalar(self, Fraction(obj["a"]), Fraction(obj.get("b", "0")))


def _coerce(field: QField, other):
    if isinstance(other, QScalar):
        if other.field is not field and other.field != field:
            raise ValueError(f"cannot mix scalars of {field!r} and {other.field!r}")
        return other._a, other._b
    if isinstance(other, (int, Fraction, Rational)):
        return Fraction(other), Fraction(0)
    return None


class QScalar:
    """Immutable element ``a + b*sqrt(q)`` of a :class:`QField`."""

    __slots__ = ("field", "_a", "_b")

    def __init__(self, field: QField, a=0, b=0):
        a = Fraction(a)
        b = Fraction(b)
        if b and field.root is not None:
            a += b * field.root
            b = Fraction(0)
        self.field = field
        self._a = a
        self._b = b

    @classmethod
    def _make(cls, field, a, b):
        # internal constructor, skips normalisation when b is already canonical
        obj = object.__new__(cls)
        obj.field = field
        obj._a = a
        obj._b = b
        return obj

    @property
    def a(self) -> Fraction:
        return self._a

    @property
    def b(self) -> Fraction:
        return self._b

    def is_rational(self) -> bool:
        return not self._b

    def rational(self) -> Fraction:
        if self._b:
            raise ValueError(f"{self} is not rational")
        return self._a

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        o = _coerce(self.field, other)
        if o is None:
            return NotImplemented
        return QScalar._make(self.field, self._a + o[0], self._b + o[1])

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(self.field, other)
        if o is None:
            return NotImplemented
        return QScalar._make(self.field, self._a - o[0], self._b - o[1])

    def __rsub__(self, other):
        o = _coerce(self.field, other)
        if o is None:
            return NotImplemented
        return QScalar._make(self.field, o[0] - self._a, o[1] - self._b)

    def __neg__(self):
        return QScalar._make(self.field, -self._a, -self._b)

    def __pos__(self):
        return self

    def __mul__(self, other):
        o = _coerce(self.field, other)
        if o is None:
            return NotImplemented
        c, d = o
        a, b = self._a, self._b
        if not b and not d:
            return QScalar._make(self.field, a * c, b)
        return QScalar._make(self.field, a * c + b * d * self.field.q, a * d + b * c)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """``(a + b sqrt q)(a - b sqrt q) = a**2 - q b**2``."""
        return self._a * self._a - self.field.q * self._b * self._b

    def conjugate(self) -> QScalar:
        return QScalar._make(self.field, self._a, -self._b)

    def inverse(self) -> QScalar:
        if not self._b:
            if not self._a:
                raise ZeroDivisionError("inverse of zero")
            return QScalar._make(self.field, 1 / self._a, self._b)
        n = self.norm()
        return QScalar._make(self.field, self._a / n, -self._b / n)

    def __truediv__(self, other):
        o = _coerce(self.field, other)
        if o is None:
            return NotImplemented
        c, d = o
        if not d:
            if not c:
                raise ZeroDivisionError("division by zero")
            return QScalar._make(self.field, self._a / c, self._b / c)
        return self * QScalar._make(self.field, c, d).inverse()

    def __rtruediv__(self, other):
        o = _coerce(self.field, other)
        if o is None:
            return NotImplemented
        return QScalar._make(self.field, o[0], o[1]) * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result = QScalar._make(self.field, Fraction(1), Fraction(0))
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- comparison -----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, QScalar):
            return self.field == other.field and self._a == other._a and self._b == other._b
        if isinstance(other, (int, Fraction, Rational)):
            return not self._b and self._a == other
        return NotImplemented

    def __hash__(self):
        if not self._b:
            return hash(self._a)
        return hash((self._a, self._b, self.field.q))

    def __bool__(self):
        return bool(self._a) or bool(self._b)

    def sign(self) -> int:
        """Exact sign of ``a + b sqrt q``."""
        a, b = self._a, self._b
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a**2 with q b**2
        n = self.norm()
        if n == 0:
            return 0
        return sa if n > 0 else sb

    def _cmp(self, other):
        diff = self - other
        if diff is NotImplemented:
            return None
        return diff.sign()

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0

    # -- conversion -----------------------------------------------------------

    def to_numeric(self, precision: int = DEFAULT_PRECISION) -> mpmath.mpf:
        """Round to an mpf of ``precision`` bits (relative error below 2**(1-precision))."""
        if precision < 64:
            raise ValueError("precision must be at least 64 bits")
        a, b = self._a, self._b
        if not b:
            return fraction_to_mpf(a, precision)
        guard = precision + 64
        with mpmath.workprec(guard):
            root = mpmath.sqrt(fraction_to_mpf(self.field.q, guard))
            if a and (a > 0) != (b > 0):
                # a + b r = (a^2 - q b^2) / (a - b r) avoids cancellation
                val = fraction_to_mpf(self.norm(), guard) / (
                    fraction_to_mpf(a, guard) - fraction_to_mpf(b, guard) * root
                )
            else:
                val = fraction_to_mpf(a, guard) + fraction_to_mpf(b, guard) * root
        with mpmath.workprec(precision):
            return +val

    def __float__(self):
        return float(self.to_numeric(64))

    def to_json(self) -> dict:
        return {"a": str(self._a), "b": str(self._b)}

    def __repr__(self):
        return f"QScalar({self._a}, {self._b}; q={self.field.q})"

    def __str__(self):
        if not self._b:
            return str(self._a)
        if not self._a:
            return f"{self._b}*sqrt(q)"
        return f"{self._a} + {self._b}*sqrt(q)"


def qpow_half(field: QField, h: int) -> QScalar:
    return field.qpow_half(h)


def to_numeric(x, precision: int = DEFAULT_PRECISION) -> mpmath.mpf:
    """Numeric value of a QScalar or rational at ``precision`` bits."""
    if isinstance(x, QScalar):
        return x.to_numeric(precision)
    return fraction_to_mpf(Fraction(x), precision)
