"""The exponential lattice x(s) = (q**s - 1)/(q - 1) and polynomial algebra on it.

Polynomials are stored in the monomial basis of ``X = x(s)``.  Shifts in
``s`` become affine substitutions because ``x(s+1) = q x(s) + 1``, and the
divided differences

    Delta p(s) = (p(s+1) - p(s)) / q**(s - 1/2)
    nabla p(s) = (p(s) - p(s-1)) / q**(s - 1/2)

become exact polynomial divisions by ``q**s = (q - 1) X + 1``.

:class:`GridFunction` carries sampled, not necessarily polynomial, functions
of ``s`` so that weight-times-polynomial expressions can be differenced
before being interpolated back into a :class:`LatticePolynomial`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .errors import InexactDivision, WindowUnderflow
from .scalars import QField, QScalar


def _is_zero(c) -> bool:
    return c == 0


class LatticePolynomial:
    """Dense polynomial ``sum coeffs[m] * X**m``; immutable.

    Coefficients may be :class:`QScalar`, ``Fraction`` or ``int``; the class
    only relies on ring operations and comparison with ``0``.  The classical
    (q = 1) module reuses it with ``X = x``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = list(coeffs)
        while cs and _is_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def constant(cls, c) -> LatticePolynomial:
        return cls([c])

    @classmethod
    def variable(cls, one=1) -> LatticePolynomial:
        return cls([0 * one, one])

    @property
    def degree(self) -> int:
        """Highest index with a nonzero coefficient; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self):
        if not self.coeffs:
            return 0
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def coeff(self, m: int):
        return self.coeffs[m] if 0 <= m < len(self.coeffs) else 0

    def monic(self) -> LatticePolynomial:
        lc = self.lc
        return LatticePolynomial(c / lc for c in self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, LatticePolynomial):
            return len(self.coeffs) == len(other.coeffs) and all(
                a == b for a, b in zip(self.coeffs, other.coeffs)
            )
        if not self.coeffs:
            return other == 0
        if len(self.coeffs) == 1:
            return self.coeffs[0] == other
        return False

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"LatticePolynomial({[str(c) for c in self.coeffs]})"

    # -- ring operations ------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, LatticePolynomial):
            other = LatticePolynomial([other])
        n = max(len(self.coeffs), len(other.coeffs))
        return LatticePolynomial(self.coeff(m) + other.coeff(m) for m in range(n))

    __radd__ = __add__

    def __neg__(self):
        return LatticePolynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        if not isinstance(other, LatticePolynomial):
            other = LatticePolynomial([other])
        n = max(len(self.coeffs), len(other.coeffs))
        return LatticePolynomial(self.coeff(m) - other.coeff(m) for m in range(n))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LatticePolynomial):
            return LatticePolynomial(c * other for c in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return LatticePolynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return LatticePolynomial(out)

    def __rmul__(self, other):
        return LatticePolynomial(other * c for c in self.coeffs)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose_linear(self, a, b) -> LatticePolynomial:
        """Return ``p(a X + b)``."""
        lin = LatticePolynomial([b, a])
        acc = LatticePolynomial()
        for c in reversed(self.coeffs):
            acc = acc * lin + c
        return acc

    def divmod_linear(self, c1, c0):
        """Divide by ``c1 X + c0``; returns ``(quotient, remainder)``."""
        if not self.coeffs:
            return LatticePolynomial(), 0
        root = -c0 / c1
        quot = []
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * root + c
            quot.append(acc)
        rem = quot.pop()
        quot.reverse()
        return LatticePolynomial(c / c1 for c in quot), rem

    # -- serialisation ----------------------------------------------------------

    def to_json(self) -> dict:
        return {"basis": "monomial_x", "coeffs": [_scalar_json(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj, field: QField | None = None) -> LatticePolynomial:
        if obj.get("basis", "monomial_x") != "monomial_x":
            raise ValueError(f"unsupported basis {obj.get('basis')!r}")
        return cls(_scalar_from_json(c, field) for c in obj["coeffs"])


def _scalar_json(c) -> dict:
    if isinstance(c, QScalar):
        return c.to_json()
    return {"a": str(Fraction(c)), "b": "0"}


def _scalar_from_json(obj, field):
    if field is None:
        if Fraction(obj.get("b", "0")):
            raise ValueError("irrational coefficient needs a field")
        return Fraction(obj["a"])
    return field.scalar_from_json(obj)


# -- lattice and q-Pochhammer -------------------------------------------------

def lattice_x(field: QField, s: int) -> QScalar:
    """x(s) = (q**s - 1)/(q - 1), exact for any integer ``s``."""
    q = field.q
    return QScalar(field, (q ** s - 1) / (q - 1))


def qpochhammer(field: QField, a, k: int) -> QScalar:
    """(a; q)_k = prod_{j<k} (1 - a q**j)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    out = field(1)
    qj = field.q ** 0
    for _ in range(k):
        out = out * (1 - a * qj)
        qj = qj * field.q
    return out


def qnumber(field: QField, n: int) -> QScalar:
    """[n]_q = x(n)."""
    return lattice_x(field, n)


def qstirling_eval(field: QField, s: int, k: int) -> QScalar:
    """[s]_q^{(k)} = x(s) x(s-1) ... x(s-k+1)."""
    out = field(1)
    for j in range(k):
        out = out * lattice_x(field, s - j)
    return out


@lru_cache(maxsize=None)
def qstirling_poly(field: QField, k: int) -> LatticePolynomial:
    """[s]_q^{(k)} as a polynomial in X; leading coefficient q**(-k(k-1)/2)."""
    p = LatticePolynomial([field(1)])
    for j in range(k):
        # x(s - j) = q**(-j) X + x(-j)
        p = p * LatticePolynomial([lattice_x(field, -j), field.qpow(-j)])
    return p


def to_factorial_basis(field: QField, p: LatticePolynomial) -> list:
    """Coefficients ``c`` with ``p = sum c[k] [s]^{(k)}`` (back substitution)."""
    rest = p
    out = [field(0)] * len(p.coeffs)
    for k in range(p.degree, -1, -1):
        if rest.degree < k:
            continue
        basis = qstirling_poly(field, k)
        c = rest.coeffs[k] / basis.lc
        out[k] = c
        rest = rest - basis * c
    if not rest.is_zero():
        raise InexactDivision(f"factorial basis conversion left {rest}")
    return out


def from_factorial_basis(field: QField, c: Sequence) -> LatticePolynomial:
    acc = LatticePolynomial()
    for k, ck in enumerate(c):
        if ck != 0:
            acc = acc + qstirling_poly(field, k) * ck
    return acc


# -- shifts and divided differences ---------------------------------------------

def shift_plus(field: QField, p: LatticePolynomial) -> LatticePolynomial:
    """p(s+1) via X -> qX + 1."""
    return p.compose_linear(field(field.q), field(1))


def shift_minus(field: QField, p: LatticePolynomial) -> LatticePolynomial:
    """p(s-1) via X -> (X - 1)/q."""
    inv = 1 / field.q
    return p.compose_linear(field(inv), field(-inv))


def _divide_by_qs(field: QField, num: LatticePolynomial) -> LatticePolynomial:
    quot, rem = num.divmod_linear(field(field.q - 1), field(1))
    if rem != 0:
        raise InexactDivision(f"nonzero remainder {rem} dividing by q**s")
    return quot


def delta_op(field: QField, p: LatticePolynomial) -> LatticePolynomial:
    """Delta p = (p(s+1) - p(s)) / q**(s - 1/2)."""
    return _divide_by_qs(field, shift_plus(field, p) - p) * field.sqrt_q


def nabla_op(field: QField, p: LatticePolynomial) -> LatticePolynomial:
    """nabla p = (p(s) - p(s-1)) / q**(s - 1/2)."""
    return _divide_by_qs(field, p - shift_minus(field, p)) * field.sqrt_q


def backward_diff(field: QField, p: LatticePolynomial) -> LatticePolynomial:
    """Plain backward difference p(s) - p(s-1), not divided by the lattice step."""
    return p - shift_minus(field, p)


# -- grid functions ---------------------------------------------------------------

@dataclass(frozen=True)
class GridFunction:
    """Values of a function of ``s`` on the contiguous window ``[s_min, s_max]``.

    With ``zero_below_zero`` the function reads as 0 at every negative ``s``
    outside the stored window, the convention ``1/Gamma_q(s+1) = 0`` at
    negative integers.
    """

    s_min: int
    values: tuple
    zero_below_zero: bool = False

    @classmethod
    def sample(cls, fn: Callable[[int], object], s_min: int, s_max: int,
               zero_below_zero: bool = False) -> GridFunction:
        return cls(s_min, tuple(fn(s) for s in range(s_min, s_max + 1)), zero_below_zero)

    @property
    def s_max(self) -> int:
        return self.s_min + len(self.values) - 1

    @property
    def window(self) -> range:
        return range(self.s_min, self.s_max + 1)

    def __getitem__(self, s: int):
        if self.s_min <= s <= self.s_max:
            return self.values[s - self.s_min]
        if s < 0 and self.zero_below_zero:
            return 0
        raise WindowUnderflow(f"s={s} outside window [{self.s_min}, {self.s_max}]")

    def map(self, fn: Callable[[int, object], object]) -> GridFunction:
        """Pointwise ``fn(s, value)``; zero-extension survives only if fn(s, 0) = 0."""
        return GridFunction(self.s_min, tuple(fn(s, v) for s, v in zip(self.window, self.values)),
                            self.zero_below_zero)

    def times(self, fn: Callable[[int], object]) -> GridFunction:
        return self.map(lambda s, v: v * fn(s))

    def restrict(self, s_min: int, s_max: int) -> GridFunction:
        return GridFunction.sample(self.__getitem__, s_min, s_max, self.zero_below_zero)

    def __sub__(self, other: GridFunction) -> GridFunction:
        lo = max(self.s_min, other.s_min)
        hi = min(self.s_max, other.s_max)
        return GridFunction.sample(lambda s: self[s] - other[s], lo, hi,
                                   self.zero_below_zero and other.zero_below_zero)

    def __add__(self, other: GridFunction) -> GridFunction:
        lo = max(self.s_min, other.s_min)
        hi = min(self.s_max, other.s_max)
        return GridFunction.sample(lambda s: self[s] + other[s], lo, hi,
                                   self.zero_below_zero and other.zero_below_zero)


def grid_nabla(field: QField, f: GridFunction) -> GridFunction:
    """Pointwise (f(s) - f(s-1)) / q**(s - 1/2); the window loses its left point
    unless the zero-extension supplies f(s_min - 1)."""
    start = f.s_min if (f.zero_below_zero and f.s_min <= 0) else f.s_min + 1
    if start > f.s_max:
        raise WindowUnderflow("window too short for a backward difference")
    vals = []
    for s in range(start, f.s_max + 1):
        vals.append((f[s] - f[s - 1]) / field.qpow_half(2 * s - 1))
    return GridFunction(start, tuple(vals), f.zero_below_zero)


def interpolate_factorial(field: QField, values: Sequence) -> LatticePolynomial:
    """Polynomial of degree < len(values) through ``(x(t), values[t])``, t = 0, 1, ...

    [t]^{(k)} vanishes for t < k, so the factorial-basis coefficients follow
    by forward substitution.
    """
    coeffs = []
    for t, v in enumerate(values):
        acc = v
        for k, ck in enumerate(coeffs):
            acc = acc - ck * qstirling_eval(field, t, k)
        coeffs.append(acc / qstirling_eval(field, t, t))
    return from_factorial_basis(field, coeffs)
