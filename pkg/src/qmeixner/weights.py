"""q-Pascal weights, the discrete measures on the lattice, and their moments.

The i-th measure puts mass

    omega_i(s) = alpha_i**s (q**beta; q)_s / (q; q)_s * q**(s - 1/2),   s = 0, 1, ...

on the node x(s).  For integer beta the factorial moments have the finite
closed form

    mu_{i,k} = alpha_i**k q**(k - 1/2) (q**beta; q)_k (1-q)**(-k) / (alpha_i q; q)_{beta+k}

(q-binomial theorem after shifting s -> s + k), which keeps every orthogonality
system in exact arithmetic.  :func:`truncated_moment` is the brute-force
numeric cross-check with a certified tail bound.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

import mpmath

from .errors import InvalidParams, NonIntegerBeta, TransformInadmissible
from .lattice import (
    LatticePolynomial,
    qpochhammer,
    qstirling_poly,
    to_factorial_basis,
)
from .scalars import DEFAULT_PRECISION, QField, QScalar, fraction_to_mpf

#: bound on |k| when checking alpha_i / alpha_j != q**k
CHEBYSHEV_KMAX = 64


def _as_fraction(x, name: str) -> Fraction:
    if isinstance(x, float):
        raise InvalidParams(f"{name} must be given exactly, not as a float")
    try:
        return Fraction(x)
    except (TypeError, ValueError) as exc:
        raise InvalidParams(f"cannot read {name}={x!r} as a rational") from exc


@dataclass(frozen=True)
class WeightParams:
    """Parameters (q, alpha_1..alpha_r, beta) of a q-Meixner system.

    ``beta`` may be any positive rational; only a positive integer beta
    supports the exact constructions (see :attr:`exact`).
    """

    q: Fraction
    alphas: tuple
    beta: Fraction

    def __post_init__(self):
        q = _as_fraction(self.q, "q")
        alphas = tuple(_as_fraction(a, "alpha") for a in self.alphas)
        beta = _as_fraction(self.beta, "beta")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "beta", beta)
        if not 0 < q < 1:
            raise InvalidParams(f"q must lie in (0, 1), got {q}")
        if not alphas:
            raise InvalidParams("need at least one alpha")
        for a in alphas:
            if not 0 < a < 1:
                raise InvalidParams(f"alpha must lie in (0, 1), got {a}")
        if beta <= 0:
            raise InvalidParams(f"beta must be positive, got {beta}")
        check_chebyshev(q, alphas)

    @property
    def r(self) -> int:
        return len(self.alphas)

    @cached_property
    def field(self) -> QField:
        return QField(self.q)

    @property
    def exact(self) -> bool:
        return self.beta.denominator == 1

    def require_exact(self) -> int:
        if not self.exact:
            raise NonIntegerBeta(f"exact mode needs an integer beta, got {self.beta}")
        return int(self.beta)

    def with_alpha(self, i: int, value) -> WeightParams:
        alphas = list(self.alphas)
        alphas[i] = value
        try:
            return WeightParams(self.q, tuple(alphas), self.beta)
        except InvalidParams as exc:
            raise TransformInadmissible(str(exc)) from exc

    def with_beta(self, beta) -> WeightParams:
        return WeightParams(self.q, self.alphas, beta)

    def to_json(self) -> dict:
        return {"q": str(self.q), "alphas": [str(a) for a in self.alphas], "beta": str(self.beta)}


def check_chebyshev(q: Fraction, alphas: Sequence[Fraction], kmax: int = CHEBYSHEV_KMAX) -> None:
    """Raise unless alpha_i/alpha_j != q**k for all i != j and |k| <= kmax."""
    powers = {q ** k for k in range(-kmax, kmax + 1)}
    for i, ai in enumerate(alphas):
        for j, aj in enumerate(alphas):
            if i != j and ai / aj in powers:
                raise InvalidParams(
                    f"alpha_{i + 1}/alpha_{j + 1} = {ai / aj} is an integer power of q"
                )


@dataclass(frozen=True)
class ParamTransform:
    """Per-component alpha scaling (by 1, q or 1/q) together with a beta shift."""

    alpha_scale: tuple
    beta_shift: int = 0

    def apply(self, params: WeightParams) -> WeightParams:
        if len(self.alpha_scale) != params.r:
            raise InvalidParams("transform length does not match r")
        alphas = tuple(a * s for a, s in zip(params.alphas, self.alpha_scale))
        try:
            return WeightParams(params.q, alphas, params.beta + self.beta_shift)
        except InvalidParams as exc:
            raise TransformInadmissible(str(exc)) from exc

    @classmethod
    def scale_one(cls, params: WeightParams, i: int, factor, beta_shift: int = 0) -> ParamTransform:
        scale = [Fraction(1)] * params.r
        scale[i] = Fraction(factor)
        return cls(tuple(scale), beta_shift)


# -- exact weights ----------------------------------------------------------------

def weight_density(params: WeightParams, i: int, s: int) -> QScalar:
    """alpha_i**s (q**beta; q)_s / (q; q)_s, exact for integer beta."""
    beta = params.require_exact()
    f = params.field
    if s < 0:
        return f(0)
    q = params.q
    return qpochhammer(f, q ** beta, s) / qpochhammer(f, q, s) * params.alphas[i] ** s


def measure_mass(params: WeightParams, i: int, s: int) -> QScalar:
    """omega_i(s) = density * q**(s - 1/2)."""
    return weight_density(params, i, s) * params.field.qpow_half(2 * s - 1)


@lru_cache(maxsize=None)
def factorial_moment(params: WeightParams, i: int, k: int) -> QScalar:
    """sum_s [s]^{(k)} omega_i(s) in closed form."""
    beta = params.require_exact()
    f = params.field
    q = params.q
    a = params.alphas[i]
    num = qpochhammer(f, q ** beta, k) * (a ** k) * f.qpow_half(2 * k - 1) / (1 - q) ** k
    return num / qpochhammer(f, a * q, beta + k)


@lru_cache(maxsize=None)
def _linearization(field: QField, j: int, k: int) -> tuple:
    """Factorial-basis coefficients of [s]^{(j)} [s]^{(k)}."""
    prod = qstirling_poly(field, j) * qstirling_poly(field, k)
    return tuple(to_factorial_basis(field, prod))


def mixed_moment(params: WeightParams, i: int, j: int, k: int) -> QScalar:
    """sum_s [s]^{(j)} [s]^{(k)} omega_i(s)."""
    j, k = min(j, k), max(j, k)
    lin = _linearization(params.field, j, k)
    acc = params.field(0)
    for m, c in enumerate(lin):
        if c:
            acc = acc + c * factorial_moment(params, i, m)
    return acc


def functional(params: WeightParams, i: int, k: int, p: LatticePolynomial) -> QScalar:
    """sum_s p(s) [s]^{(k)} omega_i(s), via the factorial expansion of ``p``."""
    coeffs = to_factorial_basis(params.field, p)
    acc = params.field(0)
    for m, c in enumerate(coeffs):
        if c:
            acc = acc + c * mixed_moment(params, i, m, k)
    return acc


@dataclass(frozen=True)
class MomentTable:
    """Exact factorial moments mu[i][k], k = 0..k_max, for each measure."""

    params: WeightParams
    k_max: int
    moments: tuple

    def __getitem__(self, ik):
        i, k = ik
        return self.moments[i][k]


@lru_cache(maxsize=64)
def moment_table(params: WeightParams, k_max: int) -> MomentTable:
    rows = tuple(
        tuple(factorial_moment(params, i, k) for k in range(k_max + 1)) for i in range(params.r)
    )
    return MomentTable(params, k_max, rows)


# -- numeric layer ------------------------------------------------------------------

def qq_infinity_lower_bound(q, precision: int = DEFAULT_PRECISION) -> mpmath.mpf:
    """A certified lower bound for (q; q)_infinity.

    Uses (q;q)_inf >= (q;q)_N (1 - sum_{j>N} q**j) = (q;q)_N (1 - q**(N+1)/(1-q))
    with N chosen so that the bracket is at least 1/2, shrunk by a relative
    margin that covers rounding in the finite product.
    """
    with mpmath.workprec(precision + 32):
        qm = fraction_to_mpf(q, precision + 32) if isinstance(q, Fraction) else mpmath.mpf(q)
        prod = mpmath.mpf(1)
        qj = qm
        n = 0
        while qj / (1 - qm) > mpmath.mpf(1) / 2:
            prod *= 1 - qj
            qj *= qm
            n += 1
        bound = prod * (1 - qj / (1 - qm))
        margin = 1 - mpmath.mpf(2) ** (-(precision - 8)) * (n + 2)
        return bound * margin


def numeric_density_sequence(params: WeightParams, i: int, s_max: int,
                             precision: int = DEFAULT_PRECISION):
    """Numeric omega_i(s) for s = 0..s_max; works for non-integer beta."""
    with mpmath.workprec(precision):
        q = fraction_to_mpf(params.q, precision)
        a = fraction_to_mpf(params.alphas[i], precision)
        qb = q ** fraction_to_mpf(params.beta, precision)
        out = []
        v = mpmath.mpf(1)
        qs = mpmath.mpf(1)
        root = mpmath.sqrt(q)
        for s in range(s_max + 1):
            out.append(v * qs / root)
            v = v * a * (1 - qb * qs) / (1 - qs * q)
            qs *= q
        return out


def weight_tail_constant(params: WeightParams, i: int, k: int, precision: int):
    """C with [s]^{(k)} omega_i(s) <= C (alpha_i q)**s for every s >= 0."""
    with mpmath.workprec(precision + 16):
        q = fraction_to_mpf(params.q, precision + 16)
        return (1 - q) ** (-k) / mpmath.sqrt(q) / qq_infinity_lower_bound(params.q, precision)


def tail_cutoff(ratio, constant, tol, start: int = 0) -> int:
    """Smallest S >= start with constant * ratio**(S+1) / (1 - ratio) < tol."""
    if constant * ratio ** (start + 1) / (1 - ratio) < tol:
        return start
    S = int(mpmath.ceil(mpmath.log(tol * (1 - ratio) / constant) / mpmath.log(ratio))) - 1
    S = max(S, start)
    while constant * ratio ** (S + 1) / (1 - ratio) >= tol:
        S += 1
    return S


def truncated_moment(params: WeightParams, i: int, k: int, tol=mpmath.mpf(10) ** -30,
                     precision: int = DEFAULT_PRECISION):
    """Partial sum of [s]^{(k)} omega_i(s) with a certified tail.

    Returns ``(value, bound)`` where ``bound`` is the geometric tail bound
    actually achieved (below ``tol``).  Terms with s < k vanish, so the sum
    starts at s = k.  Works for non-integer beta.
    """
    with mpmath.workprec(precision):
        tol = mpmath.mpf(tol)
        q = fraction_to_mpf(params.q, precision)
        ratio = fraction_to_mpf(params.alphas[i], precision) * q
        C = weight_tail_constant(params, i, k, precision)
        S = tail_cutoff(ratio, C, tol, start=k)
        dens = numeric_density_sequence(params, i, S, precision + 16)
        total = mpmath.mpf(0)
        for s in range(k, S + 1):
            fac = mpmath.mpf(1)
            for j in range(k):
                fac *= (q ** (s - j) - 1) / (q - 1)
            total += fac * dens[s]
        bound = C * ratio ** (S + 1) / (1 - ratio)
        return +total, +bound


def numeric_lattice_x(q, s: int):
    return (q ** s - 1) / (q - 1)
