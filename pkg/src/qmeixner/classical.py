"""Classical (q -> 1) multiple Meixner polynomials of the first kind.

The weights are upsilon_i(x) = (beta)_x alpha_i**x / x! on x = 0, 1, 2, ...
and the monic family M_n satisfies

    sum_x M_n(x) (-x)_j upsilon_i(x) = 0,   0 <= j < n_i.

Polynomials are :class:`LatticePolynomial` objects with plain Fraction
coefficients; the variable is the linear lattice x(s) = s.  Exact paths need
an integer beta; the truncated-sum oracle works for any beta > 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

from .errors import (
    BetaUnderflow,
    DegreeCertificateFailure,
    InvalidParams,
    NonIntegerBeta,
    NotMonic,
    TailBoundFailure,
)
from .index import MultiIndex, as_index
from .lattice import LatticePolynomial
from .scalars import DEFAULT_PRECISION, fraction_to_mpf


def _frac(x, name: str) -> Fraction:
    if isinstance(x, float):
        raise InvalidParams(f"{name} must be given exactly, not as a float")
    try:
        return Fraction(x)
    except (TypeError, ValueError) as exc:
        raise InvalidParams(f"cannot read {name}={x!r} as a rational") from exc


@dataclass(frozen=True)
class ClassicalParams:
    alphas: tuple
    beta: Fraction

    def __post_init__(self):
        alphas = tuple(_frac(a, "alpha") for a in self.alphas)
        beta = _frac(self.beta, "beta")
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "beta", beta)
        if not alphas:
            raise InvalidParams("need at least one alpha")
        for a in alphas:
            if not 0 < a < 1:
                raise InvalidParams(f"alpha must lie in (0, 1), got {a}")
        if len(set(alphas)) != len(alphas):
            raise InvalidParams("alphas must be pairwise distinct")
        if beta <= 0:
            raise InvalidParams(f"beta must be positive, got {beta}")

    @property
    def r(self) -> int:
        return len(self.alphas)

    def require_exact(self) -> int:
        if self.beta.denominator != 1:
            raise NonIntegerBeta(f"exact classical path needs an integer beta, got {self.beta}")
        return int(self.beta)

    def with_beta(self, beta) -> ClassicalParams:
        return ClassicalParams(self.alphas, beta)

    def to_json(self) -> dict:
        return {"alphas": [str(a) for a in self.alphas], "beta": str(self.beta)}


_X = LatticePolynomial([Fraction(0), Fraction(1)])


def classical_recurrence_coeffs(params: ClassicalParams, n, k: int):
    """``(b, [d_i])`` with x M_n = M_{n+e_k} + b M_n + sum_i d_i M_{n-e_i}."""
    n = as_index(n, params.r)
    N = n.norm
    beta = params.beta
    ak = params.alphas[k]
    b = (beta + N) * ak / (1 - ak) + sum(Fraction(ni) / (1 - a) for a, ni in zip(params.alphas, n))
    d = [a * ni * (beta + N - 1) / (a - 1) ** 2 for a, ni in zip(params.alphas, n)]
    return b, d


@lru_cache(maxsize=None)
def _ar_member(params: ClassicalParams, n: MultiIndex) -> LatticePolynomial:
    if n.norm == 0:
        return LatticePolynomial([Fraction(1)])
    k = max(i for i in range(params.r) if n[i] > 0)
    m = n.lowered(k)
    b, d = classical_recurrence_coeffs(params, m, k)
    out = _ar_member(params, m) * _X - _ar_member(params, m) * b
    for i in range(params.r):
        if m[i] > 0:
            out = out - _ar_member(params, m.lowered(i)) * d[i]
    return out


def classical_construct(params: ClassicalParams, n) -> LatticePolynomial:
    """Monic M_n built from M_0 = 1 by the recurrence (last nonzero component first)."""
    return _ar_member(params, as_index(n, params.r))


# -- raising operator and difference equation ---------------------------------------

def _raise(alpha: Fraction, beta, p: LatticePolynomial) -> LatticePolynomial:
    shifted = p.compose_linear(Fraction(1), Fraction(-1))
    body = p * (_X + (beta - 1)) * alpha - _X * shifted
    return body * (1 / (1 - alpha))


def classical_raising_apply(params: ClassicalParams, i: int, p: LatticePolynomial) -> LatticePolynomial:
    """[alpha_i (beta - 1 + x) p(x) - x p(x - 1)] / (1 - alpha_i).

    Maps M_n at beta to -M_{n+e_i} at beta - 1.
    """
    return _raise(params.alphas[i], params.beta, p)


def classical_raising_residual(params: ClassicalParams, n, i: int) -> LatticePolynomial:
    n = as_index(n, params.r)
    if params.beta - 1 <= 0:
        raise BetaUnderflow(f"raising needs beta > 1, got {params.beta}")
    lhs = classical_raising_apply(params, i, classical_construct(params, n))
    return lhs + classical_construct(params.with_beta(params.beta - 1), n.raised(i))


def _chain(params: ClassicalParams, order, p: LatticePolynomial, beta) -> LatticePolynomial:
    for i in order:
        p = _raise(params.alphas[i], beta, p)
        beta -= 1
    return p


def classical_diffeq_residual(params: ClassicalParams, n) -> LatticePolynomial:
    """prod_i R_i Delta M_n + sum_i n_i prod_{j != i} R_j M_n, chained.

    The operand Delta M_n is a combination of members at beta + 1, so the
    first operator on the left is built at beta + 1; on the right the first
    one acts on M_n at beta.  Each raising lowers the beta tag by one.
    """
    n = as_index(n, params.r)
    if params.beta < params.r + 1:
        raise BetaUnderflow(f"difference equation needs beta >= r + 1 = {params.r + 1}")
    M = classical_construct(params, n)
    dM = M.compose_linear(Fraction(1), Fraction(1)) - M
    out = _chain(params, range(params.r), dM, params.beta + 1)
    for i in range(params.r):
        if n[i]:
            others = [j for j in range(params.r) if j != i]
            out = out + _chain(params, others, M, params.beta) * n[i]
    return out


# -- Rodrigues formula ----------------------------------------------------------------

def _rising(a, k: int):
    out = Fraction(1)
    for j in range(k):
        out *= a + j
    return out


def _newton_interpolate(values) -> LatticePolynomial:
    """Polynomial through (t, values[t]), t = 0, 1, ..., via forward differences."""
    diffs = list(values)
    poly = LatticePolynomial()
    basis = LatticePolynomial([Fraction(1)])
    for k in range(len(values)):
        poly = poly + basis * diffs[0]
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
        basis = basis * (_X - k) * Fraction(1, k + 1)
    return poly


def classical_rodrigues_values(params: ClassicalParams, n, points: int) -> list:
    """Rodrigues right-hand side at x = 0 .. points - 1."""
    n = as_index(n, params.r)
    beta = params.require_exact()
    N = n.norm
    vals = [_rising(beta + N, x) / _rising(1, x) for x in range(points)]
    for a, ni in zip(params.alphas, n):
        # alpha**(-x) nabla**ni alpha**x, with zeros to the left of x = 0
        g = [a ** x * v for x, v in enumerate(vals)]
        for _ in range(ni):
            g = [g[0]] + [g[x] - g[x - 1] for x in range(1, points)]
        vals = [v / a ** x for x, v in enumerate(g)]
    pref = _rising(beta, N)
    for a, ni in zip(params.alphas, n):
        pref *= (a / (a - 1)) ** ni
    return [pref * v * _rising(1, x) / _rising(beta, x) for x, v in enumerate(vals)]


def classical_rodrigues(params: ClassicalParams, n) -> LatticePolynomial:
    n = as_index(n, params.r)
    N = n.norm
    poly = _newton_interpolate(classical_rodrigues_values(params, n, N + 2))
    if poly.degree != N:
        raise DegreeCertificateFailure(f"Rodrigues values at n={tuple(n)} have degree {poly.degree}")
    if not poly.is_monic():
        raise NotMonic(f"classical Rodrigues output at n={tuple(n)} has leading coefficient {poly.lc}")
    return poly


# -- truncated-sum moment oracle --------------------------------------------------------

def _term_ratio_bound(alpha, beta, S: int, power: int, j: int):
    """Upper bound, valid for every x >= S, on t(x+1)/t(x) for
    t(x) = x**power |(-x)_j| upsilon(x)."""
    rho = alpha * max(mpmath.mpf(1), (beta + S) / (S + 1))
    rho *= ((S + 1) / mpmath.mpf(S)) ** power if S > 0 else mpmath.inf
    rho *= (S + 1) / mpmath.mpf(S + 1 - j) if S + 1 > j else mpmath.inf
    return rho


def classical_moment(params: ClassicalParams, i: int, j: int, power: int,
                     tol=mpmath.mpf(10) ** -40, precision: int = DEFAULT_PRECISION,
                     max_terms: int = 200000):
    """sum_x x**power (-x)_j upsilon_i(x), truncated with a certified tail.

    Returns ``(value, bound)``.
    """
    with mpmath.workprec(precision):
        tol = mpmath.mpf(tol)
        if tol < mpmath.mpf(2) ** (-(precision - 16)):
            raise TailBoundFailure(f"tolerance {tol} unreachable at {precision} bits")
        a = fraction_to_mpf(params.alphas[i], precision)
        beta = fraction_to_mpf(params.beta, precision)
        total = mpmath.mpf(0)
        w = mpmath.mpf(1)  # upsilon at x
        for x in range(max_terms):
            poch = mpmath.mpf(1)
            for t in range(j):
                poch *= t - x
            term = mpmath.mpf(x) ** power * poch * w if (x or power == 0) else mpmath.mpf(0)
            total += term
            if x > j + 1:
                rho = _term_ratio_bound(a, beta, x, power, j)
                if rho < 1:
                    bound = abs(term) * rho / (1 - rho)
                    if bound < tol:
                        return +total, +bound
            w = w * a * (beta + x) / (x + 1)
        raise TailBoundFailure(f"tail still above {tol} after {max_terms} terms")


def classical_numeric_oracle(params: ClassicalParams, n, tol=mpmath.mpf(10) ** -40,
                             precision: int = DEFAULT_PRECISION) -> list:
    """Monic coefficients (constant first) of M_n from truncated-sum moments."""
    n = as_index(n, params.r)
    N = n.norm
    if N == 0:
        return [mpmath.mpf(1)]
    with mpmath.workprec(precision):
        rows, rhs = [], []
        for i in range(params.r):
            for j in range(n[i]):
                row = [classical_moment(params, i, j, m, tol, precision)[0] for m in range(N + 1)]
                rows.append(row[:N])
                rhs.append(-row[N])
        sol = mpmath.lu_solve(mpmath.matrix(rows), mpmath.matrix(rhs))
        return [sol[m] for m in range(N)] + [mpmath.mpf(1)]


def classical_orthogonality_residual(params: ClassicalParams, coeffs, i: int, j: int,
                                     tol=mpmath.mpf(10) ** -40,
                                     precision: int = DEFAULT_PRECISION):
    """sum_x p(x) (-x)_j upsilon_i(x) for p with the given monomial coefficients."""
    with mpmath.workprec(precision):
        acc = mpmath.mpf(0)
        for m, c in enumerate(coeffs):
            if c:
                c = fraction_to_mpf(c, precision) if isinstance(c, Fraction) else mpmath.mpf(c)
                acc += c * classical_moment(params, i, j, m, tol, precision)[0]
        return +acc
