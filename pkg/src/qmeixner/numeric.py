"""High-precision numerics: q -> 1 limit studies, certified real zeros, and
orthogonality for non-integer beta."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .classical import ClassicalParams, classical_recurrence_coeffs
from .errors import (
    BracketingFailure,
    InvalidParams,
    PrecisionExhausted,
    TailBoundFailure,
    ZeroCountMismatch,
)
from .index import as_index
from .lattice import LatticePolynomial, lattice_x, qstirling_poly
from .mop import MopPolynomial, recurrence_coeffs_oracle, solve_orthogonality
from .scalars import DEFAULT_PRECISION, QScalar, fraction_to_mpf
from .weights import (
    WeightParams,
    _linearization,
    numeric_density_sequence,
    tail_cutoff,
    truncated_moment,
    weight_tail_constant,
)

#: exact q-side arithmetic is abandoned once a coefficient needs more bits than this
MAX_EXACT_BITS = 1 << 20

LIMIT_COLUMNS = ("m", "q", "coeff_name", "q_value", "classical_value", "abs_error", "ratio")


def _num(c, precision: int) -> mpmath.mpf:
    if isinstance(c, QScalar):
        return c.to_numeric(precision)
    if isinstance(c, Fraction):
        return fraction_to_mpf(c, precision)
    return mpmath.mpf(c)


def _bits(c: QScalar) -> int:
    return max(x.numerator.bit_length() + x.denominator.bit_length() for x in (c.a, c.b))


# -- q -> 1 limit --------------------------------------------------------------------

@dataclass(frozen=True)
class LimitRow:
    m: int
    q: Fraction
    coeff_name: str
    q_value: mpmath.mpf
    classical_value: Fraction
    abs_error: mpmath.mpf
    ratio: mpmath.mpf | None

    def as_strings(self, digits: int = 20) -> list:
        ratio = "" if self.ratio is None else mpmath.nstr(self.ratio, digits)
        return [str(self.m), str(self.q), self.coeff_name, mpmath.nstr(self.q_value, digits),
                str(self.classical_value), mpmath.nstr(self.abs_error, digits), ratio]


def limit_study(classical: ClassicalParams, n, k: int, m_range, precision: int = DEFAULT_PRECISION) -> list:
    """Errors of the q-side recurrence coefficients (b, d_i) at q_m = 1 - 2**-m
    against the classical values, one row per (m, coefficient).

    The q side is computed exactly and converted only for the comparison.
    ``ratio`` is abs_error(m) / abs_error(previous m) for the same coefficient.
    """
    classical.require_exact()
    n = as_index(n, classical.r)
    m_range = list(m_range)
    if any(m < 2 for m in m_range):
        raise InvalidParams("m must be at least 2")
    cb, cd = classical_recurrence_coeffs(classical, n, k)
    names = ["b"] + [f"d{i + 1}" for i in range(classical.r) if n[i] > 0]
    targets = {"b": cb, **{f"d{i + 1}": cd[i] for i in range(classical.r)}}
    rows = []
    prev = {}
    for m in m_range:
        q = 1 - Fraction(1, 2 ** m)
        params = WeightParams(q, classical.alphas, classical.beta)
        b, d = recurrence_coeffs_oracle(params, n, k)
        got = {"b": b, **{f"d{i + 1}": d[i] for i in range(classical.r)}}
        for name in names:
            if _bits(got[name]) > MAX_EXACT_BITS:
                raise PrecisionExhausted(f"coefficient {name} at m={m} exceeds {MAX_EXACT_BITS} bits")
            with mpmath.workprec(precision):
                qv = got[name].to_numeric(precision)
                err = abs(qv - fraction_to_mpf(targets[name], precision))
                ratio = err / prev[name] if name in prev and prev[name] else None
            rows.append(LimitRow(m, q, name, qv, targets[name], err, ratio))
            prev[name] = err
    return rows


def limit_table_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(LIMIT_COLUMNS)
    for row in rows:
        w.writerow(row.as_strings())
    return buf.getvalue()


def limit_contract(rows, band=(0.25, 0.75), tail: int = 3) -> dict:
    """Per coefficient: are errors strictly decreasing, and do the last ``tail``
    ratios lie in ``band``?"""
    out = {}
    for name in dict.fromkeys(r.coeff_name for r in rows):
        sub = [r for r in rows if r.coeff_name == name]
        errs = [r.abs_error for r in sub]
        monotone = all(b < a for a, b in zip(errs, errs[1:]))
        ratios = [r.ratio for r in sub[-tail:]]
        in_band = all(r is not None and band[0] <= r <= band[1] for r in ratios)
        out[name] = {"monotone": monotone, "in_band": in_band,
                     "ratios": [None if r is None else float(r) for r in ratios]}
    return out


# -- zeros ---------------------------------------------------------------------------

def numeric_coeffs(p, precision: int) -> list:
    poly = p.poly if isinstance(p, MopPolynomial) else p
    return [_num(c, precision) for c in poly.coeffs]


def _horner(coeffs, x):
    acc = mpmath.mpf(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _bisect(coeffs, lo, hi, flo, steps: int):
    for _ in range(steps):
        mid = (lo + hi) / 2
        fm = _horner(coeffs, mid)
        if fm == 0:
            return mid, mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo, hi


def find_zeros(p: MopPolynomial, precision: int = DEFAULT_PRECISION, max_refine: int = 12) -> list:
    """All real zeros of ``p``, each certified by a sign change.

    Brackets come from the lattice nodes x(0), x(1), ... (which accumulate at
    1/(1-q)) subdivided ever more finely until the number of sign changes
    reaches the degree.  Each bracket is bisected to width 2**-(precision-8)
    relative to the hull, then Newton polishes the midpoint; a polished value
    that leaves its bracket is discarded in favour of the midpoint.
    """
    deg = p.degree
    if deg <= 0:
        return []
    q = p.params.q
    with mpmath.workprec(precision + 32):
        coeffs = numeric_coeffs(p, precision + 32)
        top = 1 / (1 - fraction_to_mpf(q, precision + 32))
        nodes = []
        s = 0
        while True:
            x = lattice_x(p.params.field, s).to_numeric(precision + 32)
            if top - x < top * mpmath.mpf(2) ** (-precision // 2):
                break
            nodes.append(x)
            s += 1
        nodes.append(top)
        brackets = []
        for level in range(max_refine):
            sub = 2 ** level
            pts = []
            for a, b in zip(nodes, nodes[1:]):
                pts.extend(a + (b - a) * t / sub for t in range(sub))
            pts.append(top)
            vals = [_horner(coeffs, x) for x in pts]
            brackets = []
            exact = []
            for x, v in zip(pts, vals):
                if v == 0:
                    exact.append(x)
            for (a, fa), (b, fb) in zip(zip(pts, vals), zip(pts[1:], vals[1:])):
                if fa != 0 and fb != 0 and (fa > 0) != (fb > 0):
                    brackets.append((a, b, fa))
            if exact:
                raise BracketingFailure("a scan point hit a zero exactly; shift the grid")
            if len(brackets) >= deg:
                break
        if len(brackets) != deg:
            raise ZeroCountMismatch(f"found {len(brackets)} sign changes for degree {deg}")
        steps = precision + 8
        dcoeffs = [c * m for m, c in enumerate(coeffs)][1:]
        zeros = []
        for a, b, fa in brackets:
            lo, hi = _bisect(coeffs, a, b, fa, steps)
            z = (lo + hi) / 2
            for _ in range(3):
                dv = _horner(dcoeffs, z)
                if dv == 0:
                    break
                z = z - _horner(coeffs, z) / dv
            if not a <= z <= b:
                z = (lo + hi) / 2
            zeros.append(z)
    with mpmath.workprec(precision):
        zeros = [+z for z in zeros]
        res = mpmath.mpf(2) ** (-(precision // 2))
        for z1, z2 in zip(zeros, zeros[1:]):
            if not z2 - z1 > res:
                raise ZeroCountMismatch("zeros not distinct at the working resolution")
        for z in zeros:
            if not 0 < z < top:
                raise BracketingFailure(f"zero {z} outside (0, 1/(1-q))")
    return zeros


def interlacing_report(params: WeightParams, n, k: int, precision: int = DEFAULT_PRECISION) -> dict:
    """Do the zeros of M_n strictly separate those of M_{n+e_k}?  Reported, not asserted."""
    n = as_index(n, params.r)
    small = find_zeros(solve_orthogonality(params, n), precision)
    big = find_zeros(solve_orthogonality(params, n.raised(k)), precision)
    interlace = all(big[j] < small[j] < big[j + 1] for j in range(len(small)))
    return {"n": list(n), "k": k + 1, "interlace": interlace,
            "zeros_n": [mpmath.nstr(z, 30) for z in small],
            "zeros_next": [mpmath.nstr(z, 30) for z in big]}


# -- numeric orthogonality --------------------------------------------------------------

def _factorial_numeric(field, m: int, precision: int) -> list:
    return [_num(c, precision) for c in qstirling_poly(field, m).coeffs]


def numeric_solve_orthogonality(params: WeightParams, n, tol=mpmath.mpf(10) ** -40,
                                precision: int = DEFAULT_PRECISION) -> LatticePolynomial:
    """Monic M_n with mpf coefficients from truncated-sum moments; any beta > 0."""
    n = as_index(n, params.r)
    N = n.norm
    with mpmath.workprec(precision):
        if N == 0:
            return LatticePolynomial([mpmath.mpf(1)])
        f = params.field
        top = max(n) + N
        mom = [[truncated_moment(params, i, m, tol, precision)[0] for m in range(top)]
               for i in range(params.r)]

        def mixed(i, j, k):
            lin = _linearization(f, min(j, k), max(j, k))
            return sum((_num(c, precision) * mom[i][m] for m, c in enumerate(lin) if c),
                       mpmath.mpf(0))

        lead = mpmath.mpf(1) / _num(qstirling_poly(f, N).lc, precision)
        rows, rhs = [], []
        for i in range(params.r):
            for k in range(n[i]):
                rows.append([mixed(i, m, k) for m in range(N)])
                rhs.append(-lead * mixed(i, N, k))
        sol = mpmath.lu_solve(mpmath.matrix(rows), mpmath.matrix(rhs))
        coeffs = [mpmath.mpf(0)] * (N + 1)
        for m in range(N + 1):
            c = lead if m == N else sol[m]
            for t, v in enumerate(_factorial_numeric(f, m, precision)):
                coeffs[t] += c * v
        coeffs[N] = mpmath.mpf(1)
        return LatticePolynomial(coeffs)


def numeric_orthogonality_residual(params: WeightParams, p, i: int, k: int,
                                   tol=mpmath.mpf(10) ** -30,
                                   precision: int = DEFAULT_PRECISION):
    """Truncated sum_s p(x(s)) [s]^{(k)} omega_i(s) with a certified tail.

    Returns ``(value, tail_bound)``.  The tail uses |p(x(s))| <= sum |c_m| / (1-q)**m
    on the support.
    """
    with mpmath.workprec(precision):
        tol = mpmath.mpf(tol)
        if tol < mpmath.mpf(2) ** (-(precision - 16)):
            raise TailBoundFailure(f"tolerance {tol} unreachable at {precision} bits")
        coeffs = numeric_coeffs(p, precision)
        q = fraction_to_mpf(params.q, precision)
        hull = 1 / (1 - q)
        pmax = sum((abs(c) * hull ** m for m, c in enumerate(coeffs)), mpmath.mpf(0))
        ratio = fraction_to_mpf(params.alphas[i], precision) * q
        C = weight_tail_constant(params, i, k, precision) * max(pmax, mpmath.mpf(1))
        S = tail_cutoff(ratio, C, tol, start=k)
        dens = numeric_density_sequence(params, i, S, precision + 16)
        total = mpmath.mpf(0)
        for s in range(k, S + 1):
            x = (q ** s - 1) / (q - 1)
            fac = mpmath.mpf(1)
            for j in range(k):
                fac *= (q ** (s - j) - 1) / (q - 1)
            total += _horner(coeffs, x) * fac * dens[s]
        return +total, C * ratio ** (S + 1) / (1 - ratio)
