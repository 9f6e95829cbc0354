"""Verification suites producing structured reports.

Each entry is ``{identity, params, n, status, residual}`` plus an optional
``detail``.  Statuses:

``exact-pass``           the identity holds with zero residual
``mismatch``             a hard identity failed (makes the suite fail)
``mismatch-documented``  a known disagreement with a printed closed form, or
                         a residual under an interpretive convention; reported
                         but not a failure
``skipped``              the parameters needed for the check are out of range
"""
from __future__ import annotations

from .errors import InconsistentSystem, InvalidParams
from .formulas import monic_formula_coeffs
from .index import indices_up_to
from .lattice import GridFunction, LatticePolynomial
from .mop import (
    _ratio_table,
    construct,
    family_cache,
    orthogonality_residuals,
    recurrence_coeffs_moments,
    recurrence_coeffs_oracle,
)
from .operators import (
    difference_equation_residual,
    lemma51_identity_check,
    lowering_coefficient,
    lowering_expand,
    lowering_projection,
    raising_residual,
)
from .scalars import QScalar
from .weights import WeightParams

SUITES = ("orthogonality", "raising", "lowering", "diffeq", "recurrence", "kratio", "lemma51")
PASS, MISMATCH, DOCUMENTED, SKIPPED = "exact-pass", "mismatch", "mismatch-documented", "skipped"


def _residual_json(res):
    if res is None:
        return None
    if isinstance(res, LatticePolynomial):
        return res.to_json()
    if isinstance(res, QScalar):
        return res.to_json()
    if isinstance(res, GridFunction):
        return {"s_min": res.s_min, "values": [v.to_json() for v in res.values]}
    return str(res)


def _is_zero(res) -> bool:
    if isinstance(res, LatticePolynomial):
        return res.is_zero()
    if isinstance(res, GridFunction):
        return all(v == 0 for v in res.values)
    return res == 0


def _entry(identity, params, n, status, residual=None, detail=None) -> dict:
    out = {"identity": identity, "params": params.to_json(),
           "n": None if n is None else list(n), "status": status,
           "residual": _residual_json(residual)}
    if detail is not None:
        out["detail"] = detail
    return out


def _hard(identity, params, n, residual, detail=None) -> dict:
    return _entry(identity, params, n, PASS if _is_zero(residual) else MISMATCH, residual, detail)


def suite_orthogonality(params: WeightParams, max_order: int) -> list:
    out = []
    for n in indices_up_to(params.r, max_order):
        polys = {m: construct(params, n, m).poly for m in ("oracle", "rodrigues", "recurrence")}
        for method, P in polys.items():
            worst = next((v for _, _, v in orthogonality_residuals(params, n, P) if v != 0),
                         params.field(0))
            out.append(_hard(f"orthogonality.{method}", params, n, worst))
        for method in ("rodrigues", "recurrence"):
            out.append(_hard(f"agreement.oracle-{method}", params, n, polys[method] - polys["oracle"]))
    return out


def suite_raising(params: WeightParams, max_order: int) -> list:
    out = []
    for n in indices_up_to(params.r, max_order):
        for i in range(params.r):
            name = f"raising.i{i + 1}"
            try:
                res = raising_residual(params, n, i)
            except InvalidParams as exc:
                out.append(_entry(name, params, n, SKIPPED, detail=str(exc)))
                continue
            out.append(_hard(name, params, n, res))
    return out


def suite_lowering(params: WeightParams, max_order: int) -> list:
    out = []
    for n in indices_up_to(params.r, max_order):
        if n.norm == 0:
            continue
        _, res = lowering_expand(params, n, check=False)
        detail = None
        if not res.is_zero():
            try:
                exact = lowering_projection(params, n)
                printed = [lowering_coefficient(params, n, i) if n[i] else params.field(0)
                           for i in range(params.r)]
                detail = {"exact_coefficients": [str(c) for c in exact],
                          "printed_coefficients": [str(c) for c in printed]}
            except InconsistentSystem:
                detail = "Delta M_n is not in the span of the lowered members"
        out.append(_hard("lowering", params, n, res, detail))
    return out


def suite_diffeq(params: WeightParams, max_order: int) -> list:
    out = []
    for n in indices_up_to(params.r, max_order):
        try:
            res = difference_equation_residual(params, n)
        except InvalidParams as exc:
            out.append(_entry("diffeq", params, n, SKIPPED, detail=str(exc)))
            continue
        if params.r == 1 or res.is_zero():
            out.append(_hard("diffeq", params, n, res))
        else:
            out.append(_entry("diffeq", params, n, DOCUMENTED, res,
                              "nonzero under the chain composition convention"))
    return out


def suite_recurrence(params: WeightParams, max_order: int) -> list:
    out = []
    fam = family_cache(params, "oracle")
    for n in indices_up_to(params.r, max_order):
        fam.insert(n, construct(params, n, "oracle").poly)
        for i in range(params.r):
            if n[i]:
                fam.insert(n.lowered(i), construct(params, n.lowered(i), "oracle").poly)
        for k in range(params.r):
            tag = f"k{k + 1}"
            try:
                ob, od = recurrence_coeffs_oracle(params, n, k)
            except InconsistentSystem as exc:
                out.append(_entry(f"recurrence.oracle-projection.{tag}", params, n, MISMATCH,
                                  detail=str(exc)))
                continue
            out.append(_entry(f"recurrence.oracle-projection.{tag}", params, n, PASS, 0))
            mb, md = recurrence_coeffs_moments(params, n, k, fam)
            diffs = [mb - ob] + [a - b for a, b in zip(md, od)]
            worst = next((d for d in diffs if d != 0), params.field(0))
            out.append(_hard(f"recurrence.moments-vs-oracle.{tag}", params, n, worst))
            fb, up, fd = monic_formula_coeffs(params, n, k)
            out.append(_hard(f"recurrence.c.{tag}", params, n, up - 1))
            status = PASS if fb == ob else DOCUMENTED
            out.append(_entry(f"recurrence.b.{tag}", params, n, status, fb - ob,
                              {"formula": str(fb), "oracle": str(ob)}))
            for i in range(params.r):
                if not n[i]:
                    continue
                status = PASS if fd[i] == od[i] else DOCUMENTED
                out.append(_entry(f"recurrence.d{i + 1}.{tag}", params, n, status, fd[i] - od[i],
                                  {"formula": str(fd[i]), "oracle": str(od[i])}))
    return out


def suite_kratio(params: WeightParams, max_order: int) -> list:
    out = []
    for n in indices_up_to(params.r, max_order):
        for k in range(params.r):
            _, up, _ = monic_formula_coeffs(params, n, k)
            out.append(_hard(f"kratio.k{k + 1}", params, n, up - 1))
    return out


def lemma51_test_function(params: WeightParams, n_i: int) -> GridFunction:
    """(q**beta; q)_s / (q; q)_s on a window wide enough for n_i differences."""
    beta = params.require_exact()
    hi = 3 * n_i + 3
    ratios = _ratio_table(params, beta, hi)
    return GridFunction.sample(lambda s: ratios[s] if s >= 0 else params.field(0), -1, hi,
                               zero_below_zero=True)


def suite_lemma51(params: WeightParams, max_order: int) -> list:
    out = []
    for i in range(params.r):
        for n_i in range(1, max_order + 1):
            n = [0] * params.r
            n[i] = n_i
            res = lemma51_identity_check(params, n_i, i, lemma51_test_function(params, n_i))
            status = PASS if _is_zero(res) else DOCUMENTED
            out.append(_entry(f"lemma51.i{i + 1}", params, n, status, res,
                              "undefined operator read as M_{n_i}"))
    return out


_RUNNERS = {
    "orthogonality": suite_orthogonality,
    "raising": suite_raising,
    "lowering": suite_lowering,
    "diffeq": suite_diffeq,
    "recurrence": suite_recurrence,
    "kratio": suite_kratio,
    "lemma51": suite_lemma51,
}


def run_suite(params: WeightParams, suite: str, max_order: int = 4) -> list:
    params.require_exact()
    if suite == "all":
        return [e for name in SUITES for e in _RUNNERS[name](params, max_order)]
    if suite not in _RUNNERS:
        raise InvalidParams(f"unknown suite {suite!r}; choose from {SUITES + ('all',)}")
    return _RUNNERS[suite](params, max_order)


def report_passed(report: list) -> bool:
    """True unless some hard identity failed."""
    return all(e["status"] != MISMATCH for e in report)
