"""Acceptance criteria 1-10, each at its stated tolerance.

Every test records one PASS/FAIL line, printed in the terminal summary.
"""
import time

import pytest

from qmeixner.classical import (
    ClassicalParams,
    classical_construct,
    classical_diffeq_residual,
    classical_raising_residual,
    classical_rodrigues,
)
from qmeixner.formulas import monic_formula_coeffs
from qmeixner.index import indices_up_to
from qmeixner.mop import (
    construct,
    orthogonality_residuals,
    recurrence_coeffs_oracle,
)
from qmeixner.numeric import find_zeros, limit_contract, limit_study
from qmeixner.operators import difference_equation_residual, lowering_expand, raising_residual
from qmeixner.scalars import fraction_to_mpf
from qmeixner.weights import WeightParams

R2 = WeightParams("1/4", ("1/3", "1/5"), 2)
R3 = WeightParams("1/4", ("1/3", "1/5", "1/7"), 3)
FAMILIES = [(R2, 4), (R3, 3)]


def test_c1_triple_agreement(acceptance_line):
    start = time.perf_counter()
    bad = []
    count = 0
    for params, top in FAMILIES:
        for n in indices_up_to(params.r, top):
            polys = [construct(params, n, m).poly for m in ("oracle", "rodrigues", "recurrence")]
            count += 1
            if not polys[0] == polys[1] == polys[2]:
                bad.append((params.r, tuple(n)))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 60
    acceptance_line(1, ok, f"triple agreement on {count} indices, {elapsed:.1f}s, mismatches {bad}")
    assert ok


def test_c2_exact_orthogonality(acceptance_line):
    bad = []
    for params, top in FAMILIES:
        for n in indices_up_to(params.r, top):
            for method in ("oracle", "rodrigues", "recurrence"):
                p = construct(params, n, method).poly
                if any(v != 0 for _, _, v in orthogonality_residuals(params, n, p)):
                    bad.append((method, tuple(n)))
    acceptance_line(2, not bad, f"all orthogonality residuals exactly 0; failures {bad}")
    assert not bad


def test_c3_raising(acceptance_line):
    bad = []
    checked = 0
    for alphas in (("1/9",), ("1/9", "1/25")):
        for beta in (2, 3, 4):
            params = WeightParams("1/4", alphas, beta)
            for n in indices_up_to(params.r, 3):
                for i in range(params.r):
                    checked += 1
                    if not raising_residual(params, n, i).is_zero():
                        bad.append((alphas, beta, tuple(n), i + 1))
    acceptance_line(3, not bad, f"raising identity exact in {checked} cases; failures {bad}")
    assert not bad


@pytest.mark.xfail(strict=True, raises=AssertionError,
                   reason="printed lowering coefficients miss the exact expansion at mixed r=2 indices")
def test_c4_lowering(acceptance_line):
    bad = []
    for params in (WeightParams("1/4", ("1/3",), 2), R2):
        for n in indices_up_to(params.r, 4):
            if n.norm and not lowering_expand(params, n, check=False)[1].is_zero():
                bad.append(tuple(n))
    acceptance_line(4, not bad, f"lowering residual exactly 0 for r<=2, |n|<=4; nonzero at {bad}")
    assert not bad


def test_c5_k_ratio(acceptance_line):
    bad = []
    for params in (WeightParams("1/4", ("1/3",), 1), R2):
        for n in indices_up_to(params.r, 4):
            for k in range(params.r):
                if monic_formula_coeffs(params, n, k)[1] != 1:
                    bad.append((tuple(n), k + 1))
    acceptance_line(5, not bad, f"c K_n/K_(n+e_k) = 1 for |n|<=4; failures {bad}")
    assert not bad


def test_c6_difference_equation(acceptance_line):
    p1 = WeightParams("1/4", ("1/9",), 3)
    bad = [n for n in range(5) if not difference_equation_residual(p1, (n,)).is_zero()]
    p2 = WeightParams("1/4", ("1/9", "1/25"), 4)
    nonzero = [tuple(n) for n in indices_up_to(2, 3)
               if not difference_equation_residual(p2, n).is_zero()]
    acceptance_line(6, not bad, f"r=1 residual 0 for n<=4; r=2 nonzero (reported) at {nonzero}")
    assert not bad


def test_c7_recurrence_comparison(acceptance_line):
    # oracle projection exists exactly everywhere (raises otherwise)
    checked = 0
    c_bad = []
    for params, top in [(WeightParams("1/4", ("1/3",), 1), 4), (R2, 4), (R3, 2)]:
        for n in indices_up_to(params.r, top):
            for k in range(params.r):
                recurrence_coeffs_oracle(params, n, k)
                checked += 1
                if monic_formula_coeffs(params, n, k)[1] != 1:
                    c_bad.append(tuple(n))
    p = WeightParams("1/4", ("1/3",), 1)
    ob, _ = recurrence_coeffs_oracle(p, (0,), 0)
    fb, _, _ = monic_formula_coeffs(p, (0,), 0)
    ok = ob == fb.field(4) / 47 and fb != ob and not c_bad
    acceptance_line(7, ok, f"{checked} projections exact; b at n=0: formula {fb} vs oracle {ob}; "
                           f"c disagreements {c_bad}")
    assert ok


def test_c8_limit(acceptance_line):
    start = time.perf_counter()
    classical = ClassicalParams(("1/3", "1/5"), 3)
    verdicts = {}
    for k in (0, 1):
        rows = limit_study(classical, (2, 1), k, range(4, 13))
        for name, v in limit_contract(rows, tail=3).items():
            verdicts[(k + 1, name)] = v
    elapsed = time.perf_counter() - start
    ok = all(v["monotone"] and v["in_band"] for v in verdicts.values()) and elapsed < 120
    worst = {key: [round(r, 4) for r in v["ratios"]] for key, v in verdicts.items()}
    acceptance_line(8, ok, f"monotone errors, final ratios {worst}, {elapsed:.1f}s")
    assert ok


def test_c9_zeros(acceptance_line):
    bad = []
    for params, top in FAMILIES:
        hull = fraction_to_mpf(1 / (1 - params.q), 256)
        for n in indices_up_to(params.r, top):
            zs = find_zeros(construct(params, n), 256)
            if len(zs) != n.norm or not all(0 < z < hull for z in zs) or len(set(zs)) != len(zs):
                bad.append(tuple(n))
    acceptance_line(9, not bad, f"|n| certified distinct zeros in (0, 1/(1-q)); failures {bad}")
    assert not bad


def test_c10_classical(acceptance_line):
    bad = []
    for params in (ClassicalParams(("1/3", "1/5"), 2), ClassicalParams(("1/3", "1/5", "1/7"), 3)):
        for n in indices_up_to(params.r, 3):
            if classical_construct(params, n) != classical_rodrigues(params, n):
                bad.append(("rodrigues", tuple(n)))
    raise_params = ClassicalParams(("1/3", "1/5"), 4)
    for n in indices_up_to(2, 3):
        for i in range(2):
            if not classical_raising_residual(raise_params, n, i).is_zero():
                bad.append(("raising", tuple(n), i + 1))
    p1 = ClassicalParams(("1/3",), 4)
    for n in range(4):
        if not classical_diffeq_residual(p1, (n,)).is_zero():
            bad.append(("diffeq", n))
    acceptance_line(10, not bad, f"AR = Rodrigues, raising exact, r=1 difference equation 0; failures {bad}")
    assert not bad
