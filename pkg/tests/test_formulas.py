"""Printed closed forms compared with ground truth."""
from fractions import Fraction

import pytest

from qmeixner.formulas import monic_formula_coeffs, normalization_K, recurrence_b, recurrence_c, recurrence_d
from qmeixner.index import indices_up_to
from qmeixner.lattice import lattice_x
from qmeixner.mop import recurrence_coeffs_oracle
from qmeixner.weights import WeightParams

P1 = WeightParams("1/4", ("1/3",), 1)
PR = WeightParams("1/4", ("1/3", "1/5"), 2)


def test_c_at_zero():
    f = P1.field
    q, a = P1.q, P1.alphas[0]
    c = recurrence_c(P1, (0,), 0)
    assert c == a * q * lattice_x(f, 1) / (a * q ** 2 - 1) / f.sqrt_q
    assert c == normalization_K(P1, (1,)) / normalization_K(P1, (0,))


@pytest.mark.parametrize("params", [PR, WeightParams("1/2", ("1/3", "1/7"), 3),
                                    WeightParams("1/4", ("1/3", "1/5", "1/7"), 3)])
def test_k_ratio_identity(params):
    for n in indices_up_to(params.r, 3):
        for k in range(params.r):
            assert monic_formula_coeffs(params, n, k)[1] == 1


def test_b_discrepancy_at_zero():
    b = recurrence_b(P1, (0,), 0)
    assert b == Fraction(-53, 1034) == Fraction(4, 47) - Fraction(3, 22)
    assert recurrence_coeffs_oracle(P1, (0,), 0)[0] == Fraction(4, 47)


def test_b_disagrees_everywhere_tested():
    for n in indices_up_to(2, 3):
        for k in range(2):
            assert monic_formula_coeffs(PR, n, k)[0] != recurrence_coeffs_oracle(PR, n, k)[0]


def test_d_vanishes_with_component_and_disagrees_otherwise():
    for n in indices_up_to(2, 3):
        d = recurrence_d(PR, n)
        _, _, D = monic_formula_coeffs(PR, n, 0)
        _, od = recurrence_coeffs_oracle(PR, n, 0)
        for i in range(2):
            if n[i] == 0:
                assert d[i] == 0
            else:
                assert D[i] != od[i]
