import threading
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qmeixner.errors import CacheMiss, CoefficientMismatch, NotMonic
from qmeixner.formulas import normalization_K
from qmeixner.index import MultiIndex, as_index, indices_up_to
from qmeixner.lattice import LatticePolynomial
from qmeixner.mop import (
    FamilyCache,
    construct,
    orthogonality_residuals,
    recurrence_coeffs_moments,
    recurrence_coeffs_oracle,
    recurrence_construct,
    recurrence_step,
    rodrigues_construct,
    rodrigues_values,
    solve_orthogonality,
)
from qmeixner.weights import WeightParams

P1 = WeightParams("1/4", ("1/3",), 1)
PR = WeightParams("1/4", ("1/3", "1/5"), 2)


def coeffs(p):
    return [c.rational() for c in p.poly.coeffs]


def test_multi_index():
    n = MultiIndex((2, 0, 3))
    assert n.norm == 5 and n.partial(0) == 0 and n.partial(2) == 2
    assert n.raised(1) == (2, 1, 3) and n.lowered(2) == (2, 0, 2)
    with pytest.raises(ValueError):
        n.lowered(1)
    with pytest.raises(ValueError):
        MultiIndex((1, -1))
    assert len(indices_up_to(2, 4)) == 15
    assert len(indices_up_to(3, 3)) == 20


def test_frozen_oracle_values():
    assert coeffs(solve_orthogonality(P1, (0,))) == [1]
    assert coeffs(solve_orthogonality(P1, (1,))) == [Fraction(-4, 47), 1]
    assert coeffs(solve_orthogonality(P1, (2,))) == [Fraction(80, 146497), Fraction(-792, 767), 1]
    assert coeffs(solve_orthogonality(PR, (1, 1))) == [
        Fraction(1680, 980993), Fraction(-1023896, 980993), 1]
    assert coeffs(solve_orthogonality(PR, (2, 0))) == [
        Fraction(1680, 2355457), Fraction(-3176, 3071), 1]


def test_root_is_first_moment_ratio():
    a, q = Fraction(1, 3), Fraction(1, 4)
    assert solve_orthogonality(P1, (1,)).poly.coeff(0) == -(a * q / (1 - a * q ** 2))


@pytest.mark.parametrize("n", indices_up_to(2, 3))
def test_orthogonality_exact(n):
    for method in ("oracle", "rodrigues", "recurrence"):
        p = construct(PR, n, method)
        assert p.poly.is_monic() and p.degree == n.norm
        assert all(v == 0 for _, _, v in orthogonality_residuals(PR, n, p.poly))


def test_normality_check_is_sharp():
    # one more condition than the index allows is not satisfied
    p = solve_orthogonality(PR, (1, 1)).poly
    assert any(v != 0 for _, _, v in orthogonality_residuals(PR, (2, 1), p))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2), st.integers(0, 2))
def test_permutation_equivariance(a, b):
    swapped = WeightParams("1/4", ("1/5", "1/3"), 2)
    assert solve_orthogonality(PR, (a, b)).poly == solve_orthogonality(swapped, (b, a)).poly


def test_rodrigues_examples():
    assert rodrigues_construct(P1, (0,)).poly == LatticePolynomial([P1.field(1)])
    assert coeffs(rodrigues_construct(P1, (1,))) == [Fraction(-4, 47), 1]
    assert rodrigues_construct(PR, (1, 1)).poly == solve_orthogonality(PR, (1, 1)).poly


def test_rodrigues_operator_order_irrelevant():
    n = as_index((2, 1), 2)
    assert rodrigues_values(PR, n, order=[0, 1]) == rodrigues_values(PR, n, order=[1, 0])


def test_normalization_constant():
    assert normalization_K(PR, (0, 0)) == 1
    f = P1.field
    q, a, b = P1.q, P1.alphas[0], 1
    assert normalization_K(P1, (1,)) == (q ** b - 1) / (q - 1) * f.sqrt_q * a / (a * q ** (b + 1) - 1)
    for n in indices_up_to(2, 3):
        assert normalization_K(PR, n) != 0


def test_recurrence_path_independence():
    cache = FamilyCache(PR, "recurrence")
    for n in [(0, 0), (1, 0), (0, 1)]:
        cache.insert(n, solve_orthogonality(PR, n).poly)
    via_first = recurrence_step(PR, (1, 0), 1, cache)
    via_second = recurrence_step(PR, (0, 1), 0, cache)
    assert via_first == via_second == solve_orthogonality(PR, (1, 1)).poly


def test_moment_and_oracle_coefficients_agree():
    fam = FamilyCache(PR, "oracle")
    for n in indices_up_to(2, 4):
        fam.insert(n, solve_orthogonality(PR, n).poly)
    for n in indices_up_to(2, 3):
        for k in range(2):
            assert recurrence_coeffs_moments(PR, n, k, fam) == recurrence_coeffs_oracle(PR, n, k)
            b, d = recurrence_coeffs_oracle(PR, n, k)
            assert all(d[i] == 0 for i in range(2) if n[i] == 0)


def test_oracle_b_at_zero():
    b, d = recurrence_coeffs_oracle(P1, (0,), 0)
    assert b == Fraction(4, 47) and d == [0]


def test_formula_path_reports_mismatch():
    cache = FamilyCache(P1, "formula")
    cache.insert((0,), LatticePolynomial([P1.field(1)]))
    with pytest.raises(CoefficientMismatch, match="b: formula"):
        recurrence_step(P1, (0,), 0, cache, coefficients="formula")


def test_cache_contract():
    cache = FamilyCache(PR, "oracle")
    with pytest.raises(CacheMiss):
        cache[(1, 0)]
    p = solve_orthogonality(PR, (1, 0)).poly
    threads = [threading.Thread(target=cache.insert, args=((1, 0), p)) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert cache[(1, 0)] == p and len(cache) == 1
    with pytest.raises(NotMonic):
        cache.insert((0, 1), LatticePolynomial([PR.field(2)]))
    with pytest.raises(CoefficientMismatch):
        cache.insert((1, 0), solve_orthogonality(PR, (0, 1)).poly)


def test_recurrence_r3():
    p3 = WeightParams("1/4", ("1/3", "1/5", "1/7"), 3)
    assert recurrence_construct(p3, (1, 1, 1)).poly == solve_orthogonality(p3, (1, 1, 1)).poly


def test_json_shape():
    obj = construct(P1, (1,), "oracle").to_json()
    assert obj == {"n": [1], "method": "oracle", "monic": True,
                   "coeffs": [{"a": "-4/47", "b": "0"}, {"a": "1", "b": "0"}]}
