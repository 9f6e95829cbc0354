from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from qmeixner.errors import InvalidParams, NonIntegerBeta, TransformInadmissible
from qmeixner.index import indices_up_to
from qmeixner.linalg import determinant
from qmeixner.mop import orthogonality_matrix
from qmeixner.weights import (
    ParamTransform,
    WeightParams,
    factorial_moment,
    measure_mass,
    mixed_moment,
    moment_table,
    qq_infinity_lower_bound,
    truncated_moment,
    weight_density,
)

P1 = WeightParams("1/4", ("1/3",), 1)
P2 = WeightParams("1/4", ("1/3",), 2)
PR = WeightParams("1/4", ("1/3", "1/5"), 2)


def test_validation():
    for bad in [("1", ("1/3",), 1), ("1/4", ("1",), 1), ("1/4", ("1/3",), 0), ("1/4", (), 1)]:
        with pytest.raises(InvalidParams):
            WeightParams(*bad)
    with pytest.raises(InvalidParams):
        WeightParams(0.25, ("1/3",), 1)
    # alpha ratio an integer power of q (including equal alphas)
    with pytest.raises(InvalidParams):
        WeightParams("1/4", ("1/3", "1/12"), 1)
    with pytest.raises(InvalidParams):
        WeightParams("1/4", ("1/3", "1/3"), 1)
    WeightParams("1/4", ("1/3", "1/5"), "3/2")


def test_exact_mode_gate():
    p = WeightParams("1/4", ("1/3",), "3/2")
    assert not p.exact
    with pytest.raises(NonIntegerBeta):
        factorial_moment(p, 0, 0)


def test_transforms():
    assert PR.with_alpha(0, Fraction(1, 12)).alphas == (Fraction(1, 12), Fraction(1, 5))
    with pytest.raises(TransformInadmissible):
        P1.with_alpha(0, Fraction(4, 3))
    t = ParamTransform.scale_one(PR, 1, Fraction(1, 4), 1)
    assert t.apply(PR) == WeightParams("1/4", ("1/3", "1/20"), 3)


def test_density_examples():
    assert weight_density(P2, 0, 0) == 1
    assert weight_density(P2, 0, 1) == Fraction(5, 12)
    for s in range(5):
        assert weight_density(P1, 0, s) == Fraction(1, 3) ** s


def test_mass_examples():
    assert measure_mass(P1, 0, 0) == 2
    p = WeightParams("1/2", ("1/3",), 2)
    assert measure_mass(p, 0, 0) == 1 / p.field.sqrt_q
    q, a, b = P2.q, P2.alphas[0], 2
    for s in range(6):
        ratio = measure_mass(P2, 0, s + 1) / measure_mass(P2, 0, s)
        assert ratio == a * q * (1 - q ** (b + s)) / (1 - q ** (s + 1))


def test_moment_examples():
    assert factorial_moment(P1, 0, 0) == Fraction(24, 11)
    assert factorial_moment(P1, 0, 1) == Fraction(96, 517)
    for p in (P1, P2):
        a, q = p.alphas[0], p.q
        acc = 1
        for j in range(int(p.beta)):
            acc *= 1 - a * q ** (j + 1)
        assert factorial_moment(p, 0, 0) == 2 / acc
    assert mixed_moment(PR, 1, 0, 3) == factorial_moment(PR, 1, 3)
    assert mixed_moment(PR, 0, 1, 1) == PR.q * factorial_moment(PR, 0, 2) + factorial_moment(PR, 0, 1)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 5), st.integers(0, 5), st.integers(0, 1))
def test_mixed_symmetry(j, k, i):
    assert mixed_moment(PR, i, j, k) == mixed_moment(PR, i, k, j)


@pytest.mark.parametrize("params", [PR, WeightParams("2/3", ("1/2", "1/7"), 3),
                                    WeightParams("1/2", ("1/3", "1/5", "1/7"), 1)])
def test_positivity(params):
    tab = moment_table(params, 12)
    assert all(tab[i, k] > 0 for i in range(params.r) for k in range(13))


@pytest.mark.parametrize("k", [0, 1, 3])
def test_closed_form_against_truncated_sum(k):
    tol = mpmath.mpf(10) ** -40
    val, bound = truncated_moment(P2, 0, k, tol, 256)
    assert bound < tol
    with mpmath.workprec(256):
        assert abs(val - factorial_moment(P2, 0, k).to_numeric(256)) <= tol


def test_truncated_refinement_and_start():
    a, _ = truncated_moment(P1, 0, 0, mpmath.mpf(10) ** -10)
    b, _ = truncated_moment(P1, 0, 0, mpmath.mpf(10) ** -20)
    assert abs(a - b) < mpmath.mpf(10) ** -10
    with mpmath.workprec(256):
        assert abs(a - mpmath.mpf(24) / 11) < mpmath.mpf(10) ** -10


def test_truncated_non_integer_beta():
    p = WeightParams("1/4", ("1/3",), "3/2")
    v1, _ = truncated_moment(p, 0, 0, mpmath.mpf(10) ** -30)
    # k = 0 closed form with the infinite product: q^(-1/2) (alpha q^(beta+1); q)_inf / (alpha q; q)_inf
    with mpmath.workprec(256):
        q, a = mpmath.mpf(1) / 4, mpmath.mpf(1) / 3
        ref = mpmath.qp(a * q ** mpmath.mpf(2.5), q) / mpmath.qp(a * q, q) / mpmath.sqrt(q)
        assert abs(v1 - ref) < mpmath.mpf(10) ** -29


def test_qq_infinity_bound():
    with mpmath.workprec(200):
        lb = qq_infinity_lower_bound(Fraction(1, 4), 200)
        true = mpmath.qp(mpmath.mpf(1) / 4)
        assert lb <= true and true - lb < 0.3


@pytest.mark.parametrize("params", [PR, WeightParams("1/3", ("1/2", "1/5", "1/7"), 2)])
def test_orthogonality_matrices_nonsingular(params):
    for n in indices_up_to(params.r, 4):
        if n.norm:
            rows = orthogonality_matrix(params, n)
            assert determinant([row[:n.norm] for row in rows]) != 0
