from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qmeixner.errors import BetaUnderflow, NonzeroResidual, TransformInadmissible
from qmeixner.index import indices_up_to
from qmeixner.lattice import GridFunction, LatticePolynomial, delta_op, lattice_x, qnumber
from qmeixner.mop import solve_orthogonality
from qmeixner.operators import (
    difference_equation_residual,
    lemma51_identity_check,
    lowering_coefficient,
    lowering_expand,
    lowering_projection,
    raised_params,
    raising_apply,
    raising_operator,
    raising_residual,
)
from qmeixner.weights import WeightParams


@pytest.mark.parametrize("beta", [2, 3, 4])
@pytest.mark.parametrize("alphas", [("1/9",), ("1/9", "1/25")])
def test_raising_identity(alphas, beta):
    p = WeightParams("1/4", alphas, beta)
    for n in indices_up_to(p.r, 3):
        for i in range(p.r):
            assert raising_residual(p, n, i).is_zero()


def test_raising_of_one():
    p = WeightParams("1/4", ("1/9",), 3)
    out = raising_apply(p, (0,), 0, solve_orthogonality(p, (0,)))
    target = solve_orthogonality(raised_params(p, 0), (1,)).poly
    assert out == target * -p.field.sqrt_q


def test_two_raisings():
    p = WeightParams("1/4", ("1/25",), 3)
    once = raising_apply(p, (0,), 0, solve_orthogonality(p, (0,)))
    op = raising_operator(p, (0,), 0).next()
    twice = op(once)
    p2 = raised_params(raised_params(p, 0), 0)
    assert twice == solve_orthogonality(p2, (2,)).poly * p.field.q


@settings(max_examples=25, deadline=None)
@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=9), min_size=1, max_size=5))
def test_raising_degree_law(cs):
    p = WeightParams("1/4", ("1/9",), 3)
    poly = LatticePolynomial(p.field(c) for c in cs)
    if poly.degree >= 0:
        assert raising_operator(p, (poly.degree,), 0)(poly).degree == poly.degree + 1


def test_raising_headroom():
    with pytest.raises(BetaUnderflow):
        raised_params(WeightParams("1/4", ("1/9",), 1), 0)
    with pytest.raises(TransformInadmissible):
        raised_params(WeightParams("1/4", ("1/3",), 2), 0)


def test_lowering_r1():
    p = WeightParams("1/4", ("1/3",), 2)
    terms, res = lowering_expand(p, (1,))
    assert res.is_zero()
    (i, coef, member), = terms
    assert coef == p.field.sqrt_q and member.poly == LatticePolynomial([p.field(1)])
    for n in range(1, 5):
        assert lowering_expand(p, (n,))[1].is_zero()


def test_lowering_r2_single_component_indices():
    p = WeightParams("1/4", ("1/3", "1/5"), 2)
    for n in [(1, 0), (0, 1), (3, 0), (0, 4)]:
        terms, res = lowering_expand(p, n)
        assert res.is_zero() and len(terms) == 1


def test_lowering_r2_mixed_indices_miss_printed_coefficients():
    p = WeightParams("1/4", ("1/3", "1/5"), 2)
    with pytest.raises(NonzeroResidual):
        lowering_expand(p, (2, 1))
    # the expansion exists, with other coefficients
    assert lowering_projection(p, (1, 1)) == [Fraction(17, 16), Fraction(-7, 16)]
    printed = [lowering_coefficient(p, (1, 1), i) for i in range(2)]
    assert sum(printed) != p.field.sqrt_q * qnumber(p.field, 2)


@pytest.mark.parametrize("n", [(1, 1), (2, 1), (1, 2), (2, 2)])
def test_lowering_projection_matches_leading_coefficient(n):
    p = WeightParams("1/4", ("1/3", "1/5"), 2)
    exact = lowering_projection(p, n)
    N = sum(n)
    lc = delta_op(p.field, solve_orthogonality(p, n).poly).lc
    assert sum(exact, p.field(0)) == lc == p.field.sqrt_q * qnumber(p.field, N)


def test_difference_equation_r1():
    for alpha, beta in [("1/9", 3), ("1/3", 2)]:
        p = WeightParams("1/4", (alpha,), beta)
        for n in range(5):
            assert difference_equation_residual(p, (n,)).is_zero()


def test_difference_equation_r2_reported():
    p = WeightParams("1/4", ("1/9", "1/25"), 4)
    assert difference_equation_residual(p, (0, 0)).is_zero()
    assert not difference_equation_residual(p, (1, 1)).is_zero()
    with pytest.raises(BetaUnderflow):
        difference_equation_residual(WeightParams("1/4", ("1/9", "1/25"), 2), (1, 1))


def test_lemma51_examples():
    p = WeightParams("1/4", ("1/3",), 2)
    f = p.field
    one = GridFunction.sample(lambda s: f(1), 0, 6)
    assert all(v == 0 for v in lemma51_identity_check(p, 1, 0, one).values)
    xs = GridFunction.sample(lambda s: lattice_x(f, s), 0, 8)
    assert all(v == 0 for v in lemma51_identity_check(p, 2, 0, xs).values)
    assert lemma51_identity_check(p, 0, 0, xs).values == tuple(f(0) for _ in range(9))


@pytest.mark.parametrize("n_i", [1, 2, 3])
def test_lemma51_on_weight_ratio(n_i):
    p = WeightParams("1/4", ("1/3", "1/5"), 2)
    q = p.q
    vals = {-1: p.field(0)}
    acc = p.field(1)
    for s in range(0, 12):
        vals[s] = acc
        acc = acc * (1 - q ** (2 + s)) / (1 - q ** (s + 1))
    g = GridFunction.sample(vals.__getitem__, -1, 11, zero_below_zero=True)
    for i in range(2):
        assert all(v == 0 for v in lemma51_identity_check(p, n_i, i, g).values)
