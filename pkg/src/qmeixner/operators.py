"""Raising and lowering operators, the (r+1)-order q-difference equation, and the
operator identity used for the recurrence.

Every operator instance is tagged with the parameters (alpha_i, beta, N) it
was built for.  Compositions thread these tags explicitly; nothing is read
from global state.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .errors import BetaUnderflow, NonzeroResidual, TransformInadmissible
from .index import as_index
from .lattice import (
    GridFunction,
    LatticePolynomial,
    backward_diff,
    delta_op,
    grid_nabla,
    lattice_x,
)
from .mop import MopPolynomial, solve_orthogonality
from .scalars import QField
from .weights import WeightParams


@dataclass(frozen=True)
class RaisingOperator:
    """D with parameters (alpha, beta, N):

        D f = q**(N+1/2) / (1 - alpha q**(N+beta-1))
              * ( [alpha q**(beta-1) (X - x(1-beta)) - X] f + X (f(s) - f(s-1)) )

    It maps the family member of index n (|n| = N) at (alpha, beta) to
    -q**(1/2) times the member of index n + e_i at (alpha/q, beta - 1).
    """

    field: QField
    alpha: Fraction
    beta: int
    N: int

    def __call__(self, p: LatticePolynomial) -> LatticePolynomial:
        f = self.field
        q = f.q
        a, b, N = self.alpha, self.beta, self.N
        X = LatticePolynomial.variable(f(1))
        mult = (X - lattice_x(f, 1 - b)) * (a * q ** (b - 1)) - X
        body = mult * p + X * backward_diff(f, p)
        return body * (f.qpow_half(2 * N + 1) / (1 - a * q ** (N + b - 1)))

    def next(self) -> RaisingOperator:
        """Tags of the same-component operator acting on this one's output."""
        return RaisingOperator(self.field, self.alpha / self.field.q, self.beta - 1, self.N + 1)


def raising_operator(params: WeightParams, n, i: int) -> RaisingOperator:
    n = as_index(n, params.r)
    return RaisingOperator(params.field, params.alphas[i], params.require_exact(), n.norm)


def raised_params(params: WeightParams, i: int) -> WeightParams:
    """(alpha_{i,1/q}, beta - 1), validated."""
    beta = params.require_exact()
    if beta - 1 < 1:
        raise BetaUnderflow(f"raising needs beta - 1 >= 1, got beta = {beta}")
    new_alpha = params.alphas[i] / params.q
    if new_alpha >= 1:
        raise TransformInadmissible(f"alpha_{i + 1}/q = {new_alpha} is not below 1")
    return params.with_alpha(i, new_alpha).with_beta(beta - 1)


def raising_apply(params: WeightParams, n, i: int, p: MopPolynomial | LatticePolynomial) -> LatticePolynomial:
    """Apply D_q^{alpha_i, beta} (with N = |n|) to a member of the (params, n) family."""
    raised_params(params, i)  # validates headroom before doing any work
    poly = p.poly if isinstance(p, MopPolynomial) else p
    return raising_operator(params, n, i)(poly)


def raising_residual(params: WeightParams, n, i: int) -> LatticePolynomial:
    """D M_n - (-q**(1/2)) M_{n+e_i} at the transformed parameters."""
    n = as_index(n, params.r)
    target = solve_orthogonality(raised_params(params, i), n.raised(i)).poly
    lhs = raising_apply(params, n, i, solve_orthogonality(params, n))
    return lhs + target * params.field.sqrt_q


# -- lowering ----------------------------------------------------------------------

def lowering_coefficient(params: WeightParams, n, i: int):
    """q**(|n|-n_i+1/2) (1 - alpha_i q**(n_i+beta)) / (1 - alpha_i q**(|n|+beta)) [n_i]_q."""
    n = as_index(n, params.r)
    beta = params.require_exact()
    f = params.field
    q = f.q
    a = params.alphas[i]
    N = n.norm
    return (f.qpow_half(2 * (N - n[i]) + 1) * (1 - a * q ** (n[i] + beta))
            / (1 - a * q ** (N + beta)) * lattice_x(f, n[i]))


def lowered_params(params: WeightParams, i: int) -> WeightParams:
    """(alpha_{i,q}, beta + 1)."""
    return params.with_alpha(i, params.alphas[i] * params.q).with_beta(params.require_exact() + 1)


def lowering_expand(params: WeightParams, n, p: MopPolynomial | None = None, check: bool = True):
    """Delta M_n against sum_i coef_i M_{n-e_i}(alpha_{i,q}, beta + 1).

    Returns ``(terms, residual)`` where ``terms`` lists ``(i, coef, member)``
    for every i with n_i > 0.  With ``check`` a nonzero residual raises
    :class:`NonzeroResidual`.
    """
    n = as_index(n, params.r)
    if p is None:
        p = solve_orthogonality(params, n)
    f = params.field
    lhs = delta_op(f, p.poly)
    terms = []
    rhs = LatticePolynomial()
    for i in range(params.r):
        if n[i] == 0:
            continue
        coef = lowering_coefficient(params, n, i)
        member = solve_orthogonality(lowered_params(params, i), n.lowered(i))
        terms.append((i, coef, member))
        rhs = rhs + member.poly * coef
    residual = lhs - rhs
    if check and not residual.is_zero():
        raise NonzeroResidual(f"lowering expansion fails for n={tuple(n)}", residual)
    return terms, residual


def lowering_projection(params: WeightParams, n) -> list:
    """Exact coefficients of Delta M_n in the members M_{n-e_i}(alpha_{i,q}, beta + 1).

    Solves the coefficient-matching system directly, so it succeeds whenever
    the expansion exists, regardless of the closed-form coefficients.  Entry
    i is 0 when n_i = 0.  Raises InconsistentSystem if Delta M_n is not in
    the span.
    """
    n = as_index(n, params.r)
    f = params.field
    lhs = delta_op(f, solve_orthogonality(params, n).poly)
    active = [i for i in range(params.r) if n[i] > 0]
    members = [solve_orthogonality(lowered_params(params, i), n.lowered(i)).poly for i in active]
    A = [[P.coeff(m) for P in members] for m in range(n.norm)]
    sol = linalg.solve_overdetermined(A, [lhs.coeff(m) for m in range(n.norm)])
    out = [f(0)] * params.r
    for i, v in zip(active, sol):
        out[i] = v
    return out


# -- (r+1)-order q-difference equation ------------------------------------------------

def _chain(order, p: LatticePolynomial, beta: int, N: int, field: QField,
           alphas: dict) -> LatticePolynomial:
    """Apply raising operators for the components in ``order`` (first applied first).

    ``alphas`` maps each component to its current alpha tag; the beta and N
    tags move by one per application, following the raising identity.
    """
    alphas = dict(alphas)
    for i in order:
        op = RaisingOperator(field, alphas[i], beta, N)
        p = op(p)
        alphas[i] = alphas[i] / field.q
        beta -= 1
        N += 1
    return p


def difference_equation_sides(params: WeightParams, n):
    """Both sides of the q-difference equation under the chain convention.

    The operand Delta M_n is tagged as if it were the component-1 lowered
    member (alpha_{1,q}, beta + 1, |n| - 1).  Operators are applied in the
    order 1, 2, ..., r, each instantiated with the tags of its operand,
    and each raising moves the tags (alpha_i -> alpha_i/q, beta -> beta - 1,
    N -> N + 1).  On the right, prod_{j != i} D_j acts on M_n starting
    from (alpha, beta, |n|).  For r = 1 this is the only consistent reading.
    """
    n = as_index(n, params.r)
    beta = params.require_exact()
    f = params.field
    q = f.q
    r = params.r
    N = n.norm
    M = solve_orthogonality(params, n).poly
    dM = delta_op(f, M)
    start = {i: params.alphas[i] for i in range(r)}
    lhs_tags = dict(start)
    lhs_tags[0] = start[0] * q
    lhs = _chain(range(r), dM, beta + 1, N - 1, f, lhs_tags)
    rhs = LatticePolynomial()
    for i in range(r):
        if n[i] == 0:
            continue
        a = params.alphas[i]
        coef = (f.qpow(N - n[i] + 1) * (1 - a * q ** (n[i] + beta))
                / (1 - a * q ** (N + beta)) * lattice_x(f, n[i]))
        others = [j for j in range(r) if j != i]
        rhs = rhs - _chain(others, M, beta, N, f, start) * coef
    return lhs, rhs


def difference_equation_residual(params: WeightParams, n) -> LatticePolynomial:
    """LHS - RHS of the q-difference equation; identically zero when it holds."""
    beta = params.require_exact()
    if beta < params.r + 1:
        raise BetaUnderflow(f"difference equation needs beta >= r + 1 = {params.r + 1}")
    lhs, rhs = difference_equation_sides(params, n)
    return lhs - rhs


# -- operator identity behind the recurrence -------------------------------------------

def rodrigues_block(field: QField, alpha, n_i: int, f: GridFunction, nablas: int | None = None) -> GridFunction:
    """alpha**(-s) nabla**nablas (alpha q**n_i)**s f   (nablas defaults to n_i)."""
    if nablas is None:
        nablas = n_i
    q = field.q
    up = alpha * q ** n_i
    g = f.times(lambda s: up ** s)
    for _ in range(nablas):
        g = grid_nabla(field, g)
    return g.times(lambda s: alpha ** (-s))


def lemma51_identity_check(params: WeightParams, n_i: int, i: int, f: GridFunction) -> GridFunction:
    """Pointwise residual of

        M_{n_i}(x f) - [ q**(-n_i+1/2) x(n_i) alpha**(-s) nabla**(n_i-1) (alpha q**n_i)**s f
                         + (x(s) - x(n_i)) / q**n_i * D f ],

    with the undefined operator D read as M_{n_i} itself, where
    M_{n_i} = alpha**(-s) nabla**n_i (alpha q**n_i)**s.
    """
    field = params.field
    q = field.q
    alpha = params.alphas[i]
    xf = f.map(lambda s, v: v * lattice_x(field, s))
    if n_i == 0:
        # no differences at all: the identity reads x f = x f
        return xf - xf
    lhs = rodrigues_block(field, alpha, n_i, xf)
    first = rodrigues_block(field, alpha, n_i, f, nablas=n_i - 1).times(
        lambda s: field.qpow_half(1 - 2 * n_i) * lattice_x(field, n_i))
    Df = rodrigues_block(field, alpha, n_i, f)
    second = Df.map(lambda s, v: v * (lattice_x(field, s) - lattice_x(field, n_i)) / q ** n_i)
    return lhs - (first + second)
