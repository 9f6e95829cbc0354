"""Monic q-Meixner multiple orthogonal polynomials of the first kind.

Three independent constructions are provided:

``oracle``
    Solve the orthogonality conditions exactly, using closed-form mixed
    moments.  This is the ground truth.
``rodrigues``
    Apply the difference operators alpha_i**(-s) nabla**n_i (alpha_i q**n_i)**s
    to the weight ratio on an integer grid, normalise by K, and interpolate.
``recurrence``
    Step from M_0 = 1 with the nearest-neighbour recurrence.  Its
    coefficients come from r + 1 moment conditions on the previously built
    members only, so no member of degree |n| + 1 is ever consulted.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import lru_cache

from . import linalg
from .errors import CacheMiss, CoefficientMismatch, DegreeCertificateFailure, NotMonic
from .formulas import monic_formula_coeffs, normalization_K
from .index import MultiIndex, as_index
from .lattice import (
    GridFunction,
    LatticePolynomial,
    grid_nabla,
    interpolate_factorial,
    lattice_x,
    qstirling_poly,
)
from .weights import WeightParams, functional, mixed_moment

METHODS = ("oracle", "rodrigues", "recurrence")


@dataclass(frozen=True)
class MopPolynomial:
    poly: LatticePolynomial
    index: MultiIndex
    params: WeightParams
    method: str

    @property
    def degree(self) -> int:
        return self.poly.degree

    def to_json(self) -> dict:
        return {
            "n": list(self.index),
            "method": self.method,
            "monic": self.poly.is_monic(),
            "coeffs": self.poly.to_json()["coeffs"],
        }


class FamilyCache:
    """Members of one family (fixed params and method), keyed by multi-index.

    Insertion is idempotent: re-inserting a key must supply an identical
    polynomial, which also makes concurrent builders safe.
    """

    def __init__(self, params: WeightParams, method: str):
        self.params = params
        self.method = method
        self._items: dict[MultiIndex, LatticePolynomial] = {}
        self._lock = threading.Lock()

    def __contains__(self, n) -> bool:
        return MultiIndex(n) in self._items

    def __getitem__(self, n) -> LatticePolynomial:
        try:
            return self._items[MultiIndex(n)]
        except KeyError:
            raise CacheMiss(f"{tuple(n)} not in {self.method} cache") from None

    def __len__(self):
        return len(self._items)

    def insert(self, n, poly: LatticePolynomial) -> LatticePolynomial:
        n = MultiIndex(n)
        if not poly.is_monic():
            raise NotMonic(f"refusing to cache non-monic member {tuple(n)}")
        with self._lock:
            old = self._items.setdefault(n, poly)
        if old is not poly and old != poly:
            raise CoefficientMismatch(f"conflicting values cached for {tuple(n)}")
        return old

    def items(self):
        return self._items.items()


_CACHES: dict = {}
_CACHES_LOCK = threading.Lock()


def family_cache(params: WeightParams, method: str) -> FamilyCache:
    key = (params, method)
    with _CACHES_LOCK:
        if key not in _CACHES:
            _CACHES[key] = FamilyCache(params, method)
        return _CACHES[key]


# -- moment oracle -------------------------------------------------------------

def orthogonality_matrix(params: WeightParams, n: MultiIndex):
    """Rows of mixed moments mix(i, m, k), m = 0..|n|, one per condition (i, k)."""
    N = n.norm
    rows = []
    for i, ni in enumerate(n):
        for k in range(ni):
            rows.append([mixed_moment(params, i, m, k) for m in range(N + 1)])
    return rows


@lru_cache(maxsize=None)
def _oracle_poly(params: WeightParams, n: MultiIndex) -> LatticePolynomial:
    f = params.field
    N = n.norm
    if N == 0:
        return LatticePolynomial([f(1)])
    rows = orthogonality_matrix(params, n)
    top = 1 / qstirling_poly(f, N).lc
    A = [row[:N] for row in rows]
    rhs = [-row[N] * top for row in rows]
    c = linalg.solve(A, rhs) + [top]
    coeffs = [f(0)] * (N + 1)
    for m, cm in enumerate(c):
        if cm:
            basis = qstirling_poly(f, m)
            for j, bj in enumerate(basis.coeffs):
                coeffs[j] = coeffs[j] + cm * bj
    return LatticePolynomial(coeffs)


def solve_orthogonality(params: WeightParams, n) -> MopPolynomial:
    """The unique monic polynomial of degree |n| satisfying every orthogonality condition."""
    params.require_exact()
    n = as_index(n, params.r)
    return MopPolynomial(_oracle_poly(params, n), n, params, "oracle")


def orthogonality_residuals(params: WeightParams, n, poly: LatticePolynomial) -> list:
    """[(i, k, sum_s poly(s) [s]^{(k)} omega_i(s))] over every condition in range."""
    n = as_index(n, params.r)
    out = []
    for i, ni in enumerate(n):
        for k in range(ni):
            out.append((i, k, functional(params, i, k, poly)))
    return out


# -- Rodrigues formula -----------------------------------------------------------

def _ratio_table(params: WeightParams, top_exp: int, s_max: int) -> list:
    """(q**top_exp; q)_s / (q; q)_s for s = 0..s_max."""
    f = params.field
    q = f.q
    out = [f(1)]
    for s in range(s_max):
        out.append(out[-1] * (1 - q ** (top_exp + s)) / (1 - q ** (s + 1)))
    return out


def apply_rodrigues_operators(params: WeightParams, n: MultiIndex, g: GridFunction,
                              order=None) -> GridFunction:
    """Apply prod_i alpha_i**(-s) nabla**n_i (alpha_i q**n_i)**s to ``g``.

    The default order is right to left (component r first).
    """
    f = params.field
    q = f.q
    if order is None:
        order = range(params.r - 1, -1, -1)
    for i in order:
        ni = n[i]
        if ni == 0:
            continue
        a = params.alphas[i]
        up = a * q ** ni
        g = g.times(lambda s, up=up: up ** s)
        for _ in range(ni):
            g = grid_nabla(f, g)
        g = g.times(lambda s, a=a: a ** (-s))
    return g


def rodrigues_values(params: WeightParams, n, order=None) -> list:
    """Rodrigues right-hand side at s = 0..|n|+1 (the last value certifies the degree)."""
    beta = params.require_exact()
    n = as_index(n, params.r)
    N = n.norm
    hi = N + (N + 2)
    ratios = _ratio_table(params, beta + N, hi)
    g = GridFunction.sample(lambda s: ratios[s] if s >= 0 else params.field(0), -1, hi,
                            zero_below_zero=True)
    g = apply_rodrigues_operators(params, n, g, order)
    K = normalization_K(params, n)
    inv_w = _ratio_table(params, beta, N + 1)  # (q^beta;q)_s/(q;q)_s, inverted below
    return [g[s] / inv_w[s] * K for s in range(N + 2)]


def rodrigues_construct(params: WeightParams, n, order=None) -> MopPolynomial:
    n = as_index(n, params.r)
    N = n.norm
    vals = rodrigues_values(params, n, order)
    poly = interpolate_factorial(params.field, vals[: N + 1])
    if poly(lattice_x(params.field, N + 1)) != vals[N + 1]:
        raise DegreeCertificateFailure(f"Rodrigues output for {tuple(n)} is not of degree {N}")
    if poly.degree != N or not poly.is_monic():
        raise NotMonic(f"Rodrigues output for {tuple(n)} has leading coefficient {poly.lc}")
    return MopPolynomial(poly, n, params, "rodrigues")


# -- recurrence ------------------------------------------------------------------

def _x_times(p: LatticePolynomial, params: WeightParams) -> LatticePolynomial:
    return p * LatticePolynomial.variable(params.field(1))


def recurrence_coeffs_moments(params: WeightParams, n, k: int, family: FamilyCache):
    """(b, [d_i]) for X M_n = M_{n+e_k} + b M_n + sum_i d_i M_{n-e_i}.

    Determined by the orthogonality conditions of n + e_k that X M_n does not
    already satisfy: measure j at order n_j - 1 (n_j >= 1), and measure k
    at order n_k.  Uses M_n and M_{n-e_i} only.
    """
    n = as_index(n, params.r)
    Mn = family[n]
    active = [i for i in range(params.r) if n[i] > 0]
    lower = [family[n.lowered(i)] for i in active]
    xMn = _x_times(Mn, params)
    conds = [(j, n[j] - 1) for j in active] + [(k, n[k])]
    A, rhs = [], []
    for j, m in conds:
        A.append([functional(params, j, m, Mn)] + [functional(params, j, m, P) for P in lower])
        rhs.append(functional(params, j, m, xMn))
    sol = linalg.solve(A, rhs)
    d = [params.field(0)] * params.r
    for i, v in zip(active, sol[1:]):
        d[i] = v
    return sol[0], d


def recurrence_coeffs_oracle(params: WeightParams, n, k: int):
    """(b, [d_i]) by projecting X M_n - M_{n+e_k} onto the oracle family.

    Coefficient matching gives |n| + 1 equations in at most r + 1 unknowns;
    the solve raises InconsistentSystem if no exact expansion exists.
    """
    n = as_index(n, params.r)
    Mn = _oracle_poly(params, n)
    Mup = _oracle_poly(params, n.raised(k))
    active = [i for i in range(params.r) if n[i] > 0]
    lower = [_oracle_poly(params, n.lowered(i)) for i in active]
    target = _x_times(Mn, params) - Mup
    N = n.norm
    cols = [Mn] + lower
    A = [[P.coeff(m) for P in cols] for m in range(N + 1)]
    rhs = [target.coeff(m) for m in range(N + 1)]
    sol = linalg.solve_overdetermined(A, rhs)
    d = [params.field(0)] * params.r
    for i, v in zip(active, sol[1:]):
        d[i] = v
    return sol[0], d


def recurrence_step(params: WeightParams, n, k: int, cache: FamilyCache,
                    coefficients: str = "moments") -> LatticePolynomial:
    """M_{n+e_k} from M_n and the M_{n-e_i} held in ``cache``.

    ``coefficients`` selects the source: ``"moments"`` (default, independent
    of the oracle), ``"oracle"`` (projection of the oracle family), or
    ``"formula"`` (printed coefficients; raises CoefficientMismatch where they
    disagree with the oracle projection).
    """
    n = as_index(n, params.r)
    Mn = cache[n]
    lower = {i: cache[n.lowered(i)] for i in range(params.r) if n[i] > 0}
    up = 1
    if coefficients == "moments":
        b, d = recurrence_coeffs_moments(params, n, k, cache)
    elif coefficients == "oracle":
        b, d = recurrence_coeffs_oracle(params, n, k)
    elif coefficients == "formula":
        b, up, d = monic_formula_coeffs(params, n, k)
        ob, od = recurrence_coeffs_oracle(params, n, k)
        bad = []
        if b != ob:
            bad.append(f"b: formula {b} vs oracle {ob}")
        if up != 1:
            bad.append(f"c*K_n/K_(n+e_k) = {up}, expected 1")
        for i in lower:
            if d[i] != od[i]:
                bad.append(f"d_{i + 1}: formula {d[i]} vs oracle {od[i]}")
        if bad:
            raise CoefficientMismatch(f"n={tuple(n)}, k={k + 1}: " + "; ".join(bad))
    else:
        raise ValueError(f"unknown coefficient source {coefficients!r}")
    out = _x_times(Mn, params) - Mn * b
    for i, P in lower.items():
        out = out - P * d[i]
    if up != 1:
        out = out * (1 / up)
    return out


def _build_recurrence(params: WeightParams, n: MultiIndex, cache: FamilyCache) -> LatticePolynomial:
    if n in cache:
        return cache[n]
    if n.norm == 0:
        return cache.insert(n, LatticePolynomial([params.field(1)]))
    k = max(i for i in range(params.r) if n[i] > 0)
    m = n.lowered(k)
    _build_recurrence(params, m, cache)
    for i in range(params.r):
        if m[i] > 0:
            _build_recurrence(params, m.lowered(i), cache)
    return cache.insert(n, recurrence_step(params, m, k, cache))


def recurrence_construct(params: WeightParams, n, cache: FamilyCache | None = None) -> MopPolynomial:
    params.require_exact()
    n = as_index(n, params.r)
    if cache is None:
        cache = family_cache(params, "recurrence")
    return MopPolynomial(_build_recurrence(params, n, cache), n, params, "recurrence")


def construct(params: WeightParams, n, method: str = "oracle") -> MopPolynomial:
    """Build M_n with one of :data:`METHODS`."""
    if method == "oracle":
        return solve_orthogonality(params, n)
    if method == "rodrigues":
        return rodrigues_construct(params, n)
    if method == "recurrence":
        return recurrence_construct(params, n)
    raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
