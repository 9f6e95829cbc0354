"""Closed-form constants transcribed verbatim: the Rodrigues normalisation K and
the printed nearest-neighbour recurrence coefficients b, c, d.

Nothing here is corrected.  These values are compared against moment-based
ground truth elsewhere, and disagreements are reported rather than patched.
"""
from __future__ import annotations

from .lattice import lattice_x, qstirling_eval
from .index import MultiIndex, as_index
from .scalars import QScalar
from .weights import WeightParams


def _qstirling_any(params: WeightParams, s: int, k: int) -> QScalar:
    # finite product, also meaningful at negative s
    return qstirling_eval(params.field, s, k)


def normalization_K(params: WeightParams, n) -> QScalar:
    """Rodrigues constant K for the multi-index ``n``."""
    n = as_index(n, params.r)
    beta = params.require_exact()
    f = params.field
    q = f.q
    N = n.norm
    K = f((-1) ** N) * _qstirling_any(params, -beta, N) * f.qpow_half(-N)
    for i, (a, ni) in enumerate(zip(params.alphas, n)):
        part = n.partial(i)
        num = f(a ** ni)
        den = f(1)
        for j in range(1, ni + 1):
            num = num * q ** (part + beta + j - 1)
            den = den * (a * q ** (N + beta + j - 1) - 1)
        K = K * num / den
        K = K * q ** (ni * sum(n[i:]))
    return K


def recurrence_c(params: WeightParams, n, k: int) -> QScalar:
    """Printed up-coefficient c_{n,k} (k is 0-based)."""
    n = as_index(n, params.r)
    beta = params.require_exact()
    f = params.field
    q = f.q
    N = n.norm
    ak = params.alphas[k]
    nk = n[k]
    out = f.qpow_half(2 * N - 1) * _common_product(params, n)
    out = out * (ak * q ** (nk + 1)) * lattice_x(f, beta + N) / (ak * q ** (N + beta + nk + 1) - 1)
    return out


def _common_product(params: WeightParams, n: MultiIndex) -> QScalar:
    f = params.field
    q = f.q
    N = n.norm
    beta = int(params.beta)
    out = f(1)
    for a, ni in zip(params.alphas, n):
        out = out * (a * q ** (N + beta) - 1) / (a * q ** (N + beta + ni) - 1)
    return out


def _cross_ratio(params: WeightParams, n: MultiIndex, i: int):
    q = params.q
    N = n.norm
    ai = params.alphas[i]
    out = 1
    for j, (aj, nj) in enumerate(zip(params.alphas, n)):
        if j != i:
            out = out * (ai * q ** N - aj * q ** nj) / (ai * q ** n[i] - aj * q ** nj)
    return out


def recurrence_b(params: WeightParams, n, k: int) -> QScalar:
    """Printed diagonal coefficient b_{n,k} (k is 0-based)."""
    n = as_index(n, params.r)
    beta = params.require_exact()
    f = params.field
    q = f.q
    N = n.norm
    al = params.alphas
    s1 = f(0)
    for i, (a, ni) in enumerate(zip(al, n)):
        s1 = s1 + q ** n.partial(i) * lattice_x(f, ni) * (a * q ** sum(n[i:]) - 1) / (a * q ** (N + beta) - 1)
    t2 = (q - 1) * q ** (N + beta)
    for a, ni in zip(al, n):
        t2 = t2 * (a * q ** ni - 1) / (a * q ** (N + beta) - 1)
    prod_x = f(1)
    for ni in n:
        prod_x = prod_x * lattice_x(f, ni)
    nested = f(0)
    running = f(1)
    for a in al:
        running = running / (a * q ** (N + beta) - 1)
        nested = nested + running
    t3 = (q - 1) * prod_x * nested
    ak, nk = al[k], n[k]
    t4 = q ** N * (ak * q ** (nk + 1)) * lattice_x(f, beta + N) / (1 - ak * q ** (N + beta + nk + 1))
    out = _common_product(params, n) * (s1 + t2 - t3 + t4)
    for i, (a, ni) in enumerate(zip(al, n)):
        term = _cross_ratio(params, n, i) * lattice_x(f, ni) * (a * q ** ni - 1) / (a * q ** (N + beta + ni) - 1)
        term = term * a * q ** (beta + N + ni - 1) / (a * q ** (N + beta + ni - 1) - 1)
        out = out - term
    return out


def recurrence_d(params: WeightParams, n) -> list:
    """Printed down-coefficients d_{n,i} of M~_{n-e_i}, i = 0..r-1.

    The inner product over the measures is read as binding only the first
    fraction after it; every later factor uses the outer index i.
    """
    n = as_index(n, params.r)
    beta = params.require_exact()
    f = params.field
    q = f.q
    N = n.norm
    al = params.alphas
    inner = f(1)
    for a, nl in zip(al, n):
        inner = inner * (a * q ** (N + beta - 1) - 1) / (a * q ** (N + beta + nl - 1) - 1)
    out = []
    for i, (a, ni) in enumerate(zip(al, n)):
        d = lattice_x(f, ni) * _cross_ratio(params, n, i) * inner
        d = d * (a * q ** ni - 1) / (a * q ** (N + beta + ni) - 1)
        d = d * a * q ** (N + ni - 1) * lattice_x(f, beta + N - 1) / (a * q ** (N + beta + ni - 1) - 1)
        d = d / (a * q ** (N + beta + ni - 2) - 1)
        out.append(d)
    return out


def recurrence_coeffs_formula(params: WeightParams, n, k: int):
    """(b, c, [d_i]) exactly as printed, for the K-normalised family."""
    return recurrence_b(params, n, k), recurrence_c(params, n, k), recurrence_d(params, n)


def monic_formula_coeffs(params: WeightParams, n, k: int):
    """Printed coefficients rescaled to the monic family.

    Returns ``(b, up, [D_i])`` with ``up = c K_n / K_{n+e_k}`` (1 if the
    printed c is consistent) and ``D_i = d_i K_n / K_{n-e_i}``.
    """
    n = as_index(n, params.r)
    b, c, d = recurrence_coeffs_formula(params, n, k)
    Kn = normalization_K(params, n)
    up = c * Kn / normalization_K(params, n.raised(k))
    D = []
    for i, di in enumerate(d):
        if n[i] == 0:
            D.append(params.field(0))
        else:
            D.append(di * Kn / normalization_K(params, n.lowered(i)))
    return b, up, D
