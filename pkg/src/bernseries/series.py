"""Geometric series of the blending operators on the pinned space.

On functions vanishing at both endpoints the operator is a contraction
with norm q = (n-1) rho / (n rho + 1), so the scaled Neumann series
rho/(n rho + 1) * sum of operator powers converges geometrically. Three
evaluation engines cover the input space:

* a monomial engine iterating the leading block of the triangular
  operator matrix, used when the input carries polynomial coefficients
  whose pinned form fits inside Pi_n and under the degree cap;
* a cofactor-basis engine iterating a dense nonnegative transfer matrix
  on Bernstein coefficients of the cofactor, used for everything else
  (the operator maps the pinned space into the weight times a degree
  n-2 Bernstein span, which the transfer matrix reproduces without any
  basis conversion, so it is stable at any n);
* an eigen-expansion engine that sums the series in closed form through
  the eigenvalues, available on polynomials up to the eigen cap, kept
  as an independent route against the iterative ones.

The Bernstein-endpoint variant (the rho to infinity limit) reuses the
cofactor-basis engine with sampling in place of averaging functionals.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.special import gammaln

from .polyfun import (
    DEGREE_CAP,
    DEFAULT_SUP_GRID,
    C0Function,
    FunctionHandle,
    GridSpec,
    Polynomial,
    deflate_by_psi,
    limit_eigenpoly,
)
from .operators import (
    QuadratureRule,
    apply_F,
    bernstein_basis,
    build_u_matrix,
    default_quad_size,
    u_matrix_leading_block,
    u_norm0,
)
from .eigen import compute_eigensystem, dual_coefficients, limit_dual

__all__ = [
    "SeriesConfig",
    "SeriesResult",
    "apply_series",
    "apply_series_poly",
    "apply_series_bernstein",
    "poly_limit",
]


@dataclass(frozen=True)
class SeriesConfig:
    """Truncation control for the operator series.

    ``tol`` bounds the sup-norm of the dropped tail of the summed
    function. ``max_iters`` caps the number of operator applications;
    exceeding it raises instead of silently returning a short sum.
    """

    tol: float = 1e-9
    max_iters: int = 100_000
    grid: GridSpec = field(default_factory=lambda: DEFAULT_SUP_GRID)

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")


class SeriesResult(C0Function):
    """Summed series value with the truncation metadata attached."""

    def __init__(self, h, iterations: int, tail_bound: float,
                 norm_grid: Optional[GridSpec] = None):
        super().__init__(h, norm_grid=norm_grid)
        self.iterations = int(iterations)
        self.tail_bound = float(tail_bound)


def _truncation_count(q: float, scale: float, norm0: float,
                      cfg: SeriesConfig) -> int:
    """Smallest K with scale * norm0 * q^(K+1) / (1-q) <= tol.

    K counts operator applications; the sum then holds K + 1 terms.
    """
    if norm0 == 0.0 or q == 0.0:
        return 0
    t = cfg.tol * (1.0 - q) / (scale * norm0)
    if t >= 1.0:
        return 0
    K = max(0, math.ceil(math.log(t) / math.log(q)) - 1)
    if K > cfg.max_iters:
        raise RuntimeError(
            f"series needs {K} applications, above the configured "
            f"cap {cfg.max_iters}"
        )
    return K


def _transfer_direct(n: int, rho: float) -> np.ndarray:
    """Transfer matrix on cofactor Bernstein coefficients, plain products."""
    I = np.arange(n, dtype=float)
    jj = np.arange(n - 1)
    D = n * rho + I
    Dcum = np.cumprod(D)
    binom = np.array([math.comb(n - 2, int(j)) for j in jj], dtype=float)
    W = np.empty((n - 1, n - 1))
    for k in range(1, n):
        factor = n * (n - 1.0) / (k * (n - k))
        cum1 = np.cumprod((k * rho + I) / D)
        cum2 = np.cumprod((n - k) * rho + I)
        P2 = cum2[n - 2 - jj] * Dcum[jj] / Dcum[n - 1]
        W[k - 1] = factor * binom * cum1[: n - 1] * P2
    return W


def _transfer_lgamma(n: int, rho: float) -> np.ndarray:
    """Same matrix through log-gamma, immune to product overflow."""
    jj = np.arange(n - 1, dtype=float)
    c = n * rho
    logbinom = gammaln(n - 1.0) - gammaln(jj + 1.0) - gammaln(n - 1.0 - jj)
    W = np.empty((n - 1, n - 1))
    for k in range(1, n):
        a = k * rho
        b = (n - k) * rho
        logw = (
            math.log(n) + math.log(n - 1.0)
            - math.log(k) - math.log(n - k)
            + logbinom
            + gammaln(a + jj + 1.0) - gammaln(a)
            - gammaln(c + jj + 1.0) + gammaln(c)
            + gammaln(b + n - 1.0 - jj) - gammaln(b)
            - gammaln(c + n) + gammaln(c + jj + 1.0)
        )
        W[k - 1] = np.exp(logw)
    return W


@functools.lru_cache(maxsize=128)
def _cofactor_transfer(n: int, rho: float) -> np.ndarray:
    """Matrix sending cofactor Bernstein coefficients through the operator.

    Entry (k-1, j) expands the image of the weight times the degree
    n-2 Bernstein basis polynomial j in the same weighted basis. All
    entries are positive and every row sums to the contraction factor
    (n-1) rho / (n rho + 1). Falls back to log-gamma assembly when the
    raw products would leave double range.
    """
    if n < 2:
        raise ValueError("the transfer matrix needs n >= 2")
    if rho <= 0:
        raise ValueError("rho must be positive")
    if n * math.log(n * rho + n) > 600.0:
        W = _transfer_lgamma(n, rho)
    else:
        W = _transfer_direct(n, rho)
    W.flags.writeable = False
    return W


def _first_vector_poly(n: int, rho: float, h: Polynomial) -> np.ndarray:
    """Cofactor Bernstein coefficients of the image of the weighted input.

    Exact in the coefficients of h for any degree: the averaging
    functional of the weighted monomial t^m times the weight telescopes
    into a moment difference, leaving one cumulative product per node.
    """
    hm = h.coeffs
    I = np.arange(hm.size, dtype=float)
    D = n * rho + I
    g0 = np.empty(n - 1)
    for k in range(1, n):
        factor = n * (n - 1.0) / (k * (n - k))
        cum1 = np.cumprod((k * rho + I) / D)
        R = ((n - k) * rho / (D + 1.0)) * cum1
        g0[k - 1] = factor * float(hm @ R)
    return g0


def _first_vector_generic(n: int, rho: float, f: C0Function,
                          quad_size: Optional[int] = None) -> np.ndarray:
    if quad_size is None:
        quad_size = default_quad_size(n)
    handle = FunctionHandle.from_callable(f.value)
    g0 = np.empty(n - 1)
    for k in range(1, n):
        rule = QuadratureRule.beta_rule(
            k * rho - 1.0, (n - k) * rho - 1.0, quad_size
        )
        factor = n * (n - 1.0) / (k * (n - k))
        g0[k - 1] = factor * apply_F(n, k, rho, handle, rule)
    return g0


def _sum_transfer(W: np.ndarray, g0: np.ndarray, K: int) -> np.ndarray:
    """g0 + W g0 + ... + W^(K-1) g0 by repeated application."""
    acc = g0.copy()
    v = g0
    for _ in range(K - 1):
        v = W @ v
        acc += v
    return acc


def _weighted_bernstein_closure(h, acc: np.ndarray, degree: int,
                                scale: float):
    def h_out(x, _h=h, _acc=acc, _d=degree, _s=scale):
        return _s * (_h(x) + _acc @ bernstein_basis(_d, x))

    return h_out


def apply_series(n: int, rho: float, f: C0Function,
                 config: Optional[SeriesConfig] = None) -> SeriesResult:
    """Sum the scaled operator series applied to a pinned function.

    The result is again pinned; its cofactor is polynomial whenever the
    monomial engine ran (input cofactor polynomial with the pinned form
    inside Pi_n and under the degree cap) and a closure over Bernstein
    coefficients otherwise. ``iterations`` counts operator
    applications, ``tail_bound`` the a priori sup bound on what was
    dropped.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if rho <= 0:
        raise ValueError("rho must be positive")
    if not isinstance(f, C0Function):
        raise TypeError("f must be a C0Function")
    cfg = config or SeriesConfig()
    scale = rho / (n * rho + 1.0)
    if n == 1:
        # A single-node operator annihilates the pinned space, so the
        # series collapses to its first term.
        if f.h.poly is not None:
            h_out = f.h.poly * scale
        else:
            h_out = lambda x, _h=f.h, _s=scale: _s * np.asarray(_h(x))
        return SeriesResult(h_out, 0, 0.0, norm_grid=cfg.grid)
    q = u_norm0(n, rho)
    K = _truncation_count(q, scale, f.norm0, cfg)
    tail = scale * f.norm0 * q ** (K + 1) / (1.0 - q)
    hp = f.h.poly
    if hp is not None and hp.degree + 2 <= min(n, DEGREE_CAP):
        d = hp.degree + 2
        M = u_matrix_leading_block(n, rho, d)
        v = f.as_polynomial().padded(d + 1)
        acc = v.copy()
        for _ in range(K):
            v = M @ v
            acc += v
        h_out = deflate_by_psi(Polynomial(scale * acc))
        return SeriesResult(h_out, K, tail, norm_grid=cfg.grid)
    if K == 0:
        if hp is not None:
            h_out = hp * scale
        else:
            h_out = lambda x, _h=f.h, _s=scale: _s * np.asarray(_h(x))
        return SeriesResult(h_out, 0, tail, norm_grid=cfg.grid)
    W = _cofactor_transfer(n, rho)
    if hp is not None:
        g0 = _first_vector_poly(n, rho, hp)
    else:
        g0 = _first_vector_generic(n, rho, f)
    acc = _sum_transfer(W, g0, K)
    h_out = _weighted_bernstein_closure(f.h, acc, n - 2, scale)
    return SeriesResult(h_out, K, tail, norm_grid=cfg.grid)


def apply_series_poly(n: int, rho: float, p: Polynomial) -> Polynomial:
    """Closed-form series sum of a pinned polynomial via the eigensystem.

    Expands p over the eigenpolynomials, scales each coefficient by
    1 / (1 - eigenvalue), and reassembles. The two leading dual
    coefficients belong to the unit eigenvalue; for a genuinely pinned
    input they vanish, which is checked and then used. Exact up to the
    conditioning of the triangular solve; no truncation is involved.
    """
    if p.degree > n:
        raise ValueError(f"degree {p.degree} exceeds n={n}")
    scale = rho / (n * rho + 1.0)
    mat = build_u_matrix(n, rho)
    sys = compute_eigensystem(mat)
    mu = dual_coefficients(sys, p)
    # Conditioning of the dual solve grows with n; near the eigen cap
    # honest zeros come back around 1e-8 of the coefficient scale.
    lead_tol = 1e-8 * max(1.0, float(np.max(np.abs(p.coeffs))))
    if abs(mu[0]) > lead_tol or abs(mu[1]) > lead_tol:
        raise ValueError(
            "polynomial does not vanish at both endpoints "
            f"(unit-eigenvalue components {mu[0]:.3e}, {mu[1]:.3e})"
        )
    out = np.zeros(n + 1)
    for j in range(2, n + 1):
        gap = 1.0 - sys.lambdas[j]
        if gap < 1e-14:
            raise RuntimeError(f"eigenvalue of index {j} is too close to one")
        coeff = scale * mu[j] / gap
        out[: j + 1] += coeff * sys.basis[: j + 1, j]
    return Polynomial(out)


def apply_series_bernstein(n: int, f: C0Function,
                           config: Optional[SeriesConfig] = None
                           ) -> SeriesResult:
    """Series sum for the endpoint-interpolation (sampling) operator.

    The limit case of the parameter going to infinity: the averaging
    functionals become point evaluations at k/n, the scale becomes 1/n,
    and the contraction factor (n-1)/n. The transfer matrix samples the
    degree n-2 Bernstein basis at the interior nodes, so the first
    vector is exact for every input.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if not isinstance(f, C0Function):
        raise TypeError("f must be a C0Function")
    cfg = config or SeriesConfig()
    if n == 1:
        # Scale 1, image zero on the pinned space: the series is the
        # identity here.
        return SeriesResult(f.h, 0, 0.0, norm_grid=cfg.grid)
    scale = 1.0 / n
    q = (n - 1.0) / n
    K = _truncation_count(q, scale, f.norm0, cfg)
    tail = scale * f.norm0 * q ** (K + 1) / (1.0 - q)
    nodes = np.arange(1, n) / n
    g0 = q * np.asarray(f.h(nodes))
    if K == 0:
        if f.h.poly is not None:
            h_out = f.h.poly * scale
        else:
            h_out = lambda x, _h=f.h, _s=scale: _s * np.asarray(_h(x))
        return SeriesResult(h_out, 0, tail, norm_grid=cfg.grid)
    WB = q * bernstein_basis(n - 2, nodes).T
    acc = _sum_transfer(WB, g0, K)
    h_out = _weighted_bernstein_closure(f.h, acc, n - 2, scale)
    return SeriesResult(h_out, K, tail, norm_grid=cfg.grid)


def poly_limit(p: Polynomial, rho: float) -> Polynomial:
    """Large-n limit of the series sum on a pinned polynomial.

    Each limit dual coefficient of index j >= 2 is damped by
    2 rho / ((rho + 1) j (j - 1)) and attached to the limit
    eigenpolynomial of the same index. Degrees zero and one carry no
    pinned component and contribute nothing.
    """
    if rho <= 0:
        raise ValueError("rho must be positive")
    scale = max(1.0, float(np.max(np.abs(p.coeffs))))
    v0 = float(p.coeffs[0])
    v1 = float(np.sum(p.coeffs))
    if abs(v0) > 1e-12 * scale or abs(v1) > 1e-12 * scale:
        raise ValueError(
            f"polynomial does not vanish at the endpoints "
            f"(p(0)={v0:.3e}, p(1)={v1:.3e})"
        )
    out = np.zeros(max(p.degree + 1, 1))
    for j in range(2, p.degree + 1):
        mu = limit_dual(j, FunctionHandle.from_polynomial(p))
        damp = (rho / (rho + 1.0)) * 2.0 / (j * (j - 1.0))
        pj = limit_eigenpoly(j)
        out[: j + 1] += damp * mu * pj.padded(j + 1)
    return Polynomial(out)
