"""Polynomial substrate for the operator library.

Monomial-basis polynomials with exact coefficient calculus, Jacobi
polynomials with parameters (1, 1), the limit eigenpolynomials they
generate, and grid-based estimators for sup norms and moduli of
smoothness. Everything else in the package is built on these types.

Coefficient arithmetic is double precision. Degrees are capped at
DEGREE_CAP because the monomial basis loses accuracy well before
degree 100; the cap is enforced at construction time.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np
from numpy.polynomial import polynomial as npoly

__all__ = [
    "DEGREE_CAP",
    "ENDPOINT_TOL",
    "Polynomial",
    "FunctionHandle",
    "C0Function",
    "GridSpec",
    "DEFAULT_SUP_GRID",
    "PSI",
    "psi_values",
    "poly_eval",
    "poly_calculus",
    "deflate_by_psi",
    "jacobi11",
    "limit_eigenpoly",
    "sup_norm",
    "omega",
]

DEGREE_CAP = 60

# Absolute-per-unit-coefficient tolerance for "vanishes at the endpoint"
# preconditions. Scaled by the coefficient magnitude of the polynomial
# under test, so that cancellation noise in large-coefficient inputs is
# not mistaken for a genuine nonzero boundary value.
ENDPOINT_TOL = 1e-12


class Polynomial:
    """Real polynomial on [0, 1] stored by monomial coefficients.

    ``coeffs[i]`` is the coefficient of ``x**i``. Trailing exact zeros
    are trimmed at construction, so the leading stored coefficient is
    nonzero unless the polynomial is identically zero. Instances are
    immutable.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Union[Sequence[float], np.ndarray]):
        arr = np.atleast_1d(np.asarray(coeffs, dtype=float))
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("coefficients must form a nonempty 1-d sequence")
        if not np.all(np.isfinite(arr)):
            raise ValueError("coefficients must be finite")
        nz = np.nonzero(arr)[0]
        arr = arr[: nz[-1] + 1].copy() if nz.size else np.zeros(1)
        if arr.size - 1 > DEGREE_CAP:
            raise ValueError(
                f"degree {arr.size - 1} exceeds the cap {DEGREE_CAP}"
            )
        arr.flags.writeable = False
        self._coeffs = arr

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def degree(self) -> int:
        return self._coeffs.size - 1

    @property
    def is_zero(self) -> bool:
        return self._coeffs.size == 1 and self._coeffs[0] == 0.0

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls([0.0])

    @classmethod
    def monomial(cls, m: int, scale: float = 1.0) -> "Polynomial":
        if m < 0:
            raise ValueError("monomial exponent must be nonnegative")
        c = np.zeros(m + 1)
        c[m] = scale
        return cls(c)

    def padded(self, length: int) -> np.ndarray:
        """Coefficients zero-padded (or rejected) to the given length."""
        if length < self._coeffs.size:
            raise ValueError("padded length is smaller than the coefficient count")
        out = np.zeros(length)
        out[: self._coeffs.size] = self._coeffs
        return out

    def __call__(self, x):
        return poly_eval(self, x)

    def derivative(self) -> "Polynomial":
        return poly_calculus(self)[0]

    def antiderivative(self) -> "Polynomial":
        return poly_calculus(self)[1]

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        return Polynomial(npoly.polyadd(self._coeffs, other._coeffs))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        return Polynomial(npoly.polysub(self._coeffs, other._coeffs))

    def __neg__(self) -> "Polynomial":
        return Polynomial(-self._coeffs)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return Polynomial(npoly.polymul(self._coeffs, other._coeffs))
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Polynomial(self._coeffs * float(other))
        return NotImplemented

    __rmul__ = __mul__

    def __repr__(self) -> str:
        body = ", ".join(f"{c:.6g}" for c in self._coeffs)
        return f"Polynomial([{body}])"


PSI = Polynomial([0.0, 1.0, -1.0])


def psi_values(x):
    """The weight x(1-x), vectorized."""
    x = np.asarray(x, dtype=float)
    out = x * (1.0 - x)
    return float(out) if out.ndim == 0 else out


class FunctionHandle:
    """Evaluation oracle on [0, 1], optionally carrying exact coefficients.

    ``kind`` is "polynomial" when the handle wraps a Polynomial (exact
    code paths become available downstream) and "generic" otherwise.
    Callables must accept numpy arrays and evaluate elementwise.
    """

    __slots__ = ("_fn", "poly")

    def __init__(self, fn: Optional[Callable] = None,
                 poly: Optional[Polynomial] = None):
        if fn is None and poly is None:
            raise ValueError("a callable or a Polynomial is required")
        if poly is not None and not isinstance(poly, Polynomial):
            raise TypeError("poly must be a Polynomial")
        self.poly = poly
        if fn is None:
            self._fn = lambda x, _p=poly: poly_eval(_p, x)
        else:
            self._fn = fn
            if poly is not None:
                # A handle tagged polynomial must agree with its
                # coefficients; probe a few points to enforce that.
                probe = np.array([0.0, 0.31, 0.5, 0.77, 1.0])
                got = np.asarray(fn(probe), dtype=float)
                want = poly_eval(poly, probe)
                scale = max(1.0, float(np.max(np.abs(want))))
                if np.max(np.abs(got - want)) > 1e-12 * scale:
                    raise ValueError(
                        "callable disagrees with the attached polynomial"
                    )

    @classmethod
    def from_polynomial(cls, p: Polynomial) -> "FunctionHandle":
        return cls(poly=p)

    @classmethod
    def from_callable(cls, fn: Callable, vectorized: bool = True) -> "FunctionHandle":
        if not vectorized:
            fn = np.vectorize(fn, otypes=[float])
        return cls(fn=fn)

    @property
    def kind(self) -> str:
        return "polynomial" if self.poly is not None else "generic"

    def __call__(self, x):
        out = np.asarray(self._fn(np.asarray(x, dtype=float)), dtype=float)
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class GridSpec:
    """Strictly increasing evaluation points on [0, 1] with both endpoints."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or pts.size < 2:
            raise ValueError("a grid needs at least the two endpoints")
        if pts[0] != 0.0 or pts[-1] != 1.0:
            raise ValueError("grid must start at 0 and end at 1")
        if not np.all(np.diff(pts) > 0):
            raise ValueError("grid points must be strictly increasing")
        pts = pts.copy()
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    @property
    def count(self) -> int:
        return self.points.size

    @classmethod
    def uniform(cls, count: int) -> "GridSpec":
        if count < 2:
            raise ValueError("count must be at least 2")
        return cls(np.linspace(0.0, 1.0, count))

    @classmethod
    def chebyshev(cls, count: int = 257) -> "GridSpec":
        """Chebyshev-spaced points, denser near the endpoints."""
        if count < 2:
            raise ValueError("count must be at least 2")
        i = np.arange(count)
        pts = 0.5 * (1.0 - np.cos(np.pi * i / (count - 1)))
        pts[0], pts[-1] = 0.0, 1.0
        return cls(pts)


DEFAULT_SUP_GRID = GridSpec.chebyshev(257)


class C0Function:
    """A function f = x(1-x) h stored through its cofactor h.

    The represented function vanishes at both endpoints by construction.
    ``norm0`` caches the sup of |h|, the natural norm of the pinned
    space; it is estimated on a grid at construction unless supplied.
    """

    def __init__(self, h, norm_grid: Optional[GridSpec] = None,
                 norm0: Optional[float] = None):
        if isinstance(h, Polynomial):
            h = FunctionHandle.from_polynomial(h)
        elif callable(h) and not isinstance(h, FunctionHandle):
            h = FunctionHandle.from_callable(h)
        if not isinstance(h, FunctionHandle):
            raise TypeError("h must be a FunctionHandle, Polynomial, or callable")
        self.h = h
        if norm0 is None:
            norm0 = sup_norm(h, norm_grid or DEFAULT_SUP_GRID)
        self.norm0 = float(norm0)

    def value(self, x):
        return psi_values(x) * self.h(x)

    __call__ = value

    def as_polynomial(self) -> Polynomial:
        """The represented function itself, available on the exact path."""
        if self.h.poly is None:
            raise ValueError("cofactor carries no exact coefficients")
        return PSI * self.h.poly

    @classmethod
    def from_pinned_polynomial(cls, p: Polynomial,
                               norm_grid: Optional[GridSpec] = None) -> "C0Function":
        """Build from a polynomial vanishing at 0 and 1."""
        return cls(deflate_by_psi(p), norm_grid=norm_grid)


def poly_eval(p: Polynomial, x):
    """Horner-scheme value of p at x (scalar or array)."""
    out = npoly.polyval(np.asarray(x, dtype=float), p.coeffs)
    out = np.asarray(out, dtype=float)
    return float(out) if out.ndim == 0 else out


def poly_calculus(p: Polynomial):
    """Exact coefficient-level (derivative, antiderivative) pair.

    The antiderivative takes zero constant term.
    """
    if p.degree == 0:
        deriv = Polynomial.zero()
    else:
        deriv = Polynomial(npoly.polyder(p.coeffs))
    anti = Polynomial(npoly.polyint(p.coeffs))
    return deriv, anti


def deflate_by_psi(p: Polynomial, tol: float = ENDPOINT_TOL) -> Polynomial:
    """Divide out the weight x(1-x) from a polynomial vanishing at 0 and 1.

    Synthetic division by x and then by (1-x). The endpoint values must
    vanish to within ``tol`` scaled by the coefficient magnitude,
    otherwise the input is rejected.
    """
    if p.is_zero:
        return Polynomial.zero()
    scale = max(1.0, float(np.max(np.abs(p.coeffs))))
    v0 = float(p.coeffs[0])
    v1 = float(np.sum(p.coeffs))
    if abs(v0) > tol * scale or abs(v1) > tol * scale:
        raise ValueError(
            f"polynomial does not vanish at the endpoints "
            f"(p(0)={v0:.3e}, p(1)={v1:.3e})"
        )
    if p.degree < 2:
        # Only the zero polynomial vanishes at both endpoints below degree 2.
        return Polynomial.zero()
    a = p.coeffs[1:]
    q = np.cumsum(a)[:-1]
    return Polynomial(q)


@functools.lru_cache(maxsize=None)
def jacobi11(k: int) -> Polynomial:
    """Jacobi polynomial with both parameters 1, degree k, on [-1, 1].

    Standard normalization, generated by the three-term recurrence. The
    endpoint identity value(1) = k + 1 is checked after generation as a
    guard on the recurrence coefficients.
    """
    if k < 0:
        raise ValueError("degree must be nonnegative")
    if k == 0:
        return Polynomial([1.0])
    prev = np.array([1.0])
    cur = np.array([0.0, 2.0])
    for i in range(2, k + 1):
        a = (2 * i + 1) * (i + 1) * np.concatenate(([0.0], cur))
        b = i * (i + 1) * np.concatenate((prev, np.zeros(a.size - prev.size)))
        prev, cur = cur, (a - b) / (i * (i + 2))
    val1 = float(np.sum(cur))
    if abs(val1 - (k + 1)) > 1e-10 * (k + 1):
        raise RuntimeError(f"recurrence check failed at degree {k}: value(1)={val1}")
    return Polynomial(cur)


def _compose(outer: np.ndarray, inner: np.ndarray) -> np.ndarray:
    out = np.array([0.0])
    for c in outer[::-1]:
        out = npoly.polyadd(npoly.polymul(out, inner), np.array([c]))
    return out


@functools.lru_cache(maxsize=None)
def limit_eigenpoly(j: int) -> Polynomial:
    """Monic limit eigenpolynomial of degree j.

    Degree 0 gives 1 and degree 1 gives x - 1/2. For j >= 2 the result
    is the monic multiple of x(x-1) times the degree-(j-2) Jacobi(1,1)
    polynomial evaluated at 2x - 1; it vanishes at both endpoints.
    """
    if j < 0:
        raise ValueError("index must be nonnegative")
    if j == 0:
        return Polynomial([1.0])
    if j == 1:
        return Polynomial([-0.5, 1.0])
    inner = np.array([-1.0, 2.0])
    core = _compose(jacobi11(j - 2).coeffs, inner)
    full = npoly.polymul(np.array([0.0, -1.0, 1.0]), core)
    monic = full / full[-1]
    monic[-1] = 1.0
    return Polynomial(monic)


def sup_norm(f: FunctionHandle, g: Optional[GridSpec] = None) -> float:
    """Grid maximum of |f| with one golden-section refinement pass.

    This is a lower estimate of the true sup: the refinement only
    sharpens the value near the discrete maximizer.
    """
    if g is None:
        g = DEFAULT_SUP_GRID
    pts = g.points
    vals = np.abs(np.asarray(f(pts), dtype=float))
    i = int(np.argmax(vals))
    best = float(vals[i])
    a = pts[i - 1] if i > 0 else pts[i]
    b = pts[i + 1] if i + 1 < pts.size else pts[i]
    if b > a:
        invphi = (math.sqrt(5.0) - 1.0) / 2.0
        c = b - invphi * (b - a)
        d = a + invphi * (b - a)
        fc = abs(float(f(c)))
        fd = abs(float(f(d)))
        best = max(best, fc, fd)
        for _ in range(60):
            if fc >= fd:
                b, d, fd = d, c, fc
                c = b - invphi * (b - a)
                fc = abs(float(f(c)))
                best = max(best, fc)
            else:
                a, c, fc = c, d, fd
                d = a + invphi * (b - a)
                fd = abs(float(f(d)))
                best = max(best, fd)
    return best


def omega(f: FunctionHandle, order: int, delta: float,
          g: Optional[GridSpec] = None) -> float:
    """Grid estimate of the modulus of smoothness of the given order.

    Order 1 scans all grid pairs within distance delta. Order 2 scans
    symmetric second differences with 32 step sizes up to and including
    delta, keeping both offset points inside [0, 1]. Both are lower
    estimates of the true moduli.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if order == 1:
        if delta > 1.0:
            raise ValueError("order-1 modulus needs delta <= 1")
    elif order == 2:
        if delta > 0.5:
            raise ValueError("order-2 modulus needs delta <= 1/2")
    else:
        raise ValueError("order must be 1 or 2")
    if g is None:
        g = DEFAULT_SUP_GRID
    pts = g.points
    best = 0.0
    if order == 1:
        vals = np.asarray(f(pts), dtype=float)
        reach = delta * (1.0 + 1e-12) + 1e-15
        for i in range(pts.size - 1):
            hi = int(np.searchsorted(pts, pts[i] + reach, side="right"))
            if hi > i + 1:
                window = np.abs(vals[i + 1:hi] - vals[i])
                m = float(window.max())
                if m > best:
                    best = m
        return best
    steps = delta * np.arange(1, 33) / 32.0
    for t in steps:
        mask = (pts >= t - 1e-15) & (pts <= 1.0 - t + 1e-15)
        if not np.any(mask):
            continue
        x = pts[mask]
        xp = np.clip(x + t, 0.0, 1.0)
        xm = np.clip(x - t, 0.0, 1.0)
        d2 = np.abs(np.asarray(f(xp)) - 2.0 * np.asarray(f(x))
                    + np.asarray(f(xm)))
        m = float(d2.max())
        if m > best:
            best = m
    return best
