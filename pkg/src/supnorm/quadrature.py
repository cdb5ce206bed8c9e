"""Shared quadrature machinery and log-domain scalar helpers.

All heavy integrands in this package are assembled in log space and
exponentiated once per node (hyperbolic factors overflow doubles already
at moderate weight), so the central utility here is ``integrate_exp_log``:
it integrates exp(f_log) over a finite interval after factoring out the
maximum of f_log, and returns the logarithm of the integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

LOG2 = math.log(2.0)


class QuadratureError(RuntimeError):
    """Raised when adaptive quadrature fails to meet the requested tolerance."""


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-14
    max_subdivisions: int = 200
    r_max_policy: str | float = "auto"

    def __post_init__(self) -> None:
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        if isinstance(self.r_max_policy, str) and self.r_max_policy != "auto":
            raise ValueError("r_max_policy must be 'auto' or a number")


DEFAULT_QUAD = QuadratureConfig()


@dataclass(frozen=True)
class TruncatedValue:
    """A computed value together with a one-sided truncation-tail bound.

    The untruncated quantity lies in [value - tail_bound, value + tail_bound]
    by construction of the estimate.
    """

    value: complex
    tail_bound: float

    def __post_init__(self) -> None:
        if self.tail_bound < 0:
            raise ValueError("tail_bound must be nonnegative")


def log_cosh(x: float) -> float:
    """log(cosh x), safe for |x| up to ~1e6."""
    ax = abs(x)
    return ax + math.log1p(math.exp(-2.0 * ax)) - LOG2


def log_sinh(x: float) -> float:
    """log(sinh x) for x > 0, safe for large x."""
    if x <= 0:
        raise ValueError("log_sinh requires x > 0")
    if x < 1e-4:
        return math.log(x) + math.log1p(x * x / 6.0)
    return x + math.log1p(-math.exp(-2.0 * x)) - LOG2


def log_sinhc(x: float) -> float:
    """log(sinh(x)/x) for x >= 0; series branch keeps x -> 0 regular."""
    if x < 0:
        raise ValueError("log_sinhc requires x >= 0")
    if x < 1e-4:
        return math.log1p(x * x / 6.0)
    return log_sinh(x) - math.log(x)


def stable_acosh(x: float) -> float:
    """arccosh(x) for x >= 1, accurate near x = 1 (asinh of sqrt(x^2-1))."""
    if x < 1.0:
        raise ValueError("stable_acosh requires x >= 1")
    return math.asinh(math.sqrt((x - 1.0) * (x + 1.0)))


def np_log_cosh(x: np.ndarray) -> np.ndarray:
    ax = np.abs(x)
    return ax + np.log1p(np.exp(-2.0 * ax)) - LOG2


def np_log_sinhc(x: np.ndarray) -> np.ndarray:
    """log(sinh(x)/x) for x >= 0, vectorized, regular at 0."""
    x = np.asarray(x, dtype=float)
    small = x < 1e-4
    xs = np.where(small, 1.0, x)
    big = xs + np.log1p(-np.exp(-2.0 * xs)) - LOG2 - np.log(xs)
    return np.where(small, np.log1p(x * x / 6.0), big)


def np_log_sinh(x: np.ndarray) -> np.ndarray:
    """log(sinh x) for x > 0, vectorized."""
    return np_log_sinhc(x) + np.log(x)


def np_stable_acosh(x: np.ndarray) -> np.ndarray:
    """arccosh for x >= 1, vectorized and accurate near 1."""
    x = np.asarray(x, dtype=float)
    return np.arcsinh(np.sqrt(np.maximum((x - 1.0) * (x + 1.0), 0.0)))


def integrate_exp_log(f_log, lo: float, hi: float,
                      q: QuadratureConfig = DEFAULT_QUAD,
                      n_scan: int = 257) -> float:
    """Return log of the integral of exp(f_log(u)) over [lo, hi].

    The peak of f_log is located on a scan grid and factored out before
    the adaptive pass, so the integrand handed to QUADPACK is O(1).
    """
    if not hi > lo:
        raise ValueError("integration interval is empty")
    us = np.linspace(lo, hi, n_scan)
    vals = np.array([f_log(u) for u in us])
    finite = vals[np.isfinite(vals)]
    if finite.size == 0:
        raise QuadratureError("integrand log-values are all non-finite")
    m = float(finite.max())

    def g(u: float) -> float:
        fl = f_log(u)
        return math.exp(fl - m) if math.isfinite(fl) else 0.0

    val, err = integrate.quad(g, lo, hi, epsabs=q.abs_tol, epsrel=q.rel_tol,
                              limit=q.max_subdivisions)
    if val <= 0.0:
        raise QuadratureError("integral evaluated to a nonpositive value")
    if err > max(q.abs_tol, 10.0 * q.rel_tol * abs(val)):
        raise QuadratureError(
            f"quadrature error estimate {err:.3e} exceeds tolerance "
            f"(value {val:.6e})")
    return m + math.log(val)


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Cached Gauss-Legendre nodes/weights on [-1, 1]."""
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def gl_nodes(a: float, b: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes/weights mapped to [a, b]."""
    x, w = gauss_legendre(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w
