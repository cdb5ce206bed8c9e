"""Weight-k heat kernel on H, its Gaussian envelope, and the periodized sum.

The point-pair kernel is

    K_k(t; rho) = sqrt(2) e^{-t/4} (4 pi t)^{-3/2}
                  * Int_rho^oo r e^{-r^2/4t} (cosh r - cosh rho)^{-1/2}
                    T_2k(cosh(r/2)/cosh(rho/2)) dr,

with T_2k(X) = cosh(2k arccosh X).  The inverse-square-root endpoint is
removed by the substitution r = rho + u^2 together with the identity
cosh r - cosh rho = 2 sinh(rho + u^2/2) sinh(u^2/2): the Jacobian cancels
the blow-up exactly and the transformed integrand is smooth at u = 0.
Integrands are assembled in log space (the Chebyshev factor overflows
doubles already at k ~ 200) and every kernel has a companion *_log entry
point returning log K, which stays finite where e^{k^2 t} does not.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .geometry import UpperHalfPoint
from .orbits import empirical_counting_constant, enumerate_orbit
from .quadrature import (DEFAULT_QUAD, LOG2, QuadratureConfig,
                         TruncatedValue, integrate_exp_log, log_cosh,
                         log_sinh, log_sinhc, stable_acosh)

#: Floor on log-magnitudes before exponentiation, just above the smallest
#: subnormal double: keeps signs of deeply underflowing quantities intact.
_LOG_TINY = -744.0

#: Safety factor on the empirical counting constant entering tail bounds.
TAIL_SAFETY = 2.0


@dataclass(frozen=True)
class HeatParams:
    """Half-weight k (the modular weight is 2k) and heat time t > 0."""

    k: int
    t: float

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("k must be a positive integer")
        if not self.t > 0:
            raise ValueError("t must be positive")


def chebyshev_T2k_log(k: int, x: float) -> float:
    """log T_2k(x) = log cosh(2k arccosh x) for x >= 1, overflow-free."""
    if x < 1.0:
        raise ValueError("chebyshev_T2k_log requires x >= 1")
    if k < 1:
        raise ValueError("k must be a positive integer")
    return log_cosh(2.0 * k * stable_acosh(x))


def _r_upper_limit(p: HeatParams, rho: float, q: QuadratureConfig,
                   half_gaussian: bool = False) -> float:
    """Upper truncation point beyond which the integrand is below abs_tol.

    The exponent is bounded by k r - r^2/(4t) (or r^2/(8t) for the envelope
    integral); the peak sits at 2kt (resp. 4kt) and the Gaussian width is
    sqrt(2t) (resp. 2 sqrt(t)).
    """
    if not isinstance(q.r_max_policy, str):
        return float(q.r_max_policy)
    denom = 8.0 * p.t if half_gaussian else 4.0 * p.t
    peak = p.k * denom / 2.0
    slack = math.log(1.0 / q.abs_tol) + 60.0
    return max(rho, peak) + math.sqrt(denom * slack) + 5.0


def _log_prefactor(t: float) -> float:
    # sqrt(2) e^{-t/4} (4 pi t)^{-3/2}
    return 0.5 * math.log(2.0) - t / 4.0 - 1.5 * math.log(4.0 * math.pi * t)


def heat_kernel_point_log(p: HeatParams, rho: float,
                          q: QuadratureConfig = DEFAULT_QUAD) -> float:
    """log K_k(t; rho).  Finite even where K itself overflows a double."""
    if rho < 0:
        raise ValueError("rho must be nonnegative")
    k, t = p.k, p.t
    if rho == 0.0:
        # cosh r - 1 = 2 sinh^2(r/2) and T_2k(cosh(r/2)) = cosh(kr); the
        # residual r / sinh(r/2) = 2 / sinhc(r/2) is regular at r = 0.
        r_max = _r_upper_limit(p, 0.0, q)

        def f_log(r: float) -> float:
            if r <= 0.0:
                return math.log(2.0) - 0.5 * math.log(2.0)
            return (math.log(2.0) - log_sinhc(0.5 * r) - 0.5 * math.log(2.0)
                    - r * r / (4.0 * t) + log_cosh(k * r))

        return _log_prefactor(t) + integrate_exp_log(f_log, 0.0, r_max, q)

    log_cosh_half_rho = log_cosh(0.5 * rho)
    u_max = math.sqrt(_r_upper_limit(p, rho, q) - rho)

    def f_log(u: float) -> float:
        if u <= 0.0:
            u = 0.0
        r = rho + u * u
        x = math.exp(log_cosh(0.5 * r) - log_cosh_half_rho)
        return (math.log(2.0) + math.log(r) - r * r / (4.0 * t)
                + chebyshev_T2k_log(k, max(x, 1.0))
                - 0.5 * (log_sinh(rho + 0.5 * u * u) + log_sinhc(0.5 * u * u)))

    return _log_prefactor(t) + integrate_exp_log(f_log, 0.0, u_max, q)


def heat_kernel_point_log_batch(p: HeatParams, rhos,
                                q: QuadratureConfig = DEFAULT_QUAD,
                                nodes_per_panel: int = 12,
                                n_panels: int = 40):
    """log K_k(t; rho) for an array of radii via composite Gauss-Legendre.

    All radii share one fixed panel layout in the substitution variable u,
    evaluated as a single numpy batch; orbit sums over ~1e5 elements need
    this (one adaptive quadrature per element would dominate the runtime).
    Agreement with ``heat_kernel_point_log`` is at the 1e-10 level.
    """
    from .quadrature import (gauss_legendre, np_log_cosh, np_log_sinh,
                             np_log_sinhc)

    rhos = np.asarray(rhos, dtype=float)
    if np.any(rhos < 0):
        raise ValueError("radii must be nonnegative")
    k, t = p.k, p.t
    flat = np.atleast_1d(rhos).ravel()
    u_max = np.sqrt(np.maximum(
        np.array([_r_upper_limit(p, float(r), q) for r in flat]) - flat,
        1.0))
    x01, w01 = gauss_legendre(nodes_per_panel)
    # panel edges uniform in u per radius: (n_rho, n_panels + 1)
    edges = np.linspace(0.0, 1.0, n_panels + 1)[None, :] * u_max[:, None]
    half = 0.5 * (edges[:, 1:] - edges[:, :-1])           # (n_rho, P)
    mid = 0.5 * (edges[:, 1:] + edges[:, :-1])
    u = mid[:, :, None] + half[:, :, None] * x01[None, None, :]
    wts = half[:, :, None] * w01[None, None, :]

    rho_c = flat[:, None, None]
    r = rho_c + u * u
    # a = 2k arccosh(X) with X = cosh(r/2)/cosh(rho/2), via
    # X^2 - 1 = expm1(2 dl), dl = log cosh(r/2) - log cosh(rho/2) >= 0;
    # for large dl use arccosh(X) = dl + log 2 to avoid expm1 overflow.
    dl = np.maximum(np_log_cosh(0.5 * r) - np_log_cosh(0.5 * rho_c), 0.0)
    acosh_x = np.where(
        dl > 15.0, dl + LOG2,
        np.arcsinh(np.sqrt(np.expm1(2.0 * np.minimum(dl, 16.0)))))
    log_t2k = np_log_cosh(2.0 * k * acosh_x)
    with np.errstate(divide="ignore"):
        f_log = (math.log(2.0) + np.log(r) - r * r / (4.0 * t) + log_t2k
                 - 0.5 * (np_log_sinh(rho_c + 0.5 * u * u)
                          + np_log_sinhc(0.5 * u * u)))
    m = f_log.max(axis=(1, 2), keepdims=True)
    vals = np.sum(np.exp(f_log - m) * wts, axis=(1, 2))
    out = _log_prefactor(t) + m[:, 0, 0] + np.log(vals)

    zero = flat == 0.0
    if np.any(zero):
        v0 = heat_kernel_point_log(p, 0.0, q)
        out = np.where(zero, v0, out)
    return out.reshape(np.atleast_1d(rhos).shape)


def heat_kernel_point(p: HeatParams, rho: float,
                      q: QuadratureConfig = DEFAULT_QUAD) -> float:
    """K_k(t; rho) as a double; overflows to inf for extreme (k, t)."""
    lv = heat_kernel_point_log(p, rho, q)
    try:
        return math.exp(lv)
    except OverflowError:
        return math.inf


def g_k_envelope_log(p: HeatParams,
                     q: QuadratureConfig = DEFAULT_QUAD) -> float:
    """log G_k(t), the rho-free Gaussian envelope factor of K_k.

    G_k(t) = e^{-t/4} (4 pi t)^{-3/2} Int_0^oo r e^{-r^2/8t}
             cosh(kr)/sinh(r/2) dr; the r -> 0 limit of r/sinh(r/2) is 2.
    """
    k, t = p.k, p.t
    r_max = _r_upper_limit(p, 0.0, q, half_gaussian=True)

    def f_log(r: float) -> float:
        if r <= 0.0:
            return math.log(2.0)
        return (math.log(2.0) - log_sinhc(0.5 * r)
                - r * r / (8.0 * t) + log_cosh(k * r))

    pref = -t / 4.0 - 1.5 * math.log(4.0 * math.pi * t)
    return pref + integrate_exp_log(f_log, 0.0, r_max, q)


def g_k_envelope(p: HeatParams, q: QuadratureConfig = DEFAULT_QUAD) -> float:
    lv = g_k_envelope_log(p, q)
    try:
        return math.exp(lv)
    except OverflowError:
        return math.inf


def f_k_defect(p: HeatParams, rho: float, r: float) -> float:
    """The directional-derivative defect of F_k(t; rho, r), closed form.

    Returns sinh(r) dF/drho + sinh(rho) dF/dr for
    F_k = r e^{-r^2/4t} sinh(r)^{-1} T_2k(cosh(r/2)/cosh(rho/2)).
    Both contributing terms are nonpositive on 0 < rho <= r; the value is
    strictly negative there.  The magnitude is clamped at the smallest
    normal double so deep Gaussian underflow cannot wash out the sign.
    """
    if not (0.0 < rho <= r):
        raise ValueError("requires 0 < rho <= r")
    k, t = p.k, p.t
    lch_r = log_cosh(0.5 * r)
    lch_rho = log_cosh(0.5 * rho)
    x = math.exp(lch_r - lch_rho)
    u = stable_acosh(max(x, 1.0))

    # first term: sinh(rho) * (1/r - r/2t - coth r); strictly negative
    first = math.sinh(rho) * (1.0 / r - r / (2.0 * t)
                              - math.cosh(r) / math.sinh(r))
    # second: (T'/T)(X) * sinh(r/2) sinh(rho/2)
    #         * (cosh^2(rho/2) - cosh^2(r/2)) / cosh^2(rho/2)
    if u < 1e-8:
        dlogT = 4.0 * k * k  # limit of 2k tanh(2k u)/sinh(u) at u = 0
    else:
        dlogT = 2.0 * k * math.tanh(2.0 * k * u) / math.sinh(u)
    bracket = (math.expm1(2.0 * (lch_rho - lch_r))  # (X^-2 - 1) < 0 for r>rho
               * math.exp(2.0 * lch_r - 2.0 * lch_rho))
    # bracket = (cosh^2(rho/2) - cosh^2(r/2)) / cosh^2(rho/2), rewritten in
    # log space to survive large r
    second = dlogT * math.sinh(0.5 * r) * math.sinh(0.5 * rho) * bracket

    inner = first + second
    log_mag = (math.log(r) - r * r / (4.0 * t) - log_sinh(r)
               + chebyshev_T2k_log(k, max(x, 1.0))
               + math.log(abs(inner)) if inner != 0.0 else -math.inf)
    if not math.isfinite(log_mag):
        return 0.0
    return math.copysign(math.exp(max(log_mag, _LOG_TINY)), inner)


def f_k_value(p: HeatParams, rho: float, r: float) -> float:
    """F_k(t; rho, r) itself, for finite-difference cross-checks."""
    if rho <= 0 or r <= 0:
        raise ValueError("rho and r must be positive")
    x = math.exp(log_cosh(0.5 * r) - log_cosh(0.5 * rho))
    lv = (math.log(r) - r * r / (4.0 * p.t) - log_sinh(r)
          + chebyshev_T2k_log(p.k, max(x, 1.0)))
    return math.exp(lv)


def _log_gaussian_growth_integral(rho_from: float, t: float) -> float:
    """log of Int_rho^oo e^{-s^2/8t} e^s ds, via erfcx for stability."""
    x0 = (rho_from - 4.0 * t) / math.sqrt(8.0 * t)
    base = 2.0 * t + 0.5 * math.log(2.0 * math.pi * t)
    if x0 <= 0.0:
        return base + math.log(special.erfc(x0))
    return base + math.log(special.erfcx(x0)) - x0 * x0


def automorphic_heat_kernel_diag(p: HeatParams, z: UpperHalfPoint,
                                 rho_max: float,
                                 q: QuadratureConfig = DEFAULT_QUAD,
                                 strategy: str = "entry-sweep") -> TruncatedValue:
    """Truncated diagonal periodized heat kernel with a conservative tail.

    value = sum over dist(z, gz) <= rho_max of phase(g, z)^k K_k(t; rho_g);
    tail_bound = A * G_k(t) * Int_rho_max^oo e^{-s^2/8t} e^s ds with A twice
    the largest enumerated value of N(rho; z) e^-rho (counting-constant
    estimate with safety factor).
    """
    entries = enumerate_orbit(z, rho_max, strategy=strategy)
    rhos = np.array([e.rho for e in entries])
    # orbits carry many repeated radii (symmetric elements); evaluate each
    # distinct radius once
    uniq, inverse = np.unique(np.round(rhos, 12), return_inverse=True)
    logs = heat_kernel_point_log_batch(p, uniq, q)[inverse]
    phases = np.array([e.phase for e in entries]) ** p.k
    with np.errstate(under="ignore", over="raise"):
        total = complex(np.sum(phases * np.exp(logs)))

    a_const = TAIL_SAFETY * empirical_counting_constant(entries)
    log_tail = (g_k_envelope_log(p, q)
                + _log_gaussian_growth_integral(rho_max, p.t)
                + math.log(a_const))
    try:
        tail = math.exp(log_tail)
    except OverflowError:
        tail = math.inf
    return TruncatedValue(total, tail)


def laplace_identity(a: float, b: float,
                     q: QuadratureConfig = DEFAULT_QUAD) -> tuple[float, float]:
    """Quadrature vs closed form for Int_0^oo e^{-a^2 t - b^2/4t} t^{-1/2} dt.

    The closed form is (sqrt(pi)/a) e^{-ab}; both values are returned so the
    caller can compare them.
    """
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")

    def f_log(t: float) -> float:
        if t <= 0.0:
            return -math.inf
        return -a * a * t - b * b / (4.0 * t) - 0.5 * math.log(t)

    hi = (math.log(1.0 / q.abs_tol) + 50.0) / (a * a) + b / a + 1.0
    numeric = math.exp(integrate_exp_log(f_log, 0.0, hi, q))
    closed = math.sqrt(math.pi) / a * math.exp(-a * b)
    return numeric, closed


def phase_power(phase: complex, k: int) -> complex:
    """phase^k without drifting off the unit circle for moderate k."""
    return cmath.exp(1j * k * cmath.phase(phase))
