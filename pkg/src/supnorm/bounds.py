"""Explicit upper bounds for the Bergman diagonal and sup-norm growth scans.

Three strands live here:

* the two-radius upper bound ``proposition41_bound`` with its computed
  constant ``compute_c_delta`` and the auxiliary decreasing function
  ``h_function``;
* cusp-strip analysis: the horocycle maximizer y = k/(2 pi), the
  integral-test comparison of the horocycle sum against a Gamma-function
  ratio, and the subgroup orbit-sum comparison;
* experimental scans of sup_z S_k over regions of the modular surface and
  least-squares growth-exponent fits on (log k, log sup).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, optimize

from .geometry import UpperHalfPoint
from .heat_kernel import HeatParams, heat_kernel_point_log_batch
from .modular_forms import OrthonormalBasis, bergman_kernel_grid
from .orbits import (empirical_counting_constant, enumerate_orbit,
                     is_in_gamma0)
from .quadrature import (DEFAULT_QUAD, QuadratureConfig, TruncatedValue,
                         integrate_exp_log, log_cosh, log_sinh, log_sinhc)

LOG4 = math.log(4.0)
TWO_SQRT2 = 2.0 * math.sqrt(2.0)

#: Safety factor applied to the empirical counting constant in tails.
TAIL_SAFETY = 2.0


@dataclass(frozen=True)
class BoundConfig:
    """Split radius delta, orbit truncation, cusp width, and cached C_delta."""

    delta: float
    rho_max: float
    cusp_width: int = 1
    c_delta: float = 0.0

    def __post_init__(self) -> None:
        if self.delta <= 0 or self.rho_max <= 0 or self.cusp_width < 1:
            raise ValueError("delta, rho_max positive; cusp_width >= 1")

    @classmethod
    def create(cls, delta: float, rho_max: float,
               cusp_width: int = 1) -> "BoundConfig":
        return cls(delta=delta, rho_max=rho_max, cusp_width=cusp_width,
                   c_delta=compute_c_delta(delta))

    def validate(self) -> None:
        """Recompute C_delta and check the cached value matches."""
        fresh = compute_c_delta(self.delta)
        if not math.isclose(fresh, self.c_delta, rel_tol=1e-9):
            raise ValueError(f"cached c_delta {self.c_delta} does not match "
                             f"recomputation {fresh}")


@dataclass(frozen=True)
class ScanResult:
    """Grid maximum of the Bergman diagonal over a region descriptor."""

    weight: int
    sup_value: float
    argmax: UpperHalfPoint
    region: str
    grid_spec: str
    xs: np.ndarray = field(repr=False, default=None)
    ys: np.ndarray = field(repr=False, default=None)
    values: np.ndarray = field(repr=False, default=None)


@dataclass(frozen=True)
class SlopeFit:
    """Least-squares power-law fit on (log k, log sup)."""

    points: tuple
    slope: float
    intercept: float
    residual: float


def _c_delta_ratio(rho: float) -> float:
    """[2 sqrt(log4)(rho+log4)e^{-rho/2}/sqrt(sinh rho)
        + (rho+log4+1)e^{-rho}/2] / (rho e^{-rho})."""
    num = (2.0 * math.sqrt(LOG4) * (rho + LOG4)
           * math.exp(-0.5 * rho - 0.5 * log_sinh(rho))
           + 0.5 * (rho + LOG4 + 1.0) * math.exp(-rho))
    return num / (rho * math.exp(-rho))


def compute_c_delta(delta: float, span: float = 50.0) -> float:
    """sup over rho >= delta of the two-piece bound ratio.

    The ratio tends to a finite limit as rho -> oo (the exp(-rho/2) piece,
    divided by rho e^{-rho}, behaves like 2 sqrt(2 log4) e^{... } -> const),
    so a dense grid on [delta, delta + span] followed by local refinement
    captures the supremum.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    rhos = np.arange(delta, delta + span, 1e-3)
    vals = np.array([_c_delta_ratio(float(r)) for r in rhos])
    i = int(np.argmax(vals))
    lo = float(rhos[max(i - 1, 0)])
    hi = float(rhos[min(i + 1, len(rhos) - 1)])
    best = float(vals[i])
    if hi > lo:
        res = optimize.minimize_scalar(lambda r: -_c_delta_ratio(r),
                                       bounds=(lo, hi), method="bounded",
                                       options={"xatol": 1e-12})
        best = max(best, -float(res.fun))
    # guard the far tail: the ratio is monotone there, check the endpoint
    best = max(best, _c_delta_ratio(delta + span))
    return best


def proposition41_bound(weight: int, z: UpperHalfPoint,
                        cfg: BoundConfig,
                        strategy: str = "entry-sweep") -> TruncatedValue:
    """Two-radius upper bound on S_k(z) from the truncated orbit sum.

    value = k * sum_{rho < delta} 2 sqrt2 cosh^{-weight}(rho/2)
          + C_delta * k * sum_{rho >= delta} rho e^{-rho} cosh^{-weight}(rho/2);
    tail_bound = A * C_delta * k * 4^k (R/k + 1/k^2) e^{-kR}, using
    cosh(rho/2)^{-2k} <= 4^k e^{-k rho} and the e^rho orbit-growth envelope.
    """
    if weight % 2 or weight < 4:
        raise ValueError("weight must be even and >= 4")
    k = weight // 2
    if cfg.c_delta <= 0:
        raise ValueError("config carries no computed c_delta; "
                         "use BoundConfig.create")
    entries = enumerate_orbit(z, cfg.rho_max, strategy=strategy)
    total = 0.0
    for e in entries:
        lcosh = weight * log_cosh(0.5 * e.rho)
        if e.rho < cfg.delta:
            total += k * TWO_SQRT2 * math.exp(-lcosh)
        else:
            total += (cfg.c_delta * k * e.rho
                      * math.exp(-e.rho - lcosh))
    a_const = TAIL_SAFETY * empirical_counting_constant(entries)
    r = cfg.rho_max
    log_tail = (math.log(a_const) + math.log(cfg.c_delta) + math.log(k)
                + k * LOG4 + math.log(r / k + 1.0 / (k * k)) - k * r)
    return TruncatedValue(total, math.exp(log_tail))


def h_function(rho: float, q: QuadratureConfig = DEFAULT_QUAD) -> float:
    """h(rho) = Int_rho^oo r e^{-r/2} (cosh r - cosh rho)^{-1/2} dr.

    Positive and strictly decreasing in rho, bounded by 2 sqrt 2.  The
    endpoint singularity is removed by r = rho + u^2 exactly as in the heat
    kernel integrand.
    """
    if rho <= 0:
        raise ValueError("rho must be positive")
    u_max = math.sqrt(max(120.0 - rho, 4.0))

    def f_log(u: float) -> float:
        if u <= 0.0:
            u = 0.0
        r = rho + u * u
        return (math.log(2.0) + math.log(r) - 0.5 * r
                - 0.5 * (log_sinh(rho + 0.5 * u * u)
                         + log_sinhc(0.5 * u * u)))

    return math.exp(integrate_exp_log(f_log, 0.0, u_max, q))


def base_integral(q: QuadratureConfig = DEFAULT_QUAD) -> float:
    """Int_0^oo r e^{-r/2} (cosh r - 1)^{-1/2} dr, asserted <= 2 sqrt 2.

    With cosh r - 1 = 2 sinh^2(r/2) the integrand is
    sqrt 2 e^{-r/2} / sinhc(r/2), regular at r = 0 with value sqrt 2.
    """

    def f_log(r: float) -> float:
        if r <= 0.0:
            return 0.5 * math.log(2.0)
        return 0.5 * math.log(2.0) - 0.5 * r - log_sinhc(0.5 * r)

    return math.exp(integrate_exp_log(f_log, 0.0, 120.0, q))


def cusp_strip_maximizer(weight: int) -> float:
    """Maximizer y = k/(2 pi) of y^{2k} e^{-4 pi y} (weight = 2k)."""
    if weight < 2 or weight % 2:
        raise ValueError("weight must be even and >= 2")
    return (weight / 2) / (2.0 * math.pi)


def horocycle_sum_vs_gamma_ratio(weight: int,
                                 y: float) -> tuple[float, float]:
    """Integral-test pair: translation sum vs its Gamma-ratio majorant.

    sum_value bounds sum_{n>=1} ((n/2y)^2 + 1)^{-k} / (2y) from above
    (truncated sum plus the exact integral tail); integral_bound is
    Int_0^oo (1+eta^2)^{-k} d eta = sqrt(pi) Gamma(k-1/2) / (2 Gamma(k)).
    """
    if weight < 2 or weight % 2:
        raise ValueError("weight must be even and >= 2")
    if y <= 0:
        raise ValueError("y must be positive")
    k = weight // 2
    n_cut = max(10_000, int(200.0 * y))
    n = np.arange(1, n_cut + 1)
    with np.errstate(under="ignore"):
        s = float(np.sum(((n / (2.0 * y)) ** 2 + 1.0) ** (-k))) / (2.0 * y)
    eta0 = n_cut / (2.0 * y)
    tail, _ = integrate.quad(lambda e: (1.0 + e * e) ** (-k), eta0, np.inf)
    sum_value = s + tail
    integral_bound = math.exp(0.5 * math.log(math.pi) - math.log(2.0)
                              + math.lgamma(k - 0.5) - math.lgamma(k)) \
        if k > 1 else math.pi / 2.0
    return sum_value, integral_bound


def _region_grid(weight: int, region: str, grid: tuple[int, int],
                 y_max: float | None, y_min: float | None,
                 strip_width: float):
    nx, ny = grid
    if nx < 2 or ny < 2:
        raise ValueError("grid must be at least 2x2")
    k = weight / 2.0
    y_lo = math.sqrt(3.0) / 2.0
    if region == "compact":
        y_hi = y_max if y_max is not None else 2.0
        x_lo, x_hi, mask_arc = -0.5, 0.5, True
    elif region == "full":
        y_hi = y_max if y_max is not None else k / (2.0 * math.pi) + 1.0
        y_hi = max(y_hi, y_lo + 0.5)
        x_lo, x_hi, mask_arc = -0.5, 0.5, True
    elif region == "strip":
        y_lo = y_min if y_min is not None else 0.9
        y_hi = y_max if y_max is not None else y_lo + 2.0
        x_lo, x_hi, mask_arc = 0.0, strip_width, False
    else:
        raise ValueError(f"unknown region {region!r}")
    if y_hi <= y_lo:
        raise ValueError("empty y-range for scan region")
    xs = np.linspace(x_lo, x_hi, nx)
    ys = np.geomspace(y_lo, y_hi, ny)
    if region == "full":
        # pin a grid line at the analytic cusp maximizer y = k/(2 pi):
        # otherwise the grid sup can land marginally below the horocycle
        # average taken exactly at that height
        y_star = k / (2.0 * math.pi)
        if y_lo < y_star < y_hi:
            ys[int(np.argmin(np.abs(ys - y_star)))] = y_star
    return xs, ys, mask_arc


def supnorm_scan(weight: int, basis: OrthonormalBasis,
                 region: str = "full", grid: tuple[int, int] = (200, 200),
                 y_max: float | None = None, y_min: float | None = None,
                 strip_width: float = 1.0, refine: bool = True) -> ScanResult:
    """Grid maximum of S_k over a region, with one local refinement pass.

    Regions: "compact" (fundamental domain capped at y_max, default 2),
    "full" (capped at k/(2 pi) + 1, where the cusp analysis places the
    maximizer), "strip" (rectangle [0, strip_width] x [y_min, y_max]).
    The grid is uniform in x and geometric in y.
    """
    if basis.weight != weight:
        raise ValueError("basis weight mismatch")
    xs, ys, mask_arc = _region_grid(weight, region, grid, y_max, y_min,
                                    strip_width)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    vals = bergman_kernel_grid(basis, gx, gy)
    if mask_arc:
        vals = np.where(gx * gx + gy * gy >= 1.0, vals, -np.inf)
    flat = int(np.argmax(vals))
    i, j = np.unravel_index(flat, vals.shape)
    best_x, best_y = float(gx[i, j]), float(gy[i, j])
    best_v = float(vals[i, j])

    if refine:
        dx = (xs[-1] - xs[0]) / (len(xs) - 1)
        # local geometric spacing: delta_y ~ y * log(y_hi/y_lo)/(ny-1)
        dy = best_y * (math.log(ys[-1] / ys[0]) / (len(ys) - 1))
        rx = np.linspace(best_x - dx, best_x + dx, 9)
        ry = np.linspace(max(best_y - dy, float(ys[0])), best_y + dy, 9)
        rgx, rgy = np.meshgrid(rx, ry, indexing="ij")
        rvals = bergman_kernel_grid(basis, rgx, rgy)
        if mask_arc:
            inside = (rgx * rgx + rgy * rgy >= 1.0) \
                & (np.abs(rgx) <= 0.5) & (rgy <= ys[-1])
            rvals = np.where(inside, rvals, -np.inf)
        rflat = int(np.argmax(rvals))
        ri, rj = np.unravel_index(rflat, rvals.shape)
        if float(rvals[ri, rj]) > best_v:
            best_v = float(rvals[ri, rj])
            best_x, best_y = float(rgx[ri, rj]), float(rgy[ri, rj])

    grid_spec = (f"nx={len(xs)},ny={len(ys)},x=[{xs[0]:.6g},{xs[-1]:.6g}],"
                 f"y=[{ys[0]:.6g},{ys[-1]:.6g}],ygeom=1")
    return ScanResult(weight=weight, sup_value=best_v,
                      argmax=UpperHalfPoint(best_x, best_y),
                      region=region, grid_spec=grid_spec,
                      xs=xs, ys=ys, values=vals)


def growth_fit(points) -> SlopeFit:
    """Least squares of log(sup) against log(k) over >= 3 positive points."""
    pts = [(float(k), float(v)) for k, v in points]
    if len(pts) < 3:
        raise ValueError("need at least 3 points")
    if any(k <= 0 or v <= 0 for k, v in pts):
        raise ValueError("points must be positive")
    lk = np.log([k for k, _ in pts])
    lv = np.log([v for _, v in pts])
    slope, intercept = np.polyfit(lk, lv, 1)
    resid = float(np.sqrt(np.mean((lv - (slope * lk + intercept)) ** 2)))
    return SlopeFit(points=tuple(pts), slope=float(slope),
                    intercept=float(intercept), residual=resid)


def subgroup_orbit_comparison(z: UpperHalfPoint, p: HeatParams, n_level: int,
                              rho_max: float,
                              strategy: str = "entry-sweep") -> tuple[float, float]:
    """(sub_sum, full_sum) of K_k(t; rho) over Gamma_0(N) vs the full group.

    Both sums are over the same truncated orbit; the subgroup sum keeps only
    elements with lower-left entry divisible by N, so sub_sum <= full_sum
    term by term (all kernel values are positive).
    """
    if n_level < 1:
        raise ValueError("level must be >= 1")
    entries = enumerate_orbit(z, rho_max, strategy=strategy)
    rhos = np.array([e.rho for e in entries])
    uniq, inverse = np.unique(np.round(rhos, 12), return_inverse=True)
    with np.errstate(under="ignore"):
        vals = np.exp(heat_kernel_point_log_batch(p, uniq))[inverse]
    in_sub = np.array([is_in_gamma0(e.element, n_level) for e in entries])
    full = float(np.sum(vals))
    sub = float(np.sum(vals[in_sub])) if np.any(in_sub) else 0.0
    return sub, full
