"""Acceptance suite: thirteen numbered criteria, one pass/fail line each.

Run with ``pytest -v``: the verbose report gives exactly one PASSED/FAILED
line per criterion, and each test also prints a ``CRITERION nn`` line with
the measured quantities so the margins are visible in the -rA summary.

Criteria 10b and part of 11 are expected to FAIL at desk scale; the tests
print the measured numbers and the analysis of why (elliptic-corner
dominance and small-weight arithmetic factors at low weights), and fail
honestly rather than widening the windows.
"""

import math
import time

import numpy as np
import pytest

from supnorm import (HeatParams, UpperHalfPoint, automorphic_heat_kernel_diag,
                     bergman_kernel_diag, delta_form, dim_cusp_forms,
                     enumerate_orbit, orthonormal_basis)
from supnorm.bounds import (BoundConfig, cusp_strip_maximizer, growth_fit,
                            proposition41_bound, subgroup_orbit_comparison,
                            supnorm_scan)
from supnorm.heat_kernel import (f_k_defect, g_k_envelope_log,
                                 heat_kernel_point_log, laplace_identity)
from supnorm.modular_forms import (apply_laplacian_fd, evaluate_qexp,
                                   fourier_square_integral, petersson_inner,
                                   sym_square_L_from_norm)

SEED = 20260823
SWEEP_WEIGHTS = list(range(12, 61, 4))


def report(num: int, ok: bool, detail: str) -> None:
    print(f"CRITERION {num:02d} [{'PASS' if ok else 'FAIL'}] {detail}")


@pytest.fixture(scope="module")
def bases(basis_cache):
    return basis_cache


@pytest.fixture(scope="module")
def sweep_scans(basis_cache):
    """Compact and full-domain scans for the weight sweep, computed once."""
    out = {}
    for w in SWEEP_WEIGHTS:
        b = basis_cache(w)
        out[w] = {
            "compact": supnorm_scan(w, b, region="compact", grid=(200, 200)),
            "full": supnorm_scan(w, b, region="full", grid=(200, 200)),
        }
    return out


def test_criterion_01_eigenvalue_identity():
    t0 = time.monotonic()
    d = delta_form(80)

    def field(pt):
        v, _ = evaluate_qexp(d, pt)
        return v * pt.y ** 6

    rng = np.random.default_rng(SEED)
    worst_rel = 0.0
    ratios = []
    n = 0
    while n < 10:
        x = rng.uniform(-0.5, 0.5)
        y = rng.uniform(0.95, 1.8)
        if x * x + y * y < 1.05:  # skip the elliptic corner neighborhood
            continue
        n += 1
        z = UpperHalfPoint(x, y)
        target = -30.0 * field(z)
        e1 = abs(apply_laplacian_fd(field, 6, z, 1e-3) - target)
        e2 = abs(apply_laplacian_fd(field, 6, z, 5e-4) - target)
        worst_rel = max(worst_rel, e1 / abs(target))
        ratios.append(e1 / e2)
    elapsed = time.monotonic() - t0
    ratio_ok = all(4.0 * 0.8 <= r <= 4.0 * 1.2 for r in ratios)
    ok = worst_rel < 1e-3 and ratio_ok and elapsed < 10.0
    report(1, ok, f"eigenvalue identity: max rel err {worst_rel:.3e} "
                  f"(tol 1e-3), h-halving ratios "
                  f"[{min(ratios):.2f}, {max(ratios):.2f}] (want 4 +/- 20%), "
                  f"{elapsed:.1f}s")
    assert worst_rel < 1e-3
    assert ratio_ok
    assert elapsed < 10.0


def test_criterion_02_defect_lemma():
    t0 = time.monotonic()
    rng = np.random.default_rng(SEED)
    failures = 0
    for _ in range(10_000):
        t = rng.uniform(1e-6, 10.0)
        rho = rng.uniform(1e-6, 8.0)
        r = rho + rng.uniform(0.0, 8.0)
        k = int(rng.integers(1, 21))
        if not f_k_defect(HeatParams(k, t), rho, r) < 0.0:
            failures += 1
    elapsed = time.monotonic() - t0
    ok = failures == 0 and elapsed < 30.0
    report(2, ok, f"defect lemma: {failures} sign failures in 10000 seeded "
                  f"samples, {elapsed:.1f}s (limit 30s)")
    assert failures == 0
    assert elapsed < 30.0


@pytest.fixture(scope="module")
def kernel_grid_logs():
    """log K on the shared (k, t, rho) grid used by criteria 3 and 4."""
    rhos = np.arange(0.0, 4.0 + 1e-9, 0.05)
    table = {}
    for k in (1, 3, 10):
        for t in (0.1, 1.0, 10.0):
            p = HeatParams(k, t)
            table[(k, t)] = (rhos,
                             np.array([heat_kernel_point_log(p, float(r))
                                       for r in rhos]))
    return table


def test_criterion_03_radial_monotonicity(kernel_grid_logs):
    t0 = time.monotonic()
    min_decrement = math.inf
    for (k, t), (rhos, logs) in kernel_grid_logs.items():
        min_decrement = min(min_decrement, float(np.min(-np.diff(logs))))
    elapsed = time.monotonic() - t0
    tol = 10.0 * (1e-9 + 1e-14)  # 10x combined quadrature tolerance
    ok = min_decrement > tol
    report(3, ok, f"radial monotonicity: min log-decrement {min_decrement:.3e}"
                  f" > {tol:.1e} over 9 (k,t) pairs, grid step 0.05, "
                  f"{elapsed:.1f}s")
    assert min_decrement > tol


def test_criterion_04_gaussian_envelope(kernel_grid_logs):
    worst_gap = math.inf
    for (k, t), (rhos, logs) in kernel_grid_logs.items():
        lg = g_k_envelope_log(HeatParams(k, t))
        gaps = lg - rhos * rhos / (8.0 * t) - logs
        worst_gap = min(worst_gap, float(np.min(gaps)))
    ok = worst_gap > -1e-12
    report(4, ok, f"Gaussian envelope: min log(envelope/K) = {worst_gap:.3e} "
                  f"over the criterion-3 grid (must be >= 0)")
    assert worst_gap > -1e-12


def test_criterion_05_laplace_identity():
    t0 = time.monotonic()
    worst = 0.0
    for a in (0.3, 0.7, 1.0, 1.5, 2.5):
        for b in (0.2, 0.5, 1.0, 2.0, 4.0):
            num, closed = laplace_identity(a, b)
            worst = max(worst, abs(num / closed - 1.0))
    elapsed = time.monotonic() - t0
    ok = worst < 1e-8 and elapsed < 5.0
    report(5, ok, f"Laplace identity: max rel err {worst:.3e} on the 5x5 "
                  f"(a,b) grid (tol 1e-8), {elapsed:.1f}s")
    assert worst < 1e-8
    assert elapsed < 5.0


def test_criterion_06_spectral_inequality(bases):
    t0 = time.monotonic()
    points = [UpperHalfPoint(0.0, 1.2), UpperHalfPoint(0.3, 1.4),
              UpperHalfPoint(-0.2, 2.0)]
    rho_max = 8.0
    worst_ratio = 0.0
    for weight in (12, 24):
        k = weight // 2
        b = bases(weight)
        for t in (0.5, 1.0):
            p = HeatParams(k, t)
            for z in points:
                s = bergman_kernel_diag(weight, z, b)
                lhs = math.exp(k * (k - 1) * t) * s
                tv = automorphic_heat_kernel_diag(p, z, rho_max)
                rhs = tv.value.real + tv.tail_bound
                worst_ratio = max(worst_ratio, lhs / rhs)
    elapsed = time.monotonic() - t0
    ok = worst_ratio <= 1.0 and elapsed < 120.0
    report(6, ok, f"spectral inequality: max e^(k(k-1)t) S_k / "
                  f"(Re K_trunc + tail) = {worst_ratio:.6f} (must be <= 1) "
                  f"over (2k,t) in {{12,24}}x{{0.5,1}}, 3 points, "
                  f"{elapsed:.1f}s")
    assert worst_ratio <= 1.0
    assert elapsed < 120.0


def test_criterion_07_average_identity(bases):
    t0 = time.monotonic()
    worst = 0.0
    detail = []
    for w in range(12, 41, 2):
        b = bases(w)
        if b.dim == 0:
            continue  # nothing to integrate, identity is 0 = 0
        total = sum(petersson_inner(f, f, method="gl").real for f in b.forms)
        rel = abs(total / b.dim - 1.0)
        worst = max(worst, rel)
        detail.append(f"w={w}:{rel:.1e}")
    elapsed = time.monotonic() - t0
    ok = worst < 5e-3 and elapsed < 300.0
    report(7, ok, f"average identity: max |integral S_k - dim|/dim = "
                  f"{worst:.3e} over even weights 12-40 (tol 0.5%), "
                  f"{elapsed:.1f}s")
    assert worst < 5e-3
    assert elapsed < 300.0


def test_criterion_08_two_radius_bound(bases):
    t0 = time.monotonic()
    cfg = BoundConfig.create(1.0, 8.0)
    violations = 0
    min_margin = math.inf
    for w in (12, 24, 40):
        b = bases(w)
        xs = np.linspace(-0.5, 0.5, 20)
        ys = np.geomspace(math.sqrt(3.0) / 2.0, 3.0, 20)
        for x in xs:
            for y in ys:
                if x * x + y * y < 1.0:
                    continue
                z = UpperHalfPoint(float(x), float(y))
                s = bergman_kernel_diag(w, z, b)
                tv = proposition41_bound(w, z, cfg)
                margin = tv.value - tv.tail_bound - s
                min_margin = min(min_margin, margin)
                if margin < 0:
                    violations += 1
    elapsed = time.monotonic() - t0
    ok = violations == 0 and elapsed < 300.0
    report(8, ok, f"two-radius bound: {violations} violations on 20x20 grids "
                  f"for weights 12/24/40, min margin {min_margin:.3e}, "
                  f"{elapsed:.1f}s")
    assert violations == 0
    assert elapsed < 300.0


def test_criterion_09_counting_function():
    t0 = time.monotonic()
    zs = {"2i": UpperHalfPoint(0.0, 2.0),
          "0.3+1.4i": UpperHalfPoint(0.3, 1.4),
          "i": UpperHalfPoint(0.0, 1.0)}
    ratio_ok = True
    details = []
    for name, z in zs.items():
        entries = enumerate_orbit(z, 12.0)
        rhos = np.array([e.rho for e in entries])
        vals = {rho: np.sum(rhos < rho) * math.exp(-rho)
                for rho in (2.0, 4.0, 6.0, 8.0, 10.0, 12.0)}
        assert all(math.isfinite(v) for v in vals.values())
        tail = [vals[r] for r in (8.0, 10.0, 12.0)]
        spread = max(tail) / min(tail)
        ratio_ok &= spread < 3.0
        details.append(f"{name}: N e^-rho={vals[12.0]:.2f}, "
                       f"spread(8..12)={spread:.2f}")
    # strategy cross-check at rho <= 6: exact set equality
    z = zs["0.3+1.4i"]
    sweep = {e.element.key for e in enumerate_orbit(z, 6.0,
                                                    strategy="entry-sweep")}
    bfs = {e.element.key for e in enumerate_orbit(z, 6.0,
                                                  strategy="generator-bfs")}
    strategies_equal = sweep == bfs
    elapsed = time.monotonic() - t0
    ok = ratio_ok and strategies_equal and elapsed < 120.0
    report(9, ok, f"counting function: {'; '.join(details)}; "
                  f"BFS==sweep at rho<=6: {strategies_equal}, {elapsed:.1f}s")
    assert ratio_ok
    assert strategies_equal
    assert elapsed < 120.0


def test_criterion_10a_compact_growth(sweep_scans):
    pts = [(w // 2, sweep_scans[w]["compact"].sup_value)
           for w in SWEEP_WEIGHTS]
    fit = growth_fit(pts)
    ok = 0.7 <= fit.slope <= 1.3
    report(10, ok, f"(a) compact-region growth: slope {fit.slope:.3f} in "
                   f"[0.7, 1.3], residual {fit.residual:.3f}, "
                   f"weights 12..60 step 4")
    assert 0.7 <= fit.slope <= 1.3


def test_criterion_10b_full_domain_growth(sweep_scans):
    pts = [(w // 2, sweep_scans[w]["full"].sup_value) for w in SWEEP_WEIGHTS]
    fit = growth_fit(pts)
    ok = 1.3 <= fit.slope <= 1.7
    report(10, ok, f"(b) full-domain growth: slope {fit.slope:.3f}, "
                   f"window [1.3, 1.7]")
    if not ok:
        print("ANALYSIS: at desk-scale weights the full-domain supremum is "
              "still dominated by the elliptic corner (the compact O(k) law "
              "with a large constant), not by the cusp neighborhood where "
              "the k^1.5 law lives.  Per-weight maxima and locations:")
        for w in SWEEP_WEIGHTS:
            sc = sweep_scans[w]["full"]
            y_star = cusp_strip_maximizer(w)
            print(f"  w={w}: sup={sc.sup_value:.3f} at "
                  f"(x={sc.argmax.x:+.3f}, y={sc.argmax.y:.3f}); "
                  f"cusp maximizer y=k/2pi={y_star:.3f}")
        from supnorm import orthonormal_basis as _basis
        cusp_pts = []
        for w in SWEEP_WEIGHTS:
            y_star = cusp_strip_maximizer(w)
            horo = sum(fourier_square_integral(f, y_star)
                       for f in _basis(w).forms)
            cusp_pts.append((w // 2, horo))
        cusp_fit = growth_fit(cusp_pts)
        tail_fit = growth_fit(cusp_pts[3:])  # weights >= 24
        print(f"  the pure cusp quantity (horocycle average at y = k/2pi) "
              f"has full-sweep slope {cusp_fit.slope:.3f} and slope "
              f"{tail_fit.slope:.3f} over weights >= 24 -- the latter inside "
              f"the window.  Two desk-scale effects flatten the full-domain "
              f"fit: the elliptic-point values dominate the sup at several "
              f"weights, and the weight-12..20 cusp values are inflated by "
              f"anomalously large first-coefficient arithmetic factors.")
    assert 1.3 <= fit.slope <= 1.7, (
        f"measured full-domain slope {fit.slope:.3f} is outside [1.3, 1.7]; "
        "see the printed per-weight analysis (elliptic-corner dominance at "
        "desk scale)")


def test_criterion_11_cusp_localization(sweep_scans, bases):
    rows = []
    argmax_ok = True
    chain_ok = True
    for w in [w for w in SWEEP_WEIGHTS if w >= 24]:
        sc = sweep_scans[w]["full"]
        y_star = cusp_strip_maximizer(w)
        dy = abs(sc.argmax.y - y_star)
        argmax_ok &= dy <= 0.5
        b = bases(w)
        horo = sum(fourier_square_integral(f, y_star) for f in b.forms)
        # at cusp-localized weights horo and sup agree to ~14 digits (the
        # kernel is x-constant there), so compare with a relative tolerance
        # instead of testing the sign of floating-point noise
        holds = horo <= sc.sup_value * (1.0 + 1e-9)
        chain_ok &= holds
        rows.append(f"w={w}: |y_arg - k/2pi|={dy:.2f}, "
                    f"horo={horo:.3f} <= sup={sc.sup_value:.3f}: {holds}")
    ok = argmax_ok and chain_ok
    report(11, ok, f"cusp localization: argmax within 0.5 of k/2pi for all "
                   f"w>=24: {argmax_ok}; horocycle <= sup chain: {chain_ok}")
    for r in rows:
        print("  " + r)
    if not argmax_ok:
        print("ANALYSIS: at weights 24, 36, 48 the grid argmax sits at the "
              "order-3 elliptic corner (x = +/-1/2, y = sqrt3/2), and at "
              "weight 28 at the order-2 elliptic point (0, 1) -- not in the "
              "cusp strip.  The elliptic-point values follow the O(k) "
              "compact law but with a large constant, and they exceed the "
              "cusp-strip value until the k^1.5 cusp law overtakes them "
              "(weights 32, 40, 44, 52, 56, 60 in this sweep are already "
              "cusp-localized).  The horocycle-average inequality, which is "
              "the quantitative content of the lower-bound chain, holds at "
              "every weight.")
    assert chain_ok
    assert argmax_ok, (
        "scan argmax is not cusp-localized for all weights >= 24 at desk "
        "scale; see printed analysis (corner dominance at w in {24,36,48})")


def test_criterion_12_sym_square_window():
    t0 = time.monotonic()
    one_dim = (12, 16, 18, 20, 22, 26)
    vals = {w: sym_square_L_from_norm(w) for w in one_dim}
    spread = max(vals.values()) / min(vals.values())
    refined = {w: sym_square_L_from_norm(w, n_nodes=96) for w in one_dim}
    stability = max(abs(refined[w] / vals[w] - 1.0) for w in one_dim)
    elapsed = time.monotonic() - t0
    ok = spread < 3.0 and stability < 1e-3 and elapsed < 300.0
    report(12, ok, f"symmetric-square window: values "
                   f"[{min(vals.values()):.3f}, {max(vals.values()):.3f}], "
                   f"spread {spread:.2f} < 3, refinement shift "
                   f"{stability:.1e} < 1e-3, {elapsed:.1f}s")
    assert spread < 3.0
    assert stability < 1e-3
    assert elapsed < 300.0


def test_criterion_13_subgroup_comparison():
    t0 = time.monotonic()
    z = UpperHalfPoint(0.3, 1.4)
    p = HeatParams(2, 1.0)
    sums = {n: subgroup_orbit_comparison(z, p, n, 6.0)
            for n in (1, 2, 3, 4, 6)}
    eq1 = sums[1][0] == sums[1][1]
    strict = all(s < f for n, (s, f) in sums.items() if n > 1)
    nesting = (sums[4][0] <= sums[2][0] and sums[6][0] <= sums[2][0]
               and sums[6][0] <= sums[3][0])
    elapsed = time.monotonic() - t0
    ok = eq1 and strict and nesting and elapsed < 60.0
    report(13, ok, f"subgroup comparison: equality at N=1: {eq1}; strict "
                   f"inequality for N>1: {strict}; nesting over N|M: "
                   f"{nesting}; {elapsed:.1f}s")
    assert eq1
    assert strict
    assert nesting
    assert elapsed < 60.0
