import math

import numpy as np
import pytest

from supnorm.geometry import UpperHalfPoint
from supnorm.heat_kernel import (HeatParams, automorphic_heat_kernel_diag,
                                 chebyshev_T2k_log, f_k_defect, f_k_value,
                                 g_k_envelope_log, heat_kernel_point,
                                 heat_kernel_point_log,
                                 heat_kernel_point_log_batch, laplace_identity,
                                 phase_power)

# Independent oracle: K_1(t=1; rho=1) evaluated with a 2M-point midpoint
# rule on the substituted integrand (computed once, offline).
K1_T1_RHO1 = 0.09364400767

# Dense-quadrature reference for K at a large-exponent corner case.
P_SMALL = HeatParams(1, 1.0)


def test_params_validation():
    with pytest.raises(ValueError):
        HeatParams(0, 1.0)
    with pytest.raises(ValueError):
        HeatParams(1, 0.0)


@pytest.mark.parametrize("k,x", [(1, 1.0), (1, 1.3), (3, 2.0), (50, 1.0001)])
def test_chebyshev_log_against_direct(k, x):
    direct = math.cosh(2 * k * math.acosh(x))
    assert chebyshev_T2k_log(k, x) == pytest.approx(math.log(direct),
                                                    rel=1e-10)


def test_chebyshev_log_no_overflow():
    # cosh(2*500*acosh(10)) overflows a double; the log form must not
    lv = chebyshev_T2k_log(500, 10.0)
    assert lv == pytest.approx(1000 * math.acosh(10.0) - math.log(2.0),
                               rel=1e-9)


def test_kernel_value_against_offline_oracle():
    assert heat_kernel_point(P_SMALL, 1.0) == pytest.approx(K1_T1_RHO1,
                                                            rel=1e-9)


def test_kernel_continuous_at_zero_radius():
    v0 = heat_kernel_point_log(P_SMALL, 0.0)
    veps = heat_kernel_point_log(P_SMALL, 1e-6)
    assert veps == pytest.approx(v0, abs=1e-5)


def test_kernel_log_finite_where_value_overflows():
    p = HeatParams(10, 10.0)
    lv = heat_kernel_point_log(p, 0.5)
    assert lv > 700.0  # e^lv overflows a double
    assert math.isfinite(lv)
    assert heat_kernel_point(p, 0.5) == math.inf


def test_batch_matches_pointwise():
    rhos = np.array([0.0, 0.1, 0.7, 2.0, 5.0])
    for p in (HeatParams(1, 0.5), HeatParams(6, 1.0), HeatParams(20, 2.0)):
        batch = heat_kernel_point_log_batch(p, rhos)
        point = np.array([heat_kernel_point_log(p, float(r)) for r in rhos])
        assert batch == pytest.approx(point, rel=1e-9)


def test_envelope_dominates_kernel():
    for k, t in [(1, 0.1), (3, 1.0), (10, 10.0)]:
        p = HeatParams(k, t)
        lg = g_k_envelope_log(p)
        for rho in (0.0, 0.5, 2.0, 4.0):
            lk = heat_kernel_point_log(p, rho)
            assert lk <= lg - rho * rho / (8.0 * t) + 1e-10


def test_defect_negative_and_matches_finite_difference():
    p = HeatParams(3, 1.0)
    rho, r = 0.8, 1.7
    d = f_k_defect(p, rho, r)
    assert d < 0.0
    h = 1e-6
    fd = (math.sinh(r) * (f_k_value(p, rho + h, r)
                          - f_k_value(p, rho - h, r)) / (2 * h)
          + math.sinh(rho) * (f_k_value(p, rho, r + h)
                              - f_k_value(p, rho, r - h)) / (2 * h))
    assert d == pytest.approx(fd, rel=1e-5)


def test_defect_domain():
    with pytest.raises(ValueError):
        f_k_defect(P_SMALL, 2.0, 1.0)
    with pytest.raises(ValueError):
        f_k_defect(P_SMALL, 0.0, 1.0)


def test_laplace_identity_is_machine_accurate():
    num, closed = laplace_identity(1.0, 1.0)
    assert num == pytest.approx(closed, rel=1e-10)
    assert closed == pytest.approx(math.sqrt(math.pi) * math.exp(-1.0),
                                   rel=1e-15)


def test_automorphic_sum_real_and_tail_shrinks():
    z = UpperHalfPoint(0.3, 1.4)
    p = HeatParams(2, 1.0)
    tv6 = automorphic_heat_kernel_diag(p, z, 6.0)
    tv8 = automorphic_heat_kernel_diag(p, z, 8.0)
    # the periodized diagonal is real; the truncated sum's imaginary part
    # must be far below the truncation tail
    assert abs(tv6.value.imag) < 1e-10 * abs(tv6.value.real)
    assert tv8.tail_bound < tv6.tail_bound
    # values at the two radii agree within the larger tail
    assert abs(tv8.value.real - tv6.value.real) <= tv6.tail_bound


def test_automorphic_sum_positive():
    z = UpperHalfPoint(0.0, 1.2)
    tv = automorphic_heat_kernel_diag(HeatParams(6, 0.5), z, 6.0)
    assert tv.value.real > 0.0


def test_phase_power_stays_on_circle():
    ph = complex(0.6, 0.8)
    v = phase_power(ph, 37)
    assert abs(v) == pytest.approx(1.0, rel=1e-14)
    assert v == pytest.approx(ph ** 37, rel=1e-10)
