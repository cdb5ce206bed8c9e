import math

import pytest

from supnorm.geometry import UpperHalfPoint, hyperbolic_distance, mobius_apply
from supnorm.orbits import (S, T, GroupElement, OrbitCapError,
                            counting_function, displacement,
                            empirical_counting_constant, enumerate_orbit,
                            is_in_gamma0, is_in_gamma_inf, phase_factor,
                            product_of)

Z0 = UpperHalfPoint(0.3, 1.4)


def test_group_element_determinant_check():
    with pytest.raises(ValueError):
        GroupElement(1, 1, 1, 1)


def test_canonical_sign():
    g = GroupElement(-1, 0, 0, -1)
    assert g.key == (1, 0, 0, 1)
    h = GroupElement(0, 1, -1, 0)
    assert h.c > 0


def test_group_axioms():
    ident = GroupElement.identity()
    assert (S * S).is_identity()          # S has order 2 in PSL2
    st = S * T
    assert product_of([st, st, st]).is_identity()  # ST has order 3
    for g in (S, T, st, GroupElement(5, 2, 2, 1)):
        assert (g * g.inverse()).is_identity()
        assert (g * ident).key == g.key


def test_subgroup_membership_predicates():
    g = GroupElement(1, 0, 4, 1)
    assert is_in_gamma0(g, 1) and is_in_gamma0(g, 2) and is_in_gamma0(g, 4)
    assert not is_in_gamma0(g, 3)
    assert is_in_gamma_inf(GroupElement(1, 6, 0, 1), 3)
    assert not is_in_gamma_inf(GroupElement(1, 5, 0, 1), 3)
    assert not is_in_gamma_inf(S)
    with pytest.raises(ValueError):
        is_in_gamma0(g, 0)


def test_displacement_matches_distance():
    for g in (S, T, GroupElement(2, 1, 1, 1), GroupElement(1, 0, 3, 1)):
        d = displacement(g, Z0)
        assert d == pytest.approx(
            hyperbolic_distance(Z0, mobius_apply(g, Z0)), abs=1e-10)
    assert displacement(GroupElement.identity(), Z0) == 0.0


def test_phase_unit_modulus_and_sign_invariance():
    for g in (S, T, GroupElement(3, 1, 2, 1)):
        ph = phase_factor(g, Z0)
        assert abs(ph) == pytest.approx(1.0, rel=1e-12)
    # the canonicalized representative of -T equals T, same phase by class
    assert phase_factor(GroupElement(-1, -1, 0, -1), Z0) == pytest.approx(
        phase_factor(T, Z0))


def test_enumerate_orbit_basic_contract():
    entries = enumerate_orbit(Z0, 4.0)
    keys = [e.element.key for e in entries]
    assert len(keys) == len(set(keys))                      # no duplicates
    assert all(e.rho <= 4.0 + 1e-9 for e in entries)
    rhos = [e.rho for e in entries]
    assert rhos == sorted(rhos)                             # sorted output
    assert entries[0].element.is_identity()
    # every enumerated displacement is genuine
    for e in entries[:50]:
        assert e.rho == pytest.approx(displacement(e.element, Z0), abs=1e-12)


def test_enumerate_orbit_completeness_against_exhaustive():
    # brute force over a small entry box must find nothing extra
    rho_max = 2.5
    got = {e.element.key for e in enumerate_orbit(Z0, rho_max)}
    brute = set()
    rng = range(-6, 7)
    for a in rng:
        for b in rng:
            for c in rng:
                for d in rng:
                    if a * d - b * c != 1:
                        continue
                    g = GroupElement(a, b, c, d)
                    if displacement(g, Z0) <= rho_max:
                        brute.add(g.key)
    assert brute <= got
    assert got == brute  # nothing within rho 2.5 needs entries beyond |6|


@pytest.mark.parametrize("z", [Z0, UpperHalfPoint(0.0, 2.0),
                               UpperHalfPoint(0.0, 1.0)])
def test_strategies_agree_exactly(z):
    sweep = {e.element.key for e in enumerate_orbit(z, 6.0,
                                                    strategy="entry-sweep")}
    bfs = {e.element.key for e in enumerate_orbit(z, 6.0,
                                                  strategy="generator-bfs")}
    assert sweep == bfs
    assert len(sweep) > 10


def test_orbit_caps():
    with pytest.raises(OrbitCapError):
        enumerate_orbit(Z0, 30.0)
    with pytest.raises(OrbitCapError):
        enumerate_orbit(Z0, 8.0, max_entries=5)
    with pytest.raises(ValueError):
        enumerate_orbit(Z0, -1.0)
    with pytest.raises(ValueError):
        enumerate_orbit(Z0, 4.0, strategy="magic")


def test_counting_function_monotone_and_exponential_order():
    z = UpperHalfPoint(0.0, 2.0)
    counts = {rho: counting_function(z, rho) for rho in (2.0, 4.0, 6.0, 8.0)}
    assert counts[2.0] <= counts[4.0] <= counts[6.0] <= counts[8.0]
    # N(rho) e^-rho stays bounded by a modest constant
    assert counts[8.0] * math.exp(-8.0) < 10.0


def test_empirical_counting_constant():
    entries = enumerate_orbit(Z0, 8.0)
    c = empirical_counting_constant(entries)
    assert 0.0 < c < 10.0
    # identity at rho=0 contributes 1 * e^0 = 1 at least
    assert c >= 1.0
