"""Hyperbolic plane primitives: points, Mobius action, distance, reduction.

Distances are computed through the point-pair invariant
cosh^2(d/2) = |z - conj(w)|^2 / (4 Im z Im w), which is exact at z = w and
needs no geodesic integration.  The (cosh^2 - 1) combination is formed
without cancellation so that short distances stay accurate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

REDUCTION_ITERATION_CAP = 10_000


class ReductionError(RuntimeError):
    """Fundamental-domain reduction failed to terminate."""


@dataclass(frozen=True)
class UpperHalfPoint:
    """A point x + iy in the upper half-plane (y > 0, finite coordinates)."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError("coordinates must be finite")
        if not self.y > 0:
            raise ValueError("point must lie in the upper half-plane (y > 0)")

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    @classmethod
    def from_complex(cls, z: complex) -> "UpperHalfPoint":
        return cls(z.real, z.imag)


@dataclass(frozen=True)
class SurfaceData:
    """Topological data (genus, cusps, elliptic orders) of a quotient surface."""

    genus: int
    num_cusps: int
    elliptic_orders: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.genus < 0 or self.num_cusps < 0:
            raise ValueError("genus and cusp count must be nonnegative")
        if any(m < 2 for m in self.elliptic_orders):
            raise ValueError("elliptic orders must be >= 2")


#: The modular surface PSL2(Z)\H: genus 0, one cusp, elliptic points of order 2, 3.
MODULAR_SURFACE = SurfaceData(genus=0, num_cusps=1, elliptic_orders=(2, 3))


def mobius_apply(g, z: UpperHalfPoint) -> UpperHalfPoint:
    """Apply the fractional linear transformation g = (a,b;c,d) to z.

    Requires det g = 1; the image has Im = Im(z)/|cz+d|^2 and stays in H.
    """
    a, b, c, d = g.a, g.b, g.c, g.d
    if a * d - b * c != 1:
        raise ValueError("group element must have determinant 1")
    zz = z.z
    denom = c * zz + d
    w = (a * zz + b) / denom
    # Recompute the imaginary part from the exact identity; the complex
    # division can lose it to rounding when |cz+d| is large.
    y_new = z.y / abs(denom) ** 2
    return UpperHalfPoint(w.real, y_new)


def cosh_sq_half_distance(z: UpperHalfPoint, w: UpperHalfPoint) -> float:
    """cosh^2 of half the hyperbolic distance: |z - conj(w)|^2 / (4 y_z y_w)."""
    dx = z.x - w.x
    ys = z.y + w.y
    return (dx * dx + ys * ys) / (4.0 * z.y * w.y)


def _cosh_sq_half_minus_one(z: UpperHalfPoint, w: UpperHalfPoint) -> float:
    # |z - w|^2 / (4 y_z y_w); exact 0 at z = w, no cancellation.
    dx = z.x - w.x
    dy = z.y - w.y
    return (dx * dx + dy * dy) / (4.0 * z.y * w.y)


def hyperbolic_distance(z: UpperHalfPoint, w: UpperHalfPoint) -> float:
    """Hyperbolic distance 2*arccosh(sqrt(cosh^2(d/2))), stable near 0."""
    return 2.0 * math.asinh(math.sqrt(_cosh_sq_half_minus_one(z, w)))


def reduce_to_fundamental_domain(z: UpperHalfPoint):
    """Reduce z into {|x| <= 1/2, |z| >= 1} for PSL2(Z).

    Returns (z_reduced, gamma) with gamma * z = z_reduced.  Boundary ties at
    x = +1/2 are mapped to x = -1/2; points on the arc |z| = 1 are kept as
    found.  Raises ReductionError after REDUCTION_ITERATION_CAP steps.
    """
    from .orbits import GroupElement

    gamma = GroupElement.identity()
    x, y = z.x, z.y
    for _ in range(REDUCTION_ITERATION_CAP):
        n = math.floor(x + 0.5)
        if n != 0:
            x -= n
            gamma = GroupElement(1, -n, 0, 1) * gamma
        norm_sq = x * x + y * y
        if norm_sq < 1.0:
            # apply S: z -> -1/z
            x, y = -x / norm_sq, y / norm_sq
            gamma = GroupElement(0, -1, 1, 0) * gamma
            continue
        if x == 0.5:
            x = -0.5
            gamma = GroupElement(1, -1, 0, 1) * gamma
        return UpperHalfPoint(x, y), gamma
    raise ReductionError(
        f"reduction did not terminate within {REDUCTION_ITERATION_CAP} steps")


def hyperbolic_volume(s: SurfaceData) -> float:
    """Gauss-Bonnet volume 2*pi*(2g - 2 + c + sum(1 - 1/m_p)); must be > 0."""
    vol = 2.0 * math.pi * (2 * s.genus - 2 + s.num_cusps
                           + sum(1.0 - 1.0 / m for m in s.elliptic_orders))
    if vol <= 0:
        raise ValueError(f"surface data does not define a hyperbolic surface "
                         f"(formula value {vol:.6g})")
    return vol
