"""Exact PSL2(Z) arithmetic and displacement-bounded orbit enumeration.

Two independent enumeration strategies are provided and cross-validated in
the test suite:

* ``entry-sweep`` — for each coprime bottom row (c, d) the displacement
  condition dist(z, gamma z) <= rho_max is a quadratic inequality in the
  remaining integer parameter m (top row = particular solution + m*(c, d)),
  so the admissible m form an interval that is solved in closed form.
* ``generator-bfs`` — breadth-first search over words in {S, T, T^-1} with
  canonical-form dedup.  Pruning is on matrix-entry magnitude (with a
  safety factor) plus a hard word-length guard: the continued-fraction
  normal form of any unimodular matrix reaches it through prefixes whose
  entries never exceed those of the matrix itself, so an entry cap cannot
  exclude a reachable element.

Matrix entries are Python integers throughout; long words overflow 64-bit
entries quickly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

from .geometry import UpperHalfPoint, mobius_apply

#: Default hard cap on rho_max; the orbit size grows like e^rho.
DEFAULT_RHO_CAP = 25.0
DEFAULT_MAX_ENTRIES = 2_000_000

#: Safety factor applied to the derived matrix-entry bounds.
ENTRY_SAFETY = 2.0


class OrbitCapError(RuntimeError):
    """Requested enumeration exceeds the configured displacement or size cap."""


@dataclass(frozen=True)
class GroupElement:
    """An element (a, b; c, d) of PSL2(Z), stored with canonical sign.

    The stored representative of the class {+g, -g} has c > 0, or c = 0 and
    d > 0.  Entries are arbitrary-precision integers with ad - bc = 1.
    """

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError("determinant must be 1")
        if self.c < 0 or (self.c == 0 and self.d < 0):
            object.__setattr__(self, "a", -self.a)
            object.__setattr__(self, "b", -self.b)
            object.__setattr__(self, "c", -self.c)
            object.__setattr__(self, "d", -self.d)

    @classmethod
    def identity(cls) -> "GroupElement":
        return cls(1, 0, 0, 1)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "GroupElement":
        return GroupElement(self.d, -self.b, -self.c, self.a)

    def apply(self, z: UpperHalfPoint) -> UpperHalfPoint:
        return mobius_apply(self, z)

    @property
    def key(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def is_identity(self) -> bool:
        return self.key == (1, 0, 0, 1)


S = GroupElement(0, -1, 1, 0)
T = GroupElement(1, 1, 0, 1)
T_INV = GroupElement(1, -1, 0, 1)


@dataclass(frozen=True)
class OrbitEntry:
    """A group element with its displacement and unit-modulus cocycle phase.

    ``phase`` is the weight-one factor ((c*conj(z)+d)/(cz+d)) *
    ((z - g(conj(z)))/(g(z) - conj(z))); downstream consumers raise it to
    the k-th power.
    """

    element: GroupElement
    rho: float
    phase: complex


def is_in_gamma0(g: GroupElement, level: int) -> bool:
    """Membership in Gamma_0(N): lower-left entry divisible by N."""
    if level < 1:
        raise ValueError("level must be a positive integer")
    return g.c % level == 0


def is_in_gamma_inf(g: GroupElement, width_a: int = 1) -> bool:
    """Membership in the cusp stabilizer of width a: (1, a*n; 0, 1)."""
    if width_a < 1:
        raise ValueError("cusp width must be a positive integer")
    return g.c == 0 and g.b % width_a == 0


def _cosh_sq_half_displacement(g: GroupElement, z: UpperHalfPoint) -> float:
    # cosh^2(dist(z, gz)/2) = [((a-d)x + b - c|z|^2)^2 + (a+d)^2 y^2] / (4y^2)
    x, y = z.x, z.y
    zsq = x * x + y * y
    v = (g.a - g.d) * x + g.b - g.c * zsq
    u = (g.a + g.d) * y
    return (v * v + u * u) / (4.0 * y * y)


def displacement(g: GroupElement, z: UpperHalfPoint) -> float:
    """dist(z, g z), computed from the point-pair invariant."""
    csq = _cosh_sq_half_displacement(g, z)
    return 2.0 * math.asinh(math.sqrt(max(csq - 1.0, 0.0)))


def phase_factor(g: GroupElement, z: UpperHalfPoint) -> complex:
    """Weight-one automorphic-kernel phase at the diagonal point z."""
    zz = z.z
    zbar = zz.conjugate()
    first = (g.c * zbar + g.d) / (g.c * zz + g.d)
    g_zbar = (g.a * zbar + g.b) / (g.c * zbar + g.d)
    g_z = (g.a * zz + g.b) / (g.c * zz + g.d)
    second = (zz - g_zbar) / (g_z - zbar)
    return first * second


def _entry_bounds(z: UpperHalfPoint, rho_max: float) -> dict[str, float]:
    """Conservative per-entry bounds for elements moving z by at most rho_max.

    From Im(gz)/Im(z) in [e^-rho, e^rho]: |cz+d|^2 <= e^rho, applied to g
    and g^-1.  All bounds carry ENTRY_SAFETY on top.
    """
    x, y = z.x, z.y
    zsq = x * x + y * y
    e_half = math.exp(rho_max / 2.0)
    root_c = math.sqrt(_cosh_sq_half_bound(rho_max))
    c_max = e_half / y
    d_max = e_half * (1.0 + abs(x) / y)
    a_max = d_max
    b_max = 2.0 * y * root_c + (a_max + d_max) * abs(x) + c_max * zsq
    s = ENTRY_SAFETY
    return {"a": s * a_max + 1, "b": s * b_max + 1,
            "c": s * c_max + 1, "d": s * d_max + 1,
            "cd_lin": s * e_half + 1}


def _cosh_sq_half_bound(rho_max: float) -> float:
    return math.cosh(rho_max / 2.0) ** 2


def _sweep(z: UpperHalfPoint, rho_max: float,
           max_entries: int) -> list[GroupElement]:
    """Closed-form entry sweep over coprime bottom rows (c, d)."""
    x, y = z.x, z.y
    zsq = x * x + y * y
    csq_max = _cosh_sq_half_bound(rho_max) * (1.0 + 1e-12)
    bounds = _entry_bounds(z, rho_max)
    c_hi = int(bounds["c"])
    lin_hi = bounds["cd_lin"]
    out: list[GroupElement] = []

    for c in range(0, c_hi + 1):
        if c == 0:
            # translations T^m: cosh^2 = 1 + m^2/(4y^2)
            m_hi = int(math.floor(2.0 * y * math.sqrt(max(csq_max - 1.0, 0.0))
                                  + 1e-9))
            for m in range(-m_hi, m_hi + 1):
                out.append(GroupElement(1, m, 0, 1))
            continue
        d_lo = int(math.ceil(-c * x - lin_hi))
        d_hi = int(math.floor(-c * x + lin_hi))
        for d in range(d_lo, d_hi + 1):
            if math.gcd(c, d) != 1:
                continue
            # particular solution of a*d - b*c = 1
            a0, b0 = _particular_top_row(c, d)
            # top row family (a0 + m c, b0 + m d); displacement condition is
            # quadratic in m: alpha m^2 + beta m + gamma0 <= 0
            u0 = float(a0 + d)
            v0 = (a0 - d) * x + b0 - c * zsq
            cxd = c * x + d
            alpha = (c * y) ** 2 + cxd * cxd
            beta = 2.0 * (u0 * c * y * y + v0 * cxd)
            gamma0 = u0 * u0 * y * y + v0 * v0 - 4.0 * csq_max * y * y
            disc = beta * beta - 4.0 * alpha * gamma0
            if disc < 0:
                continue
            root = math.sqrt(disc)
            m_lo = int(math.ceil((-beta - root) / (2.0 * alpha) - 1e-9))
            m_hi = int(math.floor((-beta + root) / (2.0 * alpha) + 1e-9))
            for m in range(m_lo, m_hi + 1):
                g = GroupElement(a0 + m * c, b0 + m * d, c, d)
                if _cosh_sq_half_displacement(g, z) <= csq_max:
                    out.append(g)
                    if len(out) > max_entries:
                        raise OrbitCapError(
                            f"orbit exceeds max_entries={max_entries}")
    return out


def _particular_top_row(c: int, d: int) -> tuple[int, int]:
    # solve a*d - b*c = 1 for coprime (c, d)
    g, s, t = _ext_gcd(d, -c)
    assert g == 1 or g == -1
    if g == -1:
        s, t = -s, -t
    return s, t


def _ext_gcd(p: int, q: int) -> tuple[int, int, int]:
    if q == 0:
        return (p, 1, 0) if p >= 0 else (-p, -1, 0)
    g, s, t = _ext_gcd(q, p % q)
    return g, t, s - (p // q) * t


def _bfs(z: UpperHalfPoint, rho_max: float,
         max_entries: int) -> list[GroupElement]:
    """Breadth-first search over {S, T, T^-1} with entry-magnitude pruning."""
    bounds = _entry_bounds(z, rho_max)
    entry_cap = max(bounds.values())
    word_cap = int(10 * entry_cap + 50)
    csq_max = _cosh_sq_half_bound(rho_max) * (1.0 + 1e-12)

    ident = GroupElement.identity()
    seen = {ident.key}
    frontier = [ident]
    hits = [ident]
    gens = (S, T, T_INV)
    for _ in range(word_cap):
        if not frontier:
            break
        nxt = []
        for g in frontier:
            for h in gens:
                gh = g * h
                if gh.key in seen:
                    continue
                if max(abs(gh.a), abs(gh.b), abs(gh.c), abs(gh.d)) > entry_cap:
                    continue
                seen.add(gh.key)
                nxt.append(gh)
                if _cosh_sq_half_displacement(gh, z) <= csq_max:
                    hits.append(gh)
                    if len(hits) > max_entries:
                        raise OrbitCapError(
                            f"orbit exceeds max_entries={max_entries}")
        frontier = nxt
    return hits


def enumerate_orbit(z: UpperHalfPoint, rho_max: float,
                    strategy: str = "entry-sweep",
                    rho_cap: float = DEFAULT_RHO_CAP,
                    max_entries: int = DEFAULT_MAX_ENTRIES) -> list[OrbitEntry]:
    """All gamma in PSL2(Z) with dist(z, gamma z) <= rho_max, each once.

    Output is sorted by (rho, canonical matrix order) so downstream sums are
    reproducible regardless of evaluation order.
    """
    if rho_max <= 0:
        raise ValueError("rho_max must be positive")
    if rho_max > rho_cap:
        raise OrbitCapError(f"rho_max={rho_max} exceeds cap {rho_cap}; "
                            f"orbit size grows like e^rho")
    if strategy == "entry-sweep":
        elems = _sweep(z, rho_max, max_entries)
    elif strategy == "generator-bfs":
        elems = _bfs(z, rho_max, max_entries)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")

    entries = [OrbitEntry(g, displacement(g, z), phase_factor(g, z))
               for g in elems]
    entries.sort(key=lambda e: (e.rho, e.element.key))
    return entries


def counting_function(z: UpperHalfPoint, rho: float, **kwargs) -> int:
    """N(rho; z): number of elements with dist(z, gamma z) strictly below rho."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    return sum(1 for e in enumerate_orbit(z, rho, **kwargs) if e.rho < rho)


def empirical_counting_constant(entries: list[OrbitEntry]) -> float:
    """sup over enumerated radii of N(rho; z) e^-rho (the e^rho growth constant)."""
    best = 0.0
    for i, e in enumerate(entries):
        best = max(best, (i + 1) * math.exp(-e.rho))
    return best


def product_of(elements) -> GroupElement:
    return reduce(lambda p, q: p * q, elements, GroupElement.identity())
