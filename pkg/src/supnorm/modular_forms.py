"""Level-1 modular forms: q-expansions, Petersson Gram matrices, Bergman diagonal.

The space of weight-w cusp forms for the full modular group is realized by
the monomials Delta^a E4^b E6^c with a >= 1 and 12a + 4b + 6c = w.  The
relation E6^2 = E4^3 - 1728 Delta makes unrestricted exponents redundant;
restricting c to {0, 1} yields exactly dim S_w independent forms.

Coefficient arithmetic is exact (Python big integers) up to the working
truncation length; numeric work uses a float mantissa together with a
``log_scale`` offset so that forms whose natural coefficients overflow or
underflow doubles remain representable.  Petersson inner products are
computed by splitting the fundamental domain at y = 1: above the line the
x-integral collapses to a diagonal coefficient sum with incomplete-gamma
weights (exact in the truncation length), and the remaining cap
(sqrt(3)/2 <= y <= 1) is handled by tensor Gauss-Legendre quadrature.
Two slower full-quadrature methods are kept as independent cross-checks.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg, special

from .geometry import UpperHalfPoint
from .quadrature import DEFAULT_QUAD, QuadratureConfig, gl_nodes

#: Default evaluation floor: truncation certificates assume y >= this.
DEFAULT_Y_FLOOR = 0.5

#: Margin multiplier on the empirical coefficient-growth constant.
COEFF_BOUND_MARGIN = 4.0

_CAP_Y_LO = math.sqrt(3.0) / 2.0


def dim_cusp_forms(weight: int) -> int:
    """dim S_w for the full modular group: dim M_w - 1 for even w >= 12."""
    if weight < 12 or weight % 2:
        return 0
    dim_m = weight // 12 if weight % 12 == 2 else weight // 12 + 1
    return dim_m - 1


def default_n_terms(weight: int) -> int:
    """Default truncation length: max(50, 2 * weight)."""
    return max(50, 2 * weight)


@dataclass(frozen=True)
class QExpansion:
    """A q-expansion a0 + sum_{n>=1} a_n q^n, q = e^{2 pi i z}.

    True coefficients are ``a0`` and ``coeffs[n-1] * exp(log_scale)``; the
    optional ``int_coeffs`` keeps the exact integers when the form was built
    from monomial products.  ``coeff_bound(n)`` certifies
    |a_n| <= C n^p exp(log_scale) with (C, p) = (bound_c, bound_p).
    """

    weight: int
    a0: float
    coeffs: tuple
    log_scale: float = 0.0
    int_coeffs: tuple | None = None
    bound_c: float = field(default=0.0)
    bound_p: float = field(default=0.0)
    label: str = ""

    def __post_init__(self) -> None:
        if self.weight < 4 or self.weight % 2:
            raise ValueError("weight must be even and >= 4")
        if len(self.coeffs) < 1:
            raise ValueError("need at least one coefficient")
        if self.bound_c == 0.0:
            p = self.weight / 2.0
            c = 0.0
            for n, a in enumerate(self.coeffs, start=1):
                if a:
                    c = max(c, abs(float(a)) / n ** p)
            object.__setattr__(self, "bound_p", p)
            object.__setattr__(self, "bound_c", COEFF_BOUND_MARGIN * c)

    @property
    def n_terms(self) -> int:
        return len(self.coeffs)

    @property
    def is_cusp_form(self) -> bool:
        return self.a0 == 0

    def coeff_bound(self, n: int) -> float:
        """Certified bound on |a_n| (including the scale factor)."""
        return self.bound_c * n ** self.bound_p * math.exp(self.log_scale)

    def coeff_array(self) -> np.ndarray:
        return np.array([float(a) for a in self.coeffs], dtype=float)

    @classmethod
    def from_integers(cls, weight: int, a0: int, ints: list,
                      label: str = "") -> "QExpansion":
        """Build from exact integer coefficients, auto-scaling huge ones."""
        m = max((abs(a) for a in ints), default=0)
        shift = 0
        if m and m.bit_length() > 900:
            shift = m.bit_length() - 500
        scale = shift * math.log(2.0)
        # divide in exact integer arithmetic before the float conversion;
        # float(a) alone overflows once entries pass ~1024 bits
        denom = 1 << shift
        floats = tuple(a / denom for a in ints)
        return cls(weight=weight, a0=a0 / denom, coeffs=floats,
                   log_scale=scale, int_coeffs=tuple(ints), label=label)


def _sigma(n: int, power: int) -> int:
    return sum(d ** power for d in range(1, n + 1) if n % d == 0)


def _mul_int_series(a0: int, a: list, b0: int, b: list, n_terms: int):
    """Cauchy product of two integer series through q^n_terms."""
    la, lb = len(a), len(b)
    out = [0] * n_terms
    for n in range(1, n_terms + 1):
        s = 0
        if n <= la:
            s += b0 * a[n - 1]
        if n <= lb:
            s += a0 * b[n - 1]
        for i in range(max(1, n - lb), min(la, n - 1) + 1):
            s += a[i - 1] * b[n - i - 1]
        out[n - 1] = s
    return a0 * b0, out


def eisenstein_series(weight: int, n_terms: int) -> QExpansion:
    """E4 = 1 + 240 sum sigma_3(n) q^n or E6 = 1 - 504 sum sigma_5(n) q^n."""
    if weight not in (4, 6):
        raise ValueError("weight must be 4 or 6")
    if weight == 4:
        ints = [240 * _sigma(n, 3) for n in range(1, n_terms + 1)]
    else:
        ints = [-504 * _sigma(n, 5) for n in range(1, n_terms + 1)]
    return QExpansion.from_integers(weight, 1, ints, label=f"E{weight}")


def delta_form(n_terms: int) -> QExpansion:
    """The discriminant cusp form Delta = (E4^3 - E6^2)/1728, exact integers."""
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    e4 = eisenstein_series(4, n_terms)
    e6 = eisenstein_series(6, n_terms)
    a0_sq4, e4sq = _mul_int_series(1, list(e4.int_coeffs), 1,
                                   list(e4.int_coeffs), n_terms)
    a0_cu4, e4cu = _mul_int_series(a0_sq4, e4sq, 1, list(e4.int_coeffs),
                                   n_terms)
    a0_sq6, e6sq = _mul_int_series(1, list(e6.int_coeffs), 1,
                                   list(e6.int_coeffs), n_terms)
    ints = [(x - y) // 1728 for x, y in zip(e4cu, e6sq)]
    assert a0_cu4 - a0_sq6 == 0
    assert all((x - y) % 1728 == 0 for x, y in zip(e4cu, e6sq))
    return QExpansion.from_integers(12, 0, ints, label="Delta")


def monomial_basis(weight: int, n_terms: int | None = None,
                   ordering: str = "lex") -> list[QExpansion]:
    """All Delta^a E4^b E6^c with a >= 1, c in {0,1}, 12a + 4b + 6c = weight.

    The c-restriction removes the E6^2 = E4^3 - 1728*Delta redundancy; the
    list length equals dim S_weight.  ``ordering`` is "lex" on (a, b, c) or
    "reverse"; the spanned space is identical either way.
    """
    if weight % 2:
        raise ValueError("weight must be even")
    if n_terms is None:
        n_terms = default_n_terms(weight)
    combos = []
    for a in range(1, weight // 12 + 1):
        for c in (0, 1):
            rem = weight - 12 * a - 6 * c
            if rem >= 0 and rem % 4 == 0:
                combos.append((a, rem // 4, c))
    combos.sort()
    if ordering == "reverse":
        combos = combos[::-1]
    elif ordering != "lex":
        raise ValueError("ordering must be 'lex' or 'reverse'")

    if not combos:
        return []
    delta = delta_form(n_terms)
    e4 = eisenstein_series(4, n_terms)
    e6 = eisenstein_series(6, n_terms)
    out = []
    for a, b, c in combos:
        acc0, acc = 0, list(delta.int_coeffs)
        for _ in range(a - 1):
            acc0, acc = _mul_int_series(acc0, acc, 0, list(delta.int_coeffs),
                                        n_terms)
        for _ in range(b):
            acc0, acc = _mul_int_series(acc0, acc, 1, list(e4.int_coeffs),
                                        n_terms)
        for _ in range(c):
            acc0, acc = _mul_int_series(acc0, acc, 1, list(e6.int_coeffs),
                                        n_terms)
        out.append(QExpansion.from_integers(
            weight, acc0, acc, label=f"D^{a}E4^{b}E6^{c}"))
    assert len(out) == dim_cusp_forms(weight)
    return out


def evaluate_qexp(f: QExpansion, z: UpperHalfPoint,
                  y_floor: float = DEFAULT_Y_FLOOR) -> tuple[complex, float]:
    """(f(z), truncation bound).  Requires Im z >= y_floor for the certificate."""
    if z.y < y_floor:
        raise ValueError(f"evaluation requires Im z >= {y_floor}")
    n = np.arange(1, f.n_terms + 1)
    qn = np.exp(2j * math.pi * n * z.z)
    value = f.a0 + complex(np.dot(f.coeff_array(), qn))
    value *= math.exp(f.log_scale) if f.log_scale else 1.0

    # tail: sum_{n>N} C n^p r^n with r = e^{-2 pi y} < e^{-pi}; ratio test
    big_n = f.n_terms + 1
    r = math.exp(-2.0 * math.pi * z.y)
    ratio = r * (1.0 + 1.0 / f.n_terms) ** f.bound_p
    if ratio >= 1.0:
        raise ValueError("truncation certificate unavailable (ratio >= 1)")
    first_log = (math.log(f.bound_c) + f.bound_p * math.log(big_n)
                 - 2.0 * math.pi * z.y * big_n + f.log_scale
                 if f.bound_c > 0 else -math.inf)
    tail = math.exp(first_log) / (1.0 - ratio) if math.isfinite(first_log) else 0.0
    return value, tail


def evaluate_qexp_grid(f: QExpansion, xs: np.ndarray,
                       ys: np.ndarray) -> np.ndarray:
    """f on the broadcast grid xs + i*ys (arrays of equal shape)."""
    n = np.arange(1, f.n_terms + 1)
    zf = (np.asarray(xs)[..., None] + 1j * np.asarray(ys)[..., None])
    with np.errstate(under="ignore"):
        qn = np.exp(2j * math.pi * n * zf)
        out = f.a0 + qn @ f.coeff_array()
    if f.log_scale:
        out = out * math.exp(f.log_scale)
    return out


# ---------------------------------------------------------------------------
# Petersson inner products
# ---------------------------------------------------------------------------

def _strip_sum_sign_log(f: QExpansion, g: QExpansion):
    """Diagonal coefficient sum for the y >= 1 part, as (sign, log magnitude).

    integral over {|x|<=1/2, y>=1} of f conj(g) y^{w-2} dx dy
      = sum_n a_n conj(b_n) (4 pi n)^{-(w-1)} Gamma(w-1, 4 pi n).
    """
    s = f.weight - 1
    terms = []
    for n in range(1, min(f.n_terms, g.n_terms) + 1):
        a = float(f.coeffs[n - 1])
        b = float(g.coeffs[n - 1])
        ab = a * b
        if ab == 0.0:
            continue
        x = 4.0 * math.pi * n
        reg = special.gammaincc(s, x)
        if reg > 0.0:
            log_i = math.lgamma(s) + math.log(reg) - s * math.log(x)
        else:
            log_i = -x - math.log(x)  # asymptotic, term is negligible anyway
        terms.append((math.copysign(1.0, ab),
                      math.log(abs(ab)) + log_i))
    if not terms:
        return 0.0, -math.inf
    m = max(lm for _, lm in terms)
    acc = sum(sg * math.exp(lm - m) for sg, lm in terms)
    if acc == 0.0:
        return 0.0, -math.inf
    return math.copysign(1.0, acc), m + math.log(abs(acc))


def _coeff_tail_log(f: QExpansion, g: QExpansion) -> float:
    """log bound on the strip-sum contribution of coefficients beyond N."""
    big_n = min(f.n_terms, g.n_terms) + 1
    if f.bound_c == 0.0 or g.bound_c == 0.0:
        return -math.inf
    p = f.bound_p + g.bound_p
    x = 4.0 * math.pi * big_n
    # valid once 4 pi n >= w - 1, true for n >= n_terms >= 50 > w/12 here
    first = (math.log(f.bound_c) + math.log(g.bound_c) + p * math.log(big_n)
             + math.log(2.0) - x - math.log(x))
    ratio = math.exp(-4.0 * math.pi) * (1.0 + 1.0 / big_n) ** p
    if ratio >= 1.0:
        return math.inf
    return first - math.log1p(-ratio)


def _cap_quadrature(f: QExpansion, g: QExpansion, n_nodes: int) -> complex:
    """Tensor GL integral of f conj(g) y^{w-2} over the cap sqrt3/2<=y<=1.

    The cap is split into panels refined geometrically toward y = 1, where
    x0(y) = sqrt(1 - y^2) has a square-root derivative singularity.
    """
    w = f.weight
    edges = np.append(1.0 - (1.0 - _CAP_Y_LO) * 0.5 ** np.arange(0, 14), 1.0)
    ys_list, wy_list = [], []
    n_panel = max(8, n_nodes // 4)
    for lo, hi in zip(edges[:-1], edges[1:]):
        yn, wn = gl_nodes(float(lo), float(hi), n_panel)
        ys_list.append(yn)
        wy_list.append(wn)
    ys = np.concatenate(ys_list)
    wy = np.concatenate(wy_list)
    total = 0.0 + 0.0j
    for y, wgt in zip(ys, wy):
        x0 = math.sqrt(max(1.0 - y * y, 0.0))
        if x0 >= 0.5:
            continue
        xs, wx = gl_nodes(x0, 0.5, n_nodes)
        for sign in (1.0, -1.0):
            fz = evaluate_qexp_grid(f, sign * xs, np.full_like(xs, y))
            gz = evaluate_qexp_grid(g, sign * xs, np.full_like(xs, y))
            total += wgt * y ** (w - 2) * np.dot(wx, fz * np.conj(gz))
    return total


def _y_max_for_weight(weight: int) -> float:
    # integrand envelope e^{-4 pi y} y^{w-2} peaks at (w-2)/(4 pi)
    return max(8.0, (weight - 2) / (2.0 * math.pi) + 6.0)


def _fulldomain_quadrature(f: QExpansion, g: QExpansion, n_nodes: int,
                           adaptive: bool, q: QuadratureConfig) -> complex:
    """f conj(g) y^{w-2} over the truncated fundamental domain, quadrature only."""
    from scipy import integrate

    w = f.weight
    y_max = _y_max_for_weight(w)

    def x_integral(y: float) -> complex:
        x0 = math.sqrt(max(1.0 - y * y, 0.0)) if y < 1.0 else 0.0
        if x0 >= 0.5:
            return 0.0
        xs, wx = gl_nodes(x0, 0.5, n_nodes)
        acc = 0.0 + 0.0j
        for sign in (1.0, -1.0):
            fz = evaluate_qexp_grid(f, sign * xs, np.full_like(xs, y))
            gz = evaluate_qexp_grid(g, sign * xs, np.full_like(xs, y))
            acc += np.dot(wx, fz * np.conj(gz))
        return acc * y ** (w - 2)

    if adaptive:
        re, _ = integrate.quad(lambda y: x_integral(y).real, _CAP_Y_LO, y_max,
                               epsabs=q.abs_tol, epsrel=q.rel_tol,
                               limit=q.max_subdivisions)
        im, _ = integrate.quad(lambda y: x_integral(y).imag, _CAP_Y_LO, y_max,
                               epsabs=q.abs_tol, epsrel=q.rel_tol,
                               limit=q.max_subdivisions)
        return complex(re, im)

    total = 0.0 + 0.0j
    # x0(y) = sqrt(1 - y^2) has a square-root derivative singularity at
    # y = 1, so the cap panels are refined geometrically toward that edge;
    # above y = 1 the integrand is smooth and uniform panels suffice.
    cap_edges = 1.0 - (1.0 - _CAP_Y_LO) * 0.5 ** np.arange(0, 14)
    edges = np.concatenate((cap_edges, np.arange(1.0, y_max + 0.5, 0.5)))
    for lo, hi in zip(edges[:-1], edges[1:]):
        ys, wy = gl_nodes(float(lo), float(hi), max(8, n_nodes // 3))
        for y, wgt in zip(ys, wy):
            total += wgt * x_integral(float(y))
    return total


def petersson_inner(f: QExpansion, g: QExpansion,
                    q: QuadratureConfig = DEFAULT_QUAD,
                    method: str = "fourier", n_nodes: int = 48) -> complex:
    """Petersson inner product <f, g> = int_F f conj(g) y^{w-2} dx dy.

    Methods: "fourier" (coefficient sum above y=1 plus cap quadrature,
    default), "gl" (composite tensor Gauss-Legendre over the whole truncated
    domain), "adaptive" (adaptive y-integration of Gauss-Legendre x-slices).
    """
    if f.weight != g.weight:
        raise ValueError("forms must share a weight")
    if not (f.is_cusp_form and g.is_cusp_form):
        raise ValueError("Petersson inner product requires cusp forms")
    if method == "fourier":
        # the strip sum works on raw mantissas, so the scale factors enter
        # here; the cap quadrature evaluates forms with scales included.
        sg, lm = _strip_sum_sign_log(f, g)
        strip = sg * math.exp(lm + f.log_scale + g.log_scale) \
            if math.isfinite(lm) else 0.0
        tail_log = _coeff_tail_log(f, g)
        if math.isfinite(lm) and tail_log > lm + math.log(q.rel_tol):
            raise ValueError("coefficient tail exceeds tolerance; "
                             "increase n_terms")
        return strip + _cap_quadrature(f, g, n_nodes)
    if method in ("gl", "adaptive"):
        return _fulldomain_quadrature(f, g, n_nodes,
                                      method == "adaptive", q)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# Orthonormal bases
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OrthonormalBasis:
    """Petersson-orthonormal basis of S_weight with its re-checked residual."""

    weight: int
    forms: tuple
    gram_residual: float

    @property
    def dim(self) -> int:
        return len(self.forms)


class GramError(RuntimeError):
    """Gram matrix numerically non-positive-definite."""


def _log_norm_and_gram(monomials, q, n_nodes):
    """Diagonal log-norms and the diagonal-normalized Gram matrix."""
    d = len(monomials)
    log_norms = np.empty(d)
    for i, f in enumerate(monomials):
        v = petersson_inner(f, f, q, n_nodes=n_nodes).real
        if v <= 0:
            raise GramError(f"nonpositive Petersson norm for form {i}")
        log_norms[i] = math.log(v)
    gram = np.eye(d)
    for i in range(d):
        for j in range(i + 1, d):
            v = petersson_inner(monomials[i], monomials[j], q,
                                n_nodes=n_nodes).real
            gram[i, j] = gram[j, i] = (
                math.copysign(1.0, v)
                * math.exp(math.log(abs(v))
                           - 0.5 * (log_norms[i] + log_norms[j]))
                if v != 0.0 else 0.0)
    return log_norms, gram


def _cholesky_with_escalation(gram: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.cholesky(gram)
    except np.linalg.LinAlgError:
        import mpmath

        with mpmath.workdps(60):
            try:
                lmat = mpmath.cholesky(mpmath.matrix(gram.tolist()))
            except ValueError as exc:
                cond = np.linalg.cond(gram)
                raise GramError(
                    f"Gram matrix not positive definite even at extended "
                    f"precision (condition estimate {cond:.3e})") from exc
            d = gram.shape[0]
            return np.array([[float(lmat[i, j]) for j in range(d)]
                             for i in range(d)])


def _cache_dir() -> str | None:
    return os.environ.get("SUPNORM_CACHE_DIR") or None


def _cache_key(weight: int, n_terms: int, q: QuadratureConfig,
               n_nodes: int, ordering: str) -> str:
    return (f"basis_w{weight}_n{n_terms}_rt{q.rel_tol:g}_at{q.abs_tol:g}"
            f"_gl{n_nodes}_{ordering}")


def _basis_to_json(basis: OrthonormalBasis) -> dict:
    return {
        "version": 1,
        "weight": basis.weight,
        "gram_residual": basis.gram_residual,
        "forms": [
            {"coeffs": [float(c) for c in f.coeffs],
             "log_scale": f.log_scale, "label": f.label}
            for f in basis.forms
        ],
    }


def _basis_from_json(data: dict) -> OrthonormalBasis:
    forms = tuple(
        QExpansion(weight=data["weight"], a0=0.0,
                   coeffs=tuple(rec["coeffs"]), log_scale=rec["log_scale"],
                   label=rec["label"])
        for rec in data["forms"])
    return OrthonormalBasis(weight=data["weight"], forms=forms,
                            gram_residual=data["gram_residual"])


def orthonormal_basis(weight: int, q: QuadratureConfig = DEFAULT_QUAD,
                      n_terms: int | None = None, n_nodes: int = 48,
                      ordering: str = "lex",
                      use_cache: bool = True) -> OrthonormalBasis:
    """Petersson-orthonormal basis of S_weight via Cholesky on the Gram matrix.

    Monomials are normalized to unit diagonal first, so the factorized Gram
    is O(1); a failed double-precision Cholesky triggers an extended-precision
    retry.  Results are cached on disk when SUPNORM_CACHE_DIR is set.
    """
    if weight < 12:
        raise ValueError("weight must be >= 12 (dim S_w = 0 below that)")
    if dim_cusp_forms(weight) == 0:
        return OrthonormalBasis(weight=weight, forms=(), gram_residual=0.0)
    if n_terms is None:
        n_terms = default_n_terms(weight)
    key = _cache_key(weight, n_terms, q, n_nodes, ordering)
    cache_path = None
    if use_cache and _cache_dir():
        cache_path = os.path.join(_cache_dir(), key + ".json")
        if os.path.exists(cache_path):
            with open(cache_path) as fh:
                return _basis_from_json(json.load(fh))

    monomials = monomial_basis(weight, n_terms, ordering=ordering)
    log_norms, gram = _log_norm_and_gram(monomials, q, n_nodes)
    lmat = _cholesky_with_escalation(gram)

    d = len(monomials)
    # rows: diagonal-normalized monomial coefficients at a shared log offset
    offset = float(np.max(-0.5 * log_norms))
    coeff_rows = np.array([
        m.coeff_array() * math.exp(m.log_scale - 0.5 * log_norms[i] - offset)
        for i, m in enumerate(monomials)])
    ortho_rows = linalg.solve_triangular(lmat, coeff_rows, lower=True)
    forms = tuple(
        QExpansion(weight=weight, a0=0.0, coeffs=tuple(row),
                   log_scale=offset, label=f"onb_{weight}_{j}")
        for j, row in enumerate(ortho_rows))

    recheck = np.eye(d)
    for i in range(d):
        for j in range(i, d):
            v = petersson_inner(forms[i], forms[j], q, n_nodes=n_nodes).real
            recheck[i, j] = recheck[j, i] = v
    residual = float(np.max(np.abs(recheck - np.eye(d))))
    basis = OrthonormalBasis(weight=weight, forms=forms,
                             gram_residual=residual)
    if cache_path:
        os.makedirs(_cache_dir(), exist_ok=True)
        with open(cache_path, "w") as fh:
            json.dump(_basis_to_json(basis), fh)
    return basis


# ---------------------------------------------------------------------------
# Bergman kernel diagonal and Fourier-side quantities
# ---------------------------------------------------------------------------

def bergman_kernel_diag(weight: int, z: UpperHalfPoint,
                        basis: OrthonormalBasis) -> float:
    """S_k(z) = sum_j |f_j(z)|^2 y^weight over the orthonormal basis."""
    if basis.weight != weight:
        raise ValueError("basis weight mismatch")
    ylog = weight * math.log(z.y)
    total = 0.0
    for f in basis.forms:
        v, _ = evaluate_qexp(f, z)
        av = abs(v)
        if av > 0.0:
            total += math.exp(2.0 * math.log(av) + ylog)
    return total


def bergman_kernel_grid(basis: OrthonormalBasis, xs: np.ndarray,
                        ys: np.ndarray) -> np.ndarray:
    """Vectorized S_k over broadcast arrays of coordinates."""
    ys = np.asarray(ys, dtype=float)
    with np.errstate(under="ignore"):
        ypow = np.exp(basis.weight * np.log(ys))
        total = np.zeros(np.broadcast(np.asarray(xs), ys).shape)
        for f in basis.forms:
            vals = evaluate_qexp_grid(f, xs, ys)
            total += np.abs(vals) ** 2 * ypow
    return total


def apply_laplacian_fd(field, k: int, z: UpperHalfPoint, h: float) -> complex:
    """Weight-k hyperbolic Laplacian -y^2(f_xx + f_yy) + 2iky f_x, central FD."""
    if h <= 0:
        raise ValueError("h must be positive")
    f0 = field(z)
    fxp = field(UpperHalfPoint(z.x + h, z.y))
    fxm = field(UpperHalfPoint(z.x - h, z.y))
    fyp = field(UpperHalfPoint(z.x, z.y + h))
    fym = field(UpperHalfPoint(z.x, z.y - h))
    fxx = (fxp + fxm - 2.0 * f0) / (h * h)
    fyy = (fyp + fym - 2.0 * f0) / (h * h)
    fx = (fxp - fxm) / (2.0 * h)
    y = z.y
    return -y * y * (fxx + fyy) + 2j * k * y * fx


def fourier_square_integral(f: QExpansion, y: float) -> float:
    """int_0^1 |f(x+iy)|^2 y^weight dx = sum_n |a_n|^2 y^weight e^{-4 pi n y}.

    The coefficient tail beyond n_terms is certified below rel_tol of the
    retained sum; the value always dominates the n = 1 term.
    """
    if y <= 0:
        raise ValueError("y must be positive")
    w = f.weight
    base = 2.0 * f.log_scale + w * math.log(y)
    total = 0.0
    for n, a in enumerate(f.coeffs, start=1):
        fa = abs(float(a))
        if fa == 0.0:
            continue
        lg = 2.0 * math.log(fa) + base - 4.0 * math.pi * n * y
        if lg > -745.0:
            total += math.exp(lg)
    return total


def sym_square_L_from_norm(weight: int, q: QuadratureConfig = DEFAULT_QUAD,
                           n_nodes: int = 48) -> float:
    """Symmetric-square L-value at 1 from the Petersson norm (dim 1 only).

    For the arithmetically normalized eigenform f (a_1 = 1) at a
    one-dimensional weight, L = (pi/2) (4 pi)^weight / Gamma(weight) <f, f>;
    the huge Gamma and power factors are combined in log space.
    """
    if dim_cusp_forms(weight) != 1:
        raise ValueError("weight must have a one-dimensional cusp space")
    f = monomial_basis(weight)[0]
    norm_sq = petersson_inner(f, f, q, n_nodes=n_nodes).real
    log_l = (math.log(math.pi / 2.0) + weight * math.log(4.0 * math.pi)
             - math.lgamma(weight) + math.log(norm_sq))
    return math.exp(log_l)
