"""supnorm: sup-norm growth of weighted Bergman kernels on the modular surface.

Numerical library and CLI for evaluating the Bergman kernel diagonal
S_k(z) over orthonormal bases of level-1 cusp forms, the higher-weight
hyperbolic heat kernel and its explicit upper bounds, and for measuring
the sup-norm growth exponents (k on compact sets, k^{3/2} globally) at
desk scale.
"""

from .geometry import (MODULAR_SURFACE, SurfaceData, UpperHalfPoint,
                       cosh_sq_half_distance, hyperbolic_distance,
                       hyperbolic_volume, mobius_apply,
                       reduce_to_fundamental_domain)
from .orbits import (GroupElement, OrbitEntry, counting_function,
                     enumerate_orbit, is_in_gamma0, is_in_gamma_inf)
from .heat_kernel import (HeatParams, automorphic_heat_kernel_diag,
                          chebyshev_T2k_log, f_k_defect, g_k_envelope,
                          g_k_envelope_log, heat_kernel_point,
                          heat_kernel_point_log, laplace_identity)
from .modular_forms import (OrthonormalBasis, QExpansion,
                            apply_laplacian_fd, bergman_kernel_diag,
                            bergman_kernel_grid, delta_form, dim_cusp_forms,
                            eisenstein_series, evaluate_qexp,
                            fourier_square_integral, monomial_basis,
                            orthonormal_basis, petersson_inner,
                            sym_square_L_from_norm)
from .bounds import (BoundConfig, ScanResult, SlopeFit, base_integral,
                     compute_c_delta, cusp_strip_maximizer, growth_fit,
                     h_function, horocycle_sum_vs_gamma_ratio,
                     proposition41_bound, subgroup_orbit_comparison,
                     supnorm_scan)
from .quadrature import DEFAULT_QUAD, QuadratureConfig, TruncatedValue

__version__ = "0.1.0"

__all__ = [
    "MODULAR_SURFACE", "SurfaceData", "UpperHalfPoint",
    "cosh_sq_half_distance", "hyperbolic_distance", "hyperbolic_volume",
    "mobius_apply", "reduce_to_fundamental_domain",
    "GroupElement", "OrbitEntry", "counting_function", "enumerate_orbit",
    "is_in_gamma0", "is_in_gamma_inf",
    "HeatParams", "automorphic_heat_kernel_diag", "chebyshev_T2k_log",
    "f_k_defect", "g_k_envelope", "g_k_envelope_log", "heat_kernel_point",
    "heat_kernel_point_log", "laplace_identity",
    "OrthonormalBasis", "QExpansion", "apply_laplacian_fd",
    "bergman_kernel_diag", "bergman_kernel_grid", "delta_form",
    "dim_cusp_forms", "eisenstein_series", "evaluate_qexp",
    "fourier_square_integral", "monomial_basis", "orthonormal_basis",
    "petersson_inner", "sym_square_L_from_norm",
    "BoundConfig", "ScanResult", "SlopeFit", "base_integral",
    "compute_c_delta", "cusp_strip_maximizer", "growth_fit", "h_function",
    "horocycle_sum_vs_gamma_ratio", "proposition41_bound",
    "subgroup_orbit_comparison", "supnorm_scan",
    "DEFAULT_QUAD", "QuadratureConfig", "TruncatedValue",
    "__version__",
]
