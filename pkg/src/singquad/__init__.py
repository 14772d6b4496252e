"""Corrected trapezoidal rules for weakly singular radial kernels.

Correction weights for log r and r^-nu singularities on uniform grids in
any dimension, FFT convolution with the corrected kernel spectrum, and
Helmholtz scattering solvers built on them.
"""

from ._backend import COMPILED
from .convolve import Convolver, PotentialField, SourceField, direct_convolve, fast_convolve
from .kernels import (
    KernelFactorization, bie_double_layer, bie_single_layer, helmholtz, helmholtz_even, helmholtz_odd,
    static_kernel,
)
from .quadrature import (
    CorrectionWeights, KernelSpectrum, apply_rule, build_weights, combined_weights, dft, effective_weights, idft,
    kernel_spectrum, regularized_phi,
)
from .singularity import (
    GridSpec, SingularityKind, max_inscribed_radius, phi_hat_log, phi_hat_power, phi_hat_table, rho_of_k,
)
from .suites import SuiteReport, run_suite

__version__ = "0.1.0"

__all__ = [
    "COMPILED", "Convolver", "CorrectionWeights", "GridSpec", "KernelFactorization", "KernelSpectrum",
    "PotentialField", "SingularityKind", "SourceField", "SuiteReport", "apply_rule", "bie_double_layer",
    "bie_single_layer", "build_weights", "combined_weights", "dft", "direct_convolve", "effective_weights",
    "fast_convolve", "helmholtz", "helmholtz_even", "helmholtz_odd", "idft", "kernel_spectrum",
    "max_inscribed_radius", "phi_hat_log", "phi_hat_power", "phi_hat_table", "regularized_phi", "rho_of_k",
    "run_suite", "static_kernel",
]
