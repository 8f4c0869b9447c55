"""Integral quantization on truncated Fock spaces and the affine half-plane."""
__version__ = "0.1.0"

from . import affine, berezin, fock, kernels, quadrature, sphere, weyl
from .affine import (AffineQuantizer, AffineWindow, FiducialVector, HalfLineGrid,
                     affine_cs, c_gamma, kinetic_K)
from .berezin import RhoFamily, Window, berezin_transform, classical_distance, lower_symbol
from .errors import (ConfigError, DivergentMomentError, GridMismatchError, IntegrabilityError,
                     NodeEvaluationError)
from .fock import TruncatedFockSpace, displacement
from .quadrature import PhaseSpaceQuadrature
from .sphere import SpherePhasePoint, complex_angle, complexify
from .weyl import (WeightFunction, WHQuantizer, boltzmann_rho, build_M, cg_M_analytic,
                   quantize, thermal_s)

__all__ = [
    "affine", "berezin", "fock", "kernels", "quadrature", "sphere", "weyl",
    "AffineQuantizer", "AffineWindow", "FiducialVector", "HalfLineGrid", "affine_cs",
    "c_gamma", "kinetic_K", "RhoFamily", "Window", "berezin_transform",
    "classical_distance", "lower_symbol", "ConfigError", "DivergentMomentError",
    "GridMismatchError", "IntegrabilityError", "NodeEvaluationError",
    "TruncatedFockSpace", "displacement", "PhaseSpaceQuadrature", "SpherePhasePoint",
    "complex_angle", "complexify", "WeightFunction", "WHQuantizer", "boltzmann_rho",
    "build_M", "cg_M_analytic", "quantize", "thermal_s",
]
