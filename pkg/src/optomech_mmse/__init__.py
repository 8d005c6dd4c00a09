"""Optimal Bayesian estimation of an optomechanical coupling strength
from the reduced state of the cavity field."""

from .bound import (BoundResult, bound_at, bound_curve, drho_dg,
                    information_denominator, lower_bound, mse_direct, x_of_g)
from .config import RunConfig, load_config
from .errors import (BranchFailure, ConfigError, DegenerateDerivative,
                     DegenerateSqueezing, NonHermitianInput,
                     NumericalConsistencyError, OptomechError,
                     QuadratureNonConvergence, SingularPair,
                     TruncationOverflow, WindowEdgeWarning)
from .estimator import (EstimatorSolution, TStarResult, average_estimate,
                        bias, find_tstar, min_cost, solve_at_time,
                        solve_optimal)
from .field_state import (Coherent, FCoefficients, FieldDensityMatrix,
                          ModelConfig, Squeezed, Thermal, build_density,
                          equal_weight_amplitudes, f_coeffs)
from .moments import GaussianPrior, MomentOperators, build_gammas

__version__ = "1.0.0"

__all__ = [
    "BoundResult", "BranchFailure", "Coherent", "ConfigError",
    "DegenerateDerivative", "DegenerateSqueezing", "EstimatorSolution",
    "FCoefficients", "FieldDensityMatrix", "GaussianPrior", "ModelConfig",
    "MomentOperators", "NonHermitianInput", "NumericalConsistencyError",
    "OptomechError", "QuadratureNonConvergence", "RunConfig", "SingularPair",
    "Squeezed", "TStarResult", "Thermal", "TruncationOverflow",
    "WindowEdgeWarning", "average_estimate", "bias", "bound_at",
    "bound_curve", "build_density", "build_gammas", "drho_dg",
    "equal_weight_amplitudes", "f_coeffs", "find_tstar",
    "information_denominator", "load_config", "lower_bound", "min_cost",
    "mse_direct", "solve_at_time", "solve_optimal", "x_of_g",
]
