"""Bias-aware error bound for the optimal measurement.

The estimator is biased, so instead of the standard unbiased bound we use
the derivative of the field matrix with respect to the coupling,

    (drho)[n,m] = (-2 g f2[n,m] + f1[n,m]) * rho[n,m],

the purity-weighted sensitivity

    x(g) = Tr{(drho rho + rho drho)(M - g I)} = x1'(g) - g x2'(g)

with x1 = Tr{rho^2 M} and x2 = Tr{rho^2}, and the Cauchy-Schwarz estimate

    MSE(M) = Tr{rho (M - g I)^2}  >=  x(g)^2 / (4 Tr{rho drho^2}).

Both |x| and the information-like denominator Tr{rho drho^2} are reported
separately so alternative normalizations can be reconstructed offline.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import sqrtm

from .errors import DegenerateDerivative
from .estimator import real_trace
from .field_state import FCoefficients, FieldDensityMatrix, build_density

INFO_DENOM_TOL = 1e-14


@dataclass(frozen=True)
class DerivativeData:
    """d(rho)/dg at one coupling value, with the entrywise multipliers."""

    drho: np.ndarray
    coeffs: np.ndarray


def drho_dg(F: FCoefficients, a: np.ndarray, g: float) -> DerivativeData:
    """Analytic derivative of the field matrix with respect to the coupling.

    Entrywise differentiation of the exponent; valid for every supported
    mechanical state family.  For coherent states this equals the double
    commutator form built from number operators (covered by tests).
    """
    rho = build_density(a, F, g)
    coeffs = -2 * g * F.f2 + F.f1
    return DerivativeData(drho=coeffs * rho.rho, coeffs=coeffs)


def x_of_g(rho: FieldDensityMatrix, drho: DerivativeData,
           M: np.ndarray, g: float) -> float:
    """Sensitivity x(g) = Tr{(drho rho + rho drho)(M - g I)}."""
    r, d = rho.rho, drho.drho
    shifted = M - g * np.eye(M.shape[0])
    return real_trace(np.trace((d @ r + r @ d) @ shifted), "x(g)")


def information_denominator(rho: FieldDensityMatrix,
                            drho: DerivativeData) -> float:
    """Tr{rho drho^2}, the Fisher-like normalization of the bound."""
    return real_trace(np.trace(rho.rho @ drho.drho @ drho.drho),
                      "information denominator")


def lower_bound(rho: FieldDensityMatrix, drho: DerivativeData,
                x: float) -> float:
    """Lower bound x^2 / (4 Tr{rho drho^2}) on the mean-squared error.

    Raises DegenerateDerivative when the denominator vanishes (e.g. tau = 0):
    the field then carries no information about the coupling.
    """
    denom = information_denominator(rho, drho)
    if denom < INFO_DENOM_TOL:
        raise DegenerateDerivative(
            f"Tr{{rho drho^2}} = {denom:.3e} < {INFO_DENOM_TOL}")
    return x * x / (4 * denom)


def mse_direct(rho: FieldDensityMatrix, M: np.ndarray, g: float) -> float:
    """Mean-squared error Tr{rho (M - g I)^2} at the true coupling g."""
    shifted = M - g * np.eye(M.shape[0])
    return real_trace(np.trace(rho.rho @ shifted @ shifted), "MSE")


@dataclass(frozen=True)
class BoundResult:
    g: float
    x: float
    denom: float
    lower_bound: float
    mse: float


def bound_at(rho: FieldDensityMatrix, drho: DerivativeData,
             M: np.ndarray) -> BoundResult:
    """Evaluate sensitivity, bound, and direct error at one coupling value."""
    g = rho.g
    x = x_of_g(rho, drho, M, g)
    lb = lower_bound(rho, drho, x)
    return BoundResult(g=g, x=x, denom=information_denominator(rho, drho),
                       lower_bound=lb, mse=mse_direct(rho, M, g))


def bound_curve(F: FCoefficients, a: np.ndarray, M: np.ndarray,
                g_grid: np.ndarray) -> list[BoundResult]:
    """Bound results over a coupling grid; degenerate points are skipped."""
    out = []
    for g in g_grid:
        rho = build_density(a, F, g)
        d = drho_dg(F, a, g)
        try:
            out.append(bound_at(rho, d, M))
        except DegenerateDerivative:
            continue
    return out


@dataclass(frozen=True)
class HilbertSchmidtReport:
    """Frobenius norms of rho^{1/2} drho and rho^{1/2} M.

    Always finite in a truncated basis; recorded so the verify report can
    show the quantities whose finiteness the bound derivation assumes.
    """

    norm_sqrt_rho_drho: float
    norm_sqrt_rho_m: float


def hilbert_schmidt_guard(rho: FieldDensityMatrix, drho: DerivativeData,
                          M: np.ndarray) -> HilbertSchmidtReport:
    root = sqrtm((rho.rho + rho.rho.conj().T) / 2)
    return HilbertSchmidtReport(
        norm_sqrt_rho_drho=float(np.linalg.norm(root @ drho.drho)),
        norm_sqrt_rho_m=float(np.linalg.norm(root @ M)),
    )
