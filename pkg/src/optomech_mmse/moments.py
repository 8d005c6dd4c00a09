"""Prior-weighted moment operators of the field state.

With a Gaussian prior p(g) on the coupling, the operators

    Gamma_k = integral g^k p(g) rho_F(g) dg      (k = 0, 1, 2)

have closed-form entries because each entry of rho_F(g) is a Gaussian in g.
Completing the square gives, per index pair (n, m),

    sigma'^2 = 2 f2 sigma^2 + 1
    A0 = 1/sigma'
    A1 = (g0 + f1 sigma^2) / sigma'^3
    A2 = ((g0 + f1 sigma^2)^2 + sigma^2 sigma'^2) / sigma'^5
    gamma = (2 g0^2 f2 - 2 g0 f1 + 2 f0 sigma'^2 - f1^2 sigma^2) / (2 sigma'^2)

and (Gamma_k)[n,m] = a_n conj(a_m) A_k exp(-gamma).  sigma' is the principal
complex square root of sigma'^2; odd powers are formed as (sigma'^2)^k * sigma'
so all three A's stay on the same branch.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BranchFailure
from .field_state import FCoefficients, validate_amplitudes


@dataclass(frozen=True)
class GaussianPrior:
    """Gaussian prior on the coupling, full real-line support."""

    g0: float
    sigma: float

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be > 0")

    def pdf(self, g):
        return np.exp(-(g - self.g0) ** 2 / (2 * self.sigma ** 2)) \
            / np.sqrt(2 * np.pi * self.sigma ** 2)


@dataclass(frozen=True)
class MomentOperators:
    """The Hermitian triple (Gamma_0, Gamma_1, Gamma_2)."""

    gamma0: np.ndarray
    gamma1: np.ndarray
    gamma2: np.ndarray

    @property
    def dim(self) -> int:
        return self.gamma0.shape[0]


@dataclass(frozen=True)
class GammaEntryCoeffs:
    """Closed-form integral coefficients for one index pair."""

    sigma_prime_sq: complex
    gamma_nm: complex
    A0: complex
    A1: complex
    A2: complex


def _entry_coeffs(f0, f1, f2, prior: GaussianPrior) -> GammaEntryCoeffs:
    s2 = prior.sigma ** 2
    sp2 = 2 * f2 * s2 + 1
    if np.real(sp2) <= 0:
        raise BranchFailure(
            f"Re(sigma'^2) = {np.real(sp2):.3e} <= 0; Gaussian integral diverges")
    sp = np.sqrt(sp2)  # principal branch
    mean_shift = prior.g0 + f1 * s2
    gamma_nm = (2 * prior.g0 ** 2 * f2 - 2 * prior.g0 * f1
                + 2 * f0 * sp2 - f1 ** 2 * s2) / (2 * sp2)
    A0 = 1 / sp
    A1 = mean_shift / (sp2 * sp)
    A2 = (mean_shift ** 2 + s2 * sp2) / (sp2 ** 2 * sp)
    return GammaEntryCoeffs(sp2, gamma_nm, A0, A1, A2)


def gamma_entry_coeffs(F: FCoefficients, prior: GaussianPrior,
                       n: int, m: int) -> GammaEntryCoeffs:
    """Integral coefficients for entry (n, m) of the moment operators."""
    return _entry_coeffs(F.f0[n, m], F.f1[n, m], F.f2[n, m], prior)


def build_gammas(a: np.ndarray, F: FCoefficients,
                 prior: GaussianPrior) -> MomentOperators:
    """Assemble Gamma_0, Gamma_1, Gamma_2 from the closed-form entries."""
    a = validate_amplitudes(a)
    N = F.dim
    g0 = np.empty((N, N), dtype=complex)
    g1 = np.empty((N, N), dtype=complex)
    g2 = np.empty((N, N), dtype=complex)
    for n in range(N):
        for m in range(N):
            c = gamma_entry_coeffs(F, prior, n, m)
            w = a[n] * np.conj(a[m]) * np.exp(-c.gamma_nm)
            g0[n, m] = w * c.A0
            g1[n, m] = w * c.A1
            g2[n, m] = w * c.A2
    return MomentOperators(g0, g1, g2)
