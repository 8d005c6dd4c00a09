"""Reduced optical-field density matrix of a single-mode optomechanical system.

A single cavity mode couples to one mechanical mode through radiation
pressure.  Everything is dimensionless: times are measured in units of the
inverse mechanical frequency (tau = omega_m * t), couplings in units of the
mechanical frequency, and the optical rotating frame is baked in so the
optical frequency never appears.

After tracing out the mechanics, the field matrix in the truncated
photon-number basis has entries

    rho[n, m] = a_n * conj(a_m) * exp(-g^2 f2[n,m] + g f1[n,m] - f0[n,m])

where the three coefficient matrices (f0, f1, f2) depend on the initial
mechanical state (coherent, thermal, or displaced squeezed) and on tau.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import NonHermitianInput

HERMITICITY_TOL = 1e-12
AMPLITUDE_NORM_TOL = 1e-12


# --------------------------------------------------------------------------
# initial mechanical states
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Coherent:
    """Coherent initial mechanical state with amplitude alpha_abs*e^{i*alpha_phase}."""

    alpha_abs: float = 0.0
    alpha_phase: float = 0.0

    def __post_init__(self):
        if self.alpha_abs < 0:
            raise ValueError("alpha_abs must be >= 0")

    @property
    def alpha(self) -> complex:
        return self.alpha_abs * np.exp(1j * self.alpha_phase)


@dataclass(frozen=True)
class Thermal:
    """Thermal initial mechanical state with mean phonon number n_th."""

    n_th: float = 0.0

    def __post_init__(self):
        if self.n_th < 0:
            raise ValueError("n_th must be >= 0")


@dataclass(frozen=True)
class Squeezed:
    """Displaced squeezed vacuum D(alpha) S(zeta) |0>."""

    alpha_abs: float = 0.0
    alpha_phase: float = 0.0
    zeta_abs: float = 0.0
    zeta_phase: float = 0.0

    def __post_init__(self):
        if self.alpha_abs < 0 or self.zeta_abs < 0:
            raise ValueError("alpha_abs and zeta_abs must be >= 0")

    @property
    def alpha(self) -> complex:
        return self.alpha_abs * np.exp(1j * self.alpha_phase)

    @property
    def zeta(self) -> complex:
        return self.zeta_abs * np.exp(1j * self.zeta_phase)


MechInit = Union[Coherent, Thermal, Squeezed]


@dataclass(frozen=True)
class ModelConfig:
    """Dimensionless physical parameters of one estimation scenario.

    g0, sigma  : mean and standard deviation of the Gaussian prior on the
                 coupling (units of the mechanical frequency)
    tau        : dimensionless interaction time
    n_phot     : photon-basis dimension N
    mech       : initial mechanical state
    """

    g0: float
    sigma: float
    tau: float
    n_phot: int
    mech: MechInit

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be > 0")
        if self.n_phot < 2:
            raise ValueError("n_phot must be >= 2")
        if self.tau < 0:
            raise ValueError("tau must be >= 0")


# --------------------------------------------------------------------------
# optical amplitudes
# --------------------------------------------------------------------------

def equal_weight_amplitudes(n_phot: int) -> np.ndarray:
    """Equal-weight superposition a_n = 1/sqrt(N) of the first N number states."""
    return np.full(n_phot, 1.0 / np.sqrt(n_phot), dtype=complex)


def validate_amplitudes(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=complex).ravel()
    if a.size < 2:
        raise ValueError("need at least two photon amplitudes")
    norm = np.sum(np.abs(a) ** 2)
    if abs(norm - 1.0) > AMPLITUDE_NORM_TOL:
        raise ValueError(f"amplitudes not normalized: sum |a_n|^2 = {norm!r}")
    return a


# --------------------------------------------------------------------------
# coefficient matrices
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class FCoefficients:
    """The three N x N matrices defining the field-matrix exponent.

    Conjugate symmetry f[n, m] = conj(f[m, n]) holds for each matrix so the
    resulting density matrix is Hermitian.
    """

    f0: np.ndarray
    f1: np.ndarray
    f2: np.ndarray

    @property
    def dim(self) -> int:
        return self.f2.shape[0]

    def max_asymmetry(self) -> float:
        return max(
            float(np.max(np.abs(f - f.conj().T)))
            for f in (self.f0, self.f1, self.f2)
        )

    def exponent(self, g: float) -> np.ndarray:
        """The scalar exponent -g^2 f2 + g f1 - f0, evaluated before exp
        to avoid overflow in intermediate factors."""
        return -g * g * self.f2 + g * self.f1 - self.f0


def _index_grids(n_phot: int):
    n = np.arange(n_phot, dtype=float)[:, None]
    m = np.arange(n_phot, dtype=float)[None, :]
    return n, m


def _linear_phase_factor(alpha: complex, tau: float) -> complex:
    # purely imaginary; proportional to alpha, vanishes for ground-state mechanics
    return np.conj(alpha) * (1 - np.exp(1j * tau)) - alpha * (1 - np.exp(-1j * tau))


def f_coeffs_coherent(mech: Coherent, tau: float, n_phot: int) -> FCoefficients:
    """Coefficient matrices for an initial coherent mechanical state.

    f0 vanishes in the rotating frame; f1 is linear in the displacement and
    in (n - m); f2 carries the photon-number-dependent decoherence factor
    plus the Kerr-like phase.
    """
    n, m = _index_grids(n_phot)
    X = _linear_phase_factor(mech.alpha, tau)
    f0 = np.zeros((n_phot, n_phot), dtype=complex)
    f1 = X * (n - m)
    f2 = (1 - np.cos(tau)) * (n - m) ** 2 \
        - 1j * (tau - np.sin(tau)) * (n ** 2 - m ** 2)
    return FCoefficients(f0, f1, f2.astype(complex))


def f_coeffs_thermal(mech: Thermal, tau: float, n_phot: int) -> FCoefficients:
    """Coefficient matrices for an initial thermal mechanical state.

    Identical to the undisplaced coherent case except that the real
    (decohering) part of f2 is enhanced by the factor 2*n_th + 1.
    """
    n, m = _index_grids(n_phot)
    f0 = np.zeros((n_phot, n_phot), dtype=complex)
    f1 = np.zeros((n_phot, n_phot), dtype=complex)
    f2 = (2 * mech.n_th + 1) * (1 - np.cos(tau)) * (n - m) ** 2 \
        - 1j * (tau - np.sin(tau)) * (n ** 2 - m ** 2)
    return FCoefficients(f0, f1, f2.astype(complex))


def f_coeffs_squeezed(mech: Squeezed, tau: float, n_phot: int) -> FCoefficients:
    """Coefficient matrices for an initial displaced squeezed state.

    Built from the exact overlap of two displaced squeezed states with the
    same (rotated) squeezing parameter: with beta_n the photon-number
    conditioned mechanical displacement and delta = beta_n - beta_m,

        <beta_m, xi | beta_n, xi> = exp[(conj(beta_m) beta_n
                                         - beta_m conj(beta_n))/2
                                        - |delta cosh r
                                           + conj(delta) e^{i Theta} sinh r|^2 / 2]

    with Theta = theta - 2 tau the rotated squeezing angle.  Because delta is
    proportional to g (n - m), the exponent stays an exact quadratic in g:
    f1 is unchanged from the coherent case and only the real part of f2
    acquires the squeezing-angle-dependent factor.  Reduces entrywise to the
    coherent matrices at zeta = 0.
    """
    n, m = _index_grids(n_phot)
    r = mech.zeta_abs
    c, s = np.cosh(r), np.sinh(r)
    E = np.exp(-1j * tau) - 1
    Theta = mech.zeta_phase - 2 * tau
    quad_real = abs(E) ** 2 * (c * c + s * s) / 2 \
        + c * s * np.real(E * E * np.exp(-1j * Theta))
    f0 = np.zeros((n_phot, n_phot), dtype=complex)
    f1 = _linear_phase_factor(mech.alpha, tau) * (n - m)
    f2 = quad_real * (n - m) ** 2 \
        - 1j * (tau - np.sin(tau)) * (n ** 2 - m ** 2)
    return FCoefficients(f0, f1, f2.astype(complex))


def f_coeffs(mech: MechInit, tau: float, n_phot: int) -> FCoefficients:
    """Dispatch on the initial mechanical state family."""
    if isinstance(mech, Coherent):
        return f_coeffs_coherent(mech, tau, n_phot)
    if isinstance(mech, Thermal):
        return f_coeffs_thermal(mech, tau, n_phot)
    if isinstance(mech, Squeezed):
        return f_coeffs_squeezed(mech, tau, n_phot)
    raise TypeError(f"unsupported mechanical state: {mech!r}")


# --------------------------------------------------------------------------
# field density matrix
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldDensityMatrix:
    """N x N Hermitian unit-trace matrix of the optical field at coupling g."""

    rho: np.ndarray
    g: float


def build_density(a: np.ndarray, F: FCoefficients, g: float) -> FieldDensityMatrix:
    """Assemble rho[n,m] = a_n conj(a_m) exp(-g^2 f2 + g f1 - f0)."""
    a = validate_amplitudes(a)
    if a.size != F.dim:
        raise ValueError(f"amplitude length {a.size} != coefficient dim {F.dim}")
    asym = F.max_asymmetry()
    if asym > 10 * HERMITICITY_TOL:
        raise NonHermitianInput(
            f"coefficient matrices violate conjugate symmetry by {asym:.3e}")
    rho = np.outer(a, a.conj()) * np.exp(F.exponent(g))
    return FieldDensityMatrix(rho=rho, g=float(g))


# --------------------------------------------------------------------------
# series route for the squeezed case (diagnostics only)
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SqueezedAux:
    """Auxiliary coefficients of the phase-space series form of the squeezed
    exponent, for one index pair (n, m)."""

    chi1: complex
    chi2: complex
    chi3: complex
    chi4: complex
    xi0: complex
    xi1: complex
    xi2: complex
    I0: complex
    I1: complex
    I2: complex


def squeezed_aux(mech: Squeezed, tau: float, n: int, m: int) -> SqueezedAux:
    """Series-form auxiliaries for entry (n, m) of the squeezed coefficient
    matrices.

    This is the phase-space (quasi-probability) integral route.  Several of
    its sign/conjugation conventions are ambiguous; the closed-form route in
    :func:`f_coeffs_squeezed` is the production path, and the residual between
    the two is reported by the verify command rather than patched here.
    """
    from .errors import DegenerateSqueezing

    T = np.tanh(mech.zeta_abs)
    theta = mech.zeta_phase
    phi = mech.alpha_phase
    aa = mech.alpha_abs
    z = theta - 2 * tau
    z1 = tau - phi
    z2 = tau - phi - theta

    denom = 1 - T * np.cos(z)
    if abs(denom) < 1e-300:
        raise DegenerateSqueezing(f"series denominator underflow at tau={tau}")

    Em = np.exp(-1j * tau) - 1
    Ep = np.exp(1j * tau) - 1
    chi1 = n * Em - m * Ep
    chi2 = n * Em + m * Ep
    chi3 = n * (1 - np.exp(-1j * tau)) * np.exp(1j * (theta - tau)) \
        - m * (1 - np.exp(1j * tau)) * np.exp(-1j * (theta - tau))
    chi4 = n * (1 - np.exp(-1j * tau)) * np.exp(1j * (theta - tau)) \
        + m * (1 - np.exp(1j * tau)) * np.exp(-1j * (theta - tau))

    xi0 = 1 / (4 * denom)
    xi1 = denom / (4 * (1 - T * T))
    xi2 = 1j * T * np.sin(z) / denom

    P = chi1 + T * T * chi3
    Q = chi2 + T * T * chi4 + xi2 * P
    S = np.sin(z1) + T * np.sin(z2)
    C = np.cos(z1) + T * np.cos(z2)

    I2 = xi0 * P ** 2 - xi1 * Q ** 2
    I1 = 4 * aa * (xi0 * P * 1j * S + xi1 * Q * (C - 1j * xi2 * S))
    I0 = 4 * aa * aa * (xi0 * S ** 2 + xi1 * (C - 1j * xi2 * S) ** 2)
    return SqueezedAux(chi1, chi2, chi3, chi4, xi0, xi1, xi2, I0, I1, I2)


def f_coeffs_squeezed_series(mech: Squeezed, tau: float, n_phot: int) -> FCoefficients:
    """Assemble the squeezed coefficient matrices from the series auxiliaries.

    Diagnostics only; see :func:`squeezed_aux`.
    """
    T = np.tanh(mech.zeta_abs)
    theta = mech.zeta_phase
    alpha = mech.alpha
    aa = mech.alpha_abs
    r = mech.zeta_abs

    f0 = np.empty((n_phot, n_phot), dtype=complex)
    f1 = np.empty((n_phot, n_phot), dtype=complex)
    f2 = np.empty((n_phot, n_phot), dtype=complex)
    for n in range(n_phot):
        for m in range(n_phot):
            aux = squeezed_aux(mech, tau, n, m)
            f0[n, m] = aa * aa * (1 + T * np.cos(theta - 2 * mech.alpha_phase)) \
                - aux.I0 + np.log(np.cosh(r) * np.sqrt(1 - T * T))
            f1[n, m] = np.conj(alpha) * (1 - np.exp(1j * tau)) * (n - m) \
                + aux.I1 \
                + T * (np.conj(alpha) * (1 - np.exp(-1j * tau)) * np.exp(1j * theta) * n
                       + alpha * (1 - np.exp(1j * tau)) * np.exp(-1j * theta) * m) / 2
            f2[n, m] = -1j * (tau - np.sin(tau)) * (n ** 2 - m ** 2) \
                + T * ((np.exp(-1j * tau) - 1) ** 2 * np.exp(1j * theta) * n ** 2
                       + (np.exp(1j * tau) - 1) ** 2 * np.exp(-1j * theta) * m ** 2) / 2 \
                + (1 - np.cos(tau)) * (n ** 2 + m ** 2) + aux.I2
    return FCoefficients(f0, f1, f2)
