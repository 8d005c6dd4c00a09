"""Brute-force cross-checks for every closed form in the package.

The joint photon-phonon evolution is block-diagonal in the photon number:
block n evolves the mechanics under n g (b^dag + b) + b^dag b (rotating
frame, mechanical frequency = 1).  Each block is exponentiated numerically
through an eigendecomposition in a truncated phonon basis, the mechanics is
traced out, and the result is compared against the analytic field matrix.

The other oracles are straight quadrature versions of the closed-form
Gaussian integrals and of the integral form of the optimal-operator
equation.  None of these routines reuse the analytic coefficient matrices;
independence from the code paths they check is the point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad, quad_vec
from scipy.linalg import expm
from scipy.special import gammaln

from .errors import QuadratureNonConvergence, SingularPair, TruncationOverflow
from .field_state import (Coherent, FCoefficients, FieldDensityMatrix,
                          MechInit, ModelConfig, Squeezed, Thermal,
                          validate_amplitudes)
from .moments import GaussianPrior, MomentOperators

THERMAL_QUAD_NODES = 32


@dataclass(frozen=True)
class TruncationSpec:
    """Phonon-basis size and the acceptable population in its top levels."""

    n_mech: int
    tail_tol: float = 1e-10

    def __post_init__(self):
        if self.n_mech < 4:
            raise ValueError("n_mech must be >= 4")


def default_truncation(displacement: float, n_phot: int, g: float,
                       squeeze_abs: float = 0.0) -> TruncationSpec:
    """Phonon truncation from the displaced-amplitude rule.

    The largest mechanical displacement reachable during the evolution is
    bounded by |alpha| + 2 g (N - 1); a coherent state of that amplitude
    needs a basis roughly four times its mean occupation.  Squeezing widens
    the number distribution, hence the cosh factor.
    """
    amp = abs(displacement) + 2 * abs(g) * (n_phot - 1)
    dim = int(np.ceil((4 * amp ** 2 + 8 * amp + 20) * np.cosh(2 * squeeze_abs)))
    return TruncationSpec(n_mech=max(dim, 4))


# --------------------------------------------------------------------------
# phonon-basis building blocks
# --------------------------------------------------------------------------

def lowering_operator(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1.0, dim)), 1)


def coherent_vector(amplitudes: np.ndarray, dim: int) -> np.ndarray:
    """Fock expansion of coherent states; rows follow the input amplitudes."""
    amplitudes = np.atleast_1d(np.asarray(amplitudes, dtype=complex))
    k = np.arange(dim)
    out = np.zeros((amplitudes.size, dim), dtype=complex)
    nz = amplitudes != 0
    if np.any(nz):
        la = np.log(amplitudes[nz])
        out[nz] = np.exp(-np.abs(amplitudes[nz][:, None]) ** 2 / 2
                         + k[None, :] * la[:, None]
                         - gammaln(k + 1)[None, :] / 2)
    out[~nz, 0] = 1.0
    return out


def squeezed_vector(alpha: complex, zeta: complex, dim: int) -> np.ndarray:
    """Fock expansion of D(alpha) S(zeta) |0> by explicit matrix exponentials."""
    b = lowering_operator(dim)
    bd = b.conj().T
    S = expm(0.5 * (np.conj(zeta) * (b @ b) - zeta * (bd @ bd)))
    D = expm(alpha * bd - np.conj(alpha) * b)
    vac = np.zeros(dim, dtype=complex)
    vac[0] = 1.0
    return D @ (S @ vac)


def block_propagator(n: int, g: float, tau: float, dim: int) -> np.ndarray:
    """exp(-i tau [b^dag b + n g (b^dag + b)]) by Hermitian eigendecomposition."""
    b = lowering_operator(dim)
    H = b.conj().T @ b + n * g * (b + b.conj().T)
    w, V = np.linalg.eigh(H)
    return (V * np.exp(-1j * w * tau)) @ V.conj().T


def closed_form_block(mech: Coherent, n: int, g: float, tau: float,
                      dim: int) -> np.ndarray:
    """Analytic evolved phonon state of photon block n: e^{i phi_n} |beta_n>.

    Independent route through the displacement-operator algebra; used to
    validate the numeric block propagator itself.
    """
    alpha = mech.alpha
    beta_n = n * g * (np.exp(-1j * tau) - 1) + alpha * np.exp(-1j * tau)
    phi_n = n ** 2 * g ** 2 * (tau - np.sin(tau)) \
        + n * g * (np.conj(alpha) * (1 - np.exp(1j * tau))
                   - alpha * (1 - np.exp(-1j * tau))) / 2j
    return np.exp(1j * phi_n) * coherent_vector(np.array([beta_n]), dim)[0]


# --------------------------------------------------------------------------
# joint evolution and partial trace
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class JointState:
    """Evolved joint state as a weighted ensemble of pure product branches.

    blocks[k, n, :] holds a_n times the evolved phonon vector of photon
    block n in ensemble branch k.  Pure inputs have a single branch of
    weight one; thermal inputs carry one branch per quadrature node of the
    quasi-probability mixture.
    """

    blocks: np.ndarray   # (K, N, n_mech)
    weights: np.ndarray  # (K,)
    g: float


def _check_tail(blocks: np.ndarray, weights: np.ndarray, tol: float):
    pop = np.einsum("k,knj->j", weights, np.abs(blocks) ** 2).real
    tail = float(pop[-2:].sum())
    if tail > tol:
        raise TruncationOverflow(
            f"population {tail:.3e} in the top two phonon levels "
            f"(tolerance {tol:.1e}); enlarge n_mech")


def evolve_joint(cfg: ModelConfig, a: np.ndarray, g: float,
                 trunc: TruncationSpec | None = None) -> JointState:
    """Numerically evolve the uncorrelated initial state for time cfg.tau."""
    a = validate_amplitudes(a)
    N = len(a)
    tau = cfg.tau
    mech = cfg.mech

    if isinstance(mech, Thermal):
        x, wx = np.polynomial.hermite.hermgauss(THERMAL_QUAD_NODES)
        gamma_nodes = np.sqrt(mech.n_th) * (x[:, None] + 1j * x[None, :]).ravel()
        weights = (wx[:, None] * wx[None, :]).ravel() / np.pi
        if trunc is None:
            trunc = default_truncation(np.abs(gamma_nodes).max(), N, g)
        initial = coherent_vector(gamma_nodes, trunc.n_mech)  # (K, dim)
    else:
        if isinstance(mech, Squeezed):
            if trunc is None:
                trunc = default_truncation(mech.alpha_abs, N, g, mech.zeta_abs)
            initial = squeezed_vector(mech.alpha, mech.zeta, trunc.n_mech)[None, :]
        else:
            if trunc is None:
                trunc = default_truncation(mech.alpha_abs, N, g)
            initial = coherent_vector(np.array([mech.alpha]), trunc.n_mech)
        weights = np.ones(1)

    blocks = np.empty((initial.shape[0], N, trunc.n_mech), dtype=complex)
    for n in range(N):
        U = block_propagator(n, g, tau, trunc.n_mech)
        blocks[:, n, :] = a[n] * (initial @ U.T)
    _check_tail(blocks, weights, trunc.tail_tol)
    return JointState(blocks=blocks, weights=weights, g=float(g))


def partial_trace_mech(state: JointState) -> FieldDensityMatrix:
    """Trace out the mechanics: rho[n,m] = sum_k w_k <block_m,k | block_n,k>."""
    rho = np.einsum("k,knj,kmj->nm", state.weights,
                    state.blocks, state.blocks.conj())
    return FieldDensityMatrix(rho=rho, g=state.g)


def oracle_density(mech: MechInit, a: np.ndarray, g: float, tau: float,
                   g0: float = 1.0, sigma: float = 2 ** -0.25,
                   trunc: TruncationSpec | None = None) -> FieldDensityMatrix:
    """Field matrix by joint evolution and partial trace (no closed forms)."""
    cfg = ModelConfig(g0=g0, sigma=sigma, tau=tau, n_phot=len(a), mech=mech)
    return partial_trace_mech(evolve_joint(cfg, np.asarray(a, complex), g, trunc))


# --------------------------------------------------------------------------
# quadrature versions of the closed-form integrals
# --------------------------------------------------------------------------

QUAD_ABS_TOL = 1e-11
QUAD_RANGE_SIGMAS = 10.0


def gamma_quadrature(F: FCoefficients, a: np.ndarray, prior: GaussianPrior,
                     k: int) -> np.ndarray:
    """Gamma_k by adaptive quadrature of g^k p(g) rho_F(g) over the prior."""
    if k not in (0, 1, 2):
        raise ValueError("k must be 0, 1, or 2")
    a = validate_amplitudes(a)
    lo = prior.g0 - QUAD_RANGE_SIGMAS * prior.sigma
    hi = prior.g0 + QUAD_RANGE_SIGMAS * prior.sigma
    N = F.dim
    out = np.empty((N, N), dtype=complex)
    for n in range(N):
        for m in range(N):
            f0, f1, f2 = F.f0[n, m], F.f1[n, m], F.f2[n, m]

            def entry(g):
                return g ** k * prior.pdf(g) * np.exp(-g * g * f2 + g * f1 - f0)

            re, re_err = quad(lambda g: entry(g).real, lo, hi,
                              epsabs=1e-13, epsrel=1e-13, limit=200)
            im, im_err = quad(lambda g: entry(g).imag, lo, hi,
                              epsabs=1e-13, epsrel=1e-13, limit=200)
            if max(re_err, im_err) > QUAD_ABS_TOL:
                raise QuadratureNonConvergence(
                    f"entry ({n},{m}) k={k}: error {max(re_err, im_err):.3e}")
            out[n, m] = a[n] * np.conj(a[m]) * (re + 1j * im)
    return out


def mmse_integral_quadrature(G: MomentOperators) -> np.ndarray:
    """Optimal operator from its integral form
    M = 2 * integral_0^xmax exp(-Gamma_0 x) Gamma_1 exp(-Gamma_0 x) dx.

    The upper limit is chosen so the smallest strictly positive eigenvalue of
    Gamma_0 has fully decayed.  Null sectors follow the same convention as
    the eigenbasis solver.
    """
    lam = np.linalg.eigvalsh(G.gamma0)
    positive = lam[lam > 1e-12]
    if positive.size == 0:
        raise SingularPair("Gamma_0 has no eigenvalue above tolerance")
    # null-sector consistency check, same split as the direct solver
    _, V = np.linalg.eigh(G.gamma0)
    lam_full, _ = np.linalg.eigh(G.gamma0)
    g1t = V.conj().T @ G.gamma1 @ V
    den = lam_full[:, None] + lam_full[None, :]
    bad = (den < 1e-12) & (np.abs(g1t) > 1e-10)
    if np.any(bad):
        raise SingularPair("vanishing eigenvalue pair with nonzero source")

    x_max = -np.log(1e-12) / (2 * positive.min())

    def integrand(x):
        E = expm(-G.gamma0 * x)
        return 2 * (E @ G.gamma1 @ E)

    val, err = quad_vec(integrand, 0.0, x_max, epsabs=1e-10, epsrel=1e-10)
    if err > 1e-7:
        raise QuadratureNonConvergence(f"operator integral error {err:.3e}")
    return val


def cost_quadrature(F: FCoefficients, a: np.ndarray, prior: GaussianPrior,
                    M: np.ndarray) -> float:
    """Average cost Tr{ integral p(g) (M - g I)^2 rho_F(g) dg } by quadrature."""
    a = validate_amplitudes(a)
    lo = prior.g0 - QUAD_RANGE_SIGMAS * prior.sigma
    hi = prior.g0 + QUAD_RANGE_SIGMAS * prior.sigma
    eye = np.eye(len(a))

    def integrand(g):
        rho = np.outer(a, a.conj()) * np.exp(-g * g * F.f2 + g * F.f1 - F.f0)
        shifted = M - g * eye
        return prior.pdf(g) * np.real(np.trace(shifted @ shifted @ rho))

    val, err = quad(integrand, lo, hi, limit=200)
    if err > QUAD_ABS_TOL * 100:
        raise QuadratureNonConvergence(f"cost quadrature error {err:.3e}")
    return val
