"""Optimal measurement operator and minimum average cost.

The Hermitian operator minimizing the prior-averaged squared error solves

    Gamma_0 M + M Gamma_0 = 2 Gamma_1

which we solve exactly in the eigenbasis of Gamma_0.  The associated cost is
Cbar_min = Tr{Gamma_2 - M Gamma_0 M}; it equals the prior variance at tau = 0
and whenever the field carries no information about the coupling.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import NumericalConsistencyError, SingularPair, WindowEdgeWarning
from .field_state import FieldDensityMatrix, MechInit, ModelConfig, f_coeffs
from .moments import GaussianPrior, MomentOperators, build_gammas

NULL_EIGENVALUE_TOL = 1e-12
NULL_SECTOR_RHS_TOL = 1e-10
IMAG_RESIDUE_TOL = 1e-10
GOLDEN_TAU_TOL = 1e-6


def real_trace(value: complex, what: str = "trace") -> float:
    """Check a mathematically real trace and drop its imaginary residue."""
    if abs(np.imag(value)) > IMAG_RESIDUE_TOL * max(1.0, abs(np.real(value))):
        raise NumericalConsistencyError(
            f"{what} has imaginary part {np.imag(value):.3e}")
    return float(np.real(value))


def solve_optimal(G: MomentOperators) -> np.ndarray:
    """Solve Gamma_0 M + M Gamma_0 = 2 Gamma_1 for Hermitian M.

    In the eigenbasis of Gamma_0 the solution is entrywise
    M_ij = 2 (Gamma_1)_ij / (lambda_i + lambda_j).  Sectors where both the
    eigenvalue pair and the right-hand side vanish are set to zero; a
    vanishing pair with a non-vanishing right-hand side has no bounded
    solution and raises SingularPair.
    """
    lam, V = np.linalg.eigh(G.gamma0)
    g1t = V.conj().T @ G.gamma1 @ V
    den = lam[:, None] + lam[None, :]
    null = den < NULL_EIGENVALUE_TOL
    bad = null & (np.abs(g1t) > NULL_SECTOR_RHS_TOL)
    if np.any(bad):
        i, j = np.argwhere(bad)[0]
        raise SingularPair(
            f"lambda_{i} + lambda_{j} = {den[i, j]:.3e} but "
            f"|Gamma_1| entry = {abs(g1t[i, j]):.3e}")
    mt = np.where(null, 0.0, 2 * g1t / np.where(null, 1.0, den))
    M = V @ mt @ V.conj().T
    return (M + M.conj().T) / 2


def min_cost(G: MomentOperators, M: np.ndarray) -> float:
    """Average minimum cost Cbar = Tr{Gamma_2 - M Gamma_0 M}."""
    return real_trace(np.trace(G.gamma2 - M @ G.gamma0 @ M), "min cost")


def average_estimate(M: np.ndarray, rho: FieldDensityMatrix) -> float:
    """Average measured estimate h(g) = Tr{M rho_F(g)}."""
    return real_trace(np.trace(M @ rho.rho), "average estimate")


def bias(M: np.ndarray, rho: FieldDensityMatrix) -> float:
    """Estimation bias Tr{rho (M - g I)} = h(g) - g."""
    return average_estimate(M, rho) - rho.g


@dataclass(frozen=True)
class EstimatorSolution:
    """Optimal operator at one interaction time, with its spectrum and cost."""

    m_min: np.ndarray
    eigenvalues: np.ndarray   # ascending
    eigenvectors: np.ndarray  # columns, orthonormal
    cbar_min: float
    tau: float


def solve_at_time(mech: MechInit, a: np.ndarray, prior: GaussianPrior,
                  tau: float) -> EstimatorSolution:
    """Build the moment operators at tau and solve for the optimal operator."""
    F = f_coeffs(mech, tau, len(a))
    G = build_gammas(a, F, prior)
    M = solve_optimal(G)
    vals, vecs = np.linalg.eigh(M)
    return EstimatorSolution(M, vals, vecs, min_cost(G, M), float(tau))


@dataclass(frozen=True)
class TStarResult:
    """Interaction time minimizing the average cost over a search window."""

    tau_star: float
    cbar_at_star: float
    solution: EstimatorSolution
    on_window_edge: bool


def _golden_section(f, lo: float, hi: float, tol: float = GOLDEN_TAU_TOL):
    invphi = (np.sqrt(5.0) - 1) / 2
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = (a + b) / 2
    return x, f(x)


def find_tstar(cfg: ModelConfig, a: np.ndarray,
               tau_window: tuple[float, float] = (0.0, 2 * np.pi),
               grid: int = 512) -> TStarResult:
    """Locate the interaction time that minimizes the average cost.

    Coarse scan over an open-left grid (the lower edge carries no
    information), then golden-section refinement around the best bracket.
    A minimum pinned to the window edge is flagged, not failed: very large
    mechanical displacements push the optimum toward tau = 0.
    """
    if grid < 16:
        raise ValueError("grid must be >= 16")
    lo, hi = tau_window
    if not (0 <= lo < hi):
        raise ValueError(f"bad window {tau_window}")
    prior = GaussianPrior(cfg.g0, cfg.sigma)

    def cost(tau):
        F = f_coeffs(cfg.mech, tau, len(a))
        G = build_gammas(a, F, prior)
        M = solve_optimal(G)
        return min_cost(G, M)

    taus = lo + (hi - lo) * np.arange(1, grid + 1) / grid
    costs = np.array([cost(t) for t in taus])
    i = int(np.argmin(costs))
    blo = taus[i - 1] if i > 0 else lo
    bhi = taus[i + 1] if i < grid - 1 else hi
    tau_star, _ = _golden_section(cost, blo, bhi)

    step = (hi - lo) / grid
    on_edge = tau_star - lo < step or hi - tau_star < step / 2
    if on_edge:
        warnings.warn(
            f"cost minimum at tau = {tau_star:.6g} sits at the edge of the "
            f"search window {tau_window}", WindowEdgeWarning)
    sol = solve_at_time(cfg.mech, a, prior, tau_star)
    return TStarResult(tau_star, sol.cbar_min, sol, on_edge)
