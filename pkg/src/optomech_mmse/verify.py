"""Cross-validation suite run by the `verify` subcommand.

Every closed form in the package has an independent counterpart here:
field matrices against joint evolution plus partial trace, moment operators
against adaptive quadrature, the operator equation against its integral
form, derivatives against finite differences.  Each check returns a
pass/fail verdict with the measured residual; informational entries (the
series-route residual, the Hilbert-Schmidt norms) carry no verdict.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import bound as bnd
from . import estimator as est
from . import oracle
from .config import RunConfig
from .field_state import (Coherent, Squeezed, Thermal, build_density,
                          f_coeffs, f_coeffs_coherent, f_coeffs_squeezed,
                          f_coeffs_squeezed_series, f_coeffs_thermal)
from .moments import GaussianPrior, build_gammas

TAU_PROBES = (0.5, 1.0, np.pi)
G_PROBES = (0.5, 1.0, 2.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool | None   # None = informational
    detail: str


def _result(name, residual, tol):
    return CheckResult(name, residual < tol,
                       f"residual {residual:.3e} (tol {tol:.1e})")


def check_state_oracle(cfg: RunConfig) -> CheckResult:
    mech = cfg.model.mech
    a = cfg.amplitudes
    tol = 1e-6 if isinstance(mech, Thermal) else 1e-8
    worst = 0.0
    for tau in TAU_PROBES:
        F = f_coeffs(mech, tau, len(a))
        for g in G_PROBES:
            analytic = build_density(a, F, g).rho
            brute = oracle.oracle_density(mech, a, g, tau).rho
            worst = max(worst, float(np.max(np.abs(analytic - brute))))
    return _result("state-oracle-equivalence", worst, tol)


def check_density_invariants(cfg: RunConfig) -> CheckResult:
    mech = cfg.model.mech
    a = cfg.amplitudes
    worst = 0.0
    for tau in (0.0, *TAU_PROBES):
        F = f_coeffs(mech, tau, len(a))
        for g in G_PROBES:
            rho = build_density(a, F, g).rho
            worst = max(worst, float(np.max(np.abs(rho - rho.conj().T))))
            worst = max(worst, abs(np.trace(rho).real - 1.0))
            worst = max(worst, max(0.0, -float(np.linalg.eigvalsh(rho).min())))
            purity = float(np.real(np.trace(rho @ rho)))
            worst = max(worst, max(0.0, purity - 1.0))
            if tau == 0.0 and not isinstance(mech, Thermal):
                worst = max(worst, abs(purity - 1.0))
    return _result("density-invariants", worst, 1e-10)


def check_diagonal_exponent(cfg: RunConfig) -> CheckResult:
    mech = cfg.model.mech
    N = cfg.model.n_phot
    worst = 0.0
    for tau in TAU_PROBES:
        F = f_coeffs(mech, tau, N)
        for g in G_PROBES:
            worst = max(worst, float(np.max(np.abs(np.diag(F.exponent(g))))))
    return _result("diagonal-exponent", worst, 1e-12)


def check_reductions(cfg: RunConfig) -> CheckResult:
    N = cfg.model.n_phot
    worst_th = 0.0
    worst_sq = 0.0
    for tau in TAU_PROBES:
        Fc0 = f_coeffs_coherent(Coherent(), tau, N)
        Ft = f_coeffs_thermal(Thermal(n_th=0.0), tau, N)
        for f_a, f_b in zip((Fc0.f0, Fc0.f1, Fc0.f2), (Ft.f0, Ft.f1, Ft.f2)):
            worst_th = max(worst_th, float(np.max(np.abs(f_a - f_b))))
        for alpha_abs, alpha_phase in ((0.0, 0.0), (1.0, 0.4)):
            Fc = f_coeffs_coherent(Coherent(alpha_abs, alpha_phase), tau, N)
            Fs = f_coeffs_squeezed(
                Squeezed(alpha_abs, alpha_phase, 0.0, 0.0), tau, N)
            for f_a, f_b in zip((Fc.f0, Fc.f1, Fc.f2), (Fs.f0, Fs.f1, Fs.f2)):
                worst_sq = max(worst_sq, float(np.max(np.abs(f_a - f_b))))
    ok = worst_th < 1e-14 and worst_sq < 1e-12
    return CheckResult("family-reductions", ok,
                       f"thermal@0 {worst_th:.3e} (tol 1e-14), "
                       f"squeezed@0 {worst_sq:.3e} (tol 1e-12)")


def check_gamma_quadrature(cfg: RunConfig) -> CheckResult:
    mech = cfg.model.mech
    a = cfg.amplitudes
    prior = GaussianPrior(cfg.model.g0, cfg.model.sigma)
    worst = 0.0
    for tau in (0.5, 1.0):
        F = f_coeffs(mech, tau, len(a))
        G = build_gammas(a, F, prior)
        for k, closed in enumerate((G.gamma0, G.gamma1, G.gamma2)):
            quad = oracle.gamma_quadrature(F, a, prior, k)
            worst = max(worst, float(np.max(np.abs(closed - quad))))
        worst = max(worst, abs(np.trace(G.gamma0).real - 1.0))
        worst = max(worst, abs(np.trace(G.gamma1).real - prior.g0))
        worst = max(worst, abs(np.trace(G.gamma2).real
                               - (prior.g0 ** 2 + prior.sigma ** 2)))
    return _result("moment-operators-vs-quadrature", worst, 1e-8)


def check_lyapunov(cfg: RunConfig) -> CheckResult:
    mech = cfg.model.mech
    a = cfg.amplitudes
    prior = GaussianPrior(cfg.model.g0, cfg.model.sigma)
    worst_res = 0.0
    worst_int = 0.0
    for tau in (0.5, 1.0):
        F = f_coeffs(mech, tau, len(a))
        G = build_gammas(a, F, prior)
        M = est.solve_optimal(G)
        residual = G.gamma0 @ M + M @ G.gamma0 - 2 * G.gamma1
        worst_res = max(worst_res, float(np.max(np.abs(residual))))
        M_int = oracle.mmse_integral_quadrature(G)
        worst_int = max(worst_int, float(np.max(np.abs(M - M_int))))
    ok = worst_res < 1e-10 and worst_int < 1e-6
    return CheckResult("operator-equation", ok,
                       f"residual {worst_res:.3e} (tol 1e-10), "
                       f"integral route {worst_int:.3e} (tol 1e-6)")


def check_derivative(cfg: RunConfig) -> CheckResult:
    mech = cfg.model.mech
    a = cfg.amplitudes
    h = 1e-5
    worst_fd = 0.0
    worst_comm = 0.0
    for tau in TAU_PROBES:
        F = f_coeffs(mech, tau, len(a))
        for g in (0.5, 1.0):
            d = bnd.drho_dg(F, a, g)
            fd = (build_density(a, F, g + h).rho
                  - build_density(a, F, g - h).rho) / (2 * h)
            worst_fd = max(worst_fd, float(np.max(np.abs(d.drho - fd))))
            if isinstance(mech, Coherent):
                worst_comm = max(worst_comm,
                                 commutator_form_residual(mech, a, tau, g))
    ok = worst_fd < 1e-8 and worst_comm < 1e-10
    return CheckResult("derivative", ok,
                       f"finite difference {worst_fd:.3e} (tol 1e-8), "
                       f"commutator form {worst_comm:.3e} (tol 1e-10)")


def commutator_form_residual(mech: Coherent, a: np.ndarray,
                             tau: float, g: float) -> float:
    """Max-entry gap between the entrywise derivative and the commutator form
    built from number operators (coherent states)."""
    F = f_coeffs_coherent(mech, tau, len(a))
    rho = build_density(a, F, g).rho
    d = bnd.drho_dg(F, a, g).drho
    num = np.diag(np.arange(len(a), dtype=float))
    num2 = num @ num
    da1 = 2 * g * (1 - np.cos(tau))
    da2 = 2j * g * (tau - np.sin(tau))
    da3 = -(np.conj(mech.alpha) * (1 - np.exp(1j * tau))
            - mech.alpha * (1 - np.exp(-1j * tau)))
    comm = lambda A, B: A @ B - B @ A
    d_comm = -da1 * comm(num, comm(num, rho)) + da2 * comm(num2, rho) \
        - da3 * comm(num, rho)
    return float(np.max(np.abs(d - d_comm)))


def check_bound_inequality(cfg: RunConfig) -> CheckResult:
    a = cfg.amplitudes
    star = est.find_tstar(cfg.model, a, cfg.window, cfg.tstar_grid)
    F = f_coeffs(cfg.model.mech, star.tau_star, len(a))
    results = bnd.bound_curve(F, a, star.solution.m_min, cfg.g_points())
    margin = min((r.mse - r.lower_bound for r in results), default=np.inf)
    return CheckResult("bound-inequality", margin > -1e-12,
                       f"min(MSE - bound) = {margin:.3e} over "
                       f"{len(results)} grid points at tau* = {star.tau_star:.6g}")


def check_block_closed_form(cfg: RunConfig) -> CheckResult:
    mech = cfg.model.mech if isinstance(cfg.model.mech, Coherent) \
        else Coherent(alpha_abs=0.8, alpha_phase=0.3)
    worst = 0.0
    for n in range(cfg.model.n_phot):
        for g, tau in ((1.0, 0.7), (2.0, np.pi / 3)):
            trunc = oracle.default_truncation(mech.alpha_abs,
                                              cfg.model.n_phot, g)
            analytic = oracle.closed_form_block(mech, n, g, tau, trunc.n_mech)
            U = oracle.block_propagator(n, g, tau, trunc.n_mech)
            numeric = U @ oracle.coherent_vector(
                np.array([mech.alpha]), trunc.n_mech)[0]
            worst = max(worst, float(np.max(np.abs(analytic - numeric))))
    return _result("block-evolution-closed-form", worst, 1e-8)


def series_route_residual(cfg: RunConfig) -> CheckResult:
    """Informational: residual of the squeezed series route against the
    brute-force oracle (the closed-form route is the production path)."""
    mech = cfg.model.mech
    if not isinstance(mech, Squeezed):
        mech = Squeezed(alpha_abs=0.0, zeta_abs=0.5, zeta_phase=np.pi / 2)
    a = cfg.amplitudes
    worst = 0.0
    for tau, g in ((0.5, 1.0), (1.0, 1.0)):
        F = f_coeffs_squeezed_series(mech, tau, len(a))
        rho_series = np.outer(a, a.conj()) * np.exp(F.exponent(g))
        rho_oracle = oracle.oracle_density(mech, a, g, tau).rho
        worst = max(worst, float(np.max(np.abs(rho_series - rho_oracle))))
    return CheckResult("squeezed-series-route (informational)", None,
                       f"residual vs oracle {worst:.3e}")


def hilbert_schmidt_report(cfg: RunConfig) -> CheckResult:
    a = cfg.amplitudes
    star = est.find_tstar(cfg.model, a, cfg.window, cfg.tstar_grid)
    F = f_coeffs(cfg.model.mech, star.tau_star, len(a))
    rho = build_density(a, F, 1.0)
    d = bnd.drho_dg(F, a, 1.0)
    rep = bnd.hilbert_schmidt_guard(rho, d, star.solution.m_min)
    finite = np.isfinite(rep.norm_sqrt_rho_drho) and np.isfinite(rep.norm_sqrt_rho_m)
    return CheckResult("hilbert-schmidt-norms", bool(finite),
                       f"|rho^1/2 drho| = {rep.norm_sqrt_rho_drho:.6g}, "
                       f"|rho^1/2 M| = {rep.norm_sqrt_rho_m:.6g}")


ALL_CHECKS = (
    check_state_oracle,
    check_density_invariants,
    check_diagonal_exponent,
    check_reductions,
    check_gamma_quadrature,
    check_lyapunov,
    check_derivative,
    check_bound_inequality,
    check_block_closed_form,
    hilbert_schmidt_report,
    series_route_residual,
)


def run_checks(cfg: RunConfig) -> list[CheckResult]:
    return [check(cfg) for check in ALL_CHECKS]
