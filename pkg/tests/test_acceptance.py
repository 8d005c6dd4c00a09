"""Acceptance suite: one test per criterion, one pass/fail line each.

Run with `pytest -v tests/test_acceptance.py`; the verbose test names are the
pass/fail lines.  Each test also prints a `criterion N: PASS/FAIL` line with
the measured margin (shown with -s or on failure).
"""

import time

import numpy as np
import pytest

from optomech_mmse import oracle
from optomech_mmse.bound import bound_curve, drho_dg
from optomech_mmse.estimator import (average_estimate, find_tstar,
                                     solve_at_time, solve_optimal)
from optomech_mmse.field_state import (Coherent, ModelConfig, Squeezed,
                                       Thermal, build_density,
                                       equal_weight_amplitudes, f_coeffs,
                                       f_coeffs_coherent, f_coeffs_squeezed,
                                       f_coeffs_thermal)
from optomech_mmse.moments import GaussianPrior, build_gammas

SIGMA = 2 ** -0.25
PRIOR = GaussianPrior(g0=1.0, sigma=SIGMA)

# the cross-validation configuration grid shared by criteria 3-6
COHERENT_CASES = [Coherent(),
                  Coherent(alpha_abs=1.0),
                  Coherent(alpha_abs=np.sqrt(2), alpha_phase=np.pi / 4)]
SQUEEZED_CASES = [Squeezed(zeta_abs=za, zeta_phase=zp)
                  for za in (0.25, 0.5) for zp in (0.0, np.pi / 2)]
THERMAL_CASES = [Thermal(n_th=0.5), Thermal(n_th=1.0)]
ALL_CASES = COHERENT_CASES + SQUEEZED_CASES + THERMAL_CASES

TAUS = (0.5, 1.0, np.pi)
GS = (0.5, 1.0, 2.0)
A2 = equal_weight_amplitudes(2)


def model(mech, n=2, tau=0.0):
    return ModelConfig(g0=1.0, sigma=SIGMA, tau=tau, n_phot=n, mech=mech)


def report(num, ok, detail):
    print(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'} -- {detail}")
    assert ok, f"criterion {num}: {detail}"


def test_criterion_01_zero_time_limit():
    t0 = time.perf_counter()
    sol = solve_at_time(Coherent(), A2, PRIOR, 0.0)
    cost_err = abs(sol.cbar_min - SIGMA ** 2)
    eig_err = float(np.max(np.abs(np.sort(sol.eigenvalues) - [0.0, PRIOR.g0])))
    elapsed = time.perf_counter() - t0
    ok = cost_err < 1e-10 and eig_err < 1e-10 and elapsed < 1.0
    report(1, ok, f"|cost - sigma^2| = {cost_err:.2e}, "
                  f"eig error = {eig_err:.2e}, {elapsed:.3f} s")


def test_criterion_02_large_displacement_limit():
    t0 = time.perf_counter()
    star = find_tstar(model(Coherent(alpha_abs=50.0)), A2, grid=4096)
    ratio = star.cbar_at_star / SIGMA ** 2
    elapsed = time.perf_counter() - t0
    ok = 0.61 <= ratio <= 0.66 and elapsed < 30.0
    report(2, ok, f"min cost / sigma^2 = {ratio:.4f} at tau = "
                  f"{star.tau_star:.4f}, {elapsed:.1f} s")


def test_criterion_03_oracle_state_equivalence():
    t0 = time.perf_counter()
    worst = {"pure": 0.0, "thermal": 0.0}
    for mech in ALL_CASES:
        kind = "thermal" if isinstance(mech, Thermal) else "pure"
        for tau in TAUS:
            F = f_coeffs(mech, tau, 2)
            for g in GS:
                diff = np.max(np.abs(build_density(A2, F, g).rho
                                     - oracle.oracle_density(mech, A2, g, tau).rho))
                worst[kind] = max(worst[kind], float(diff))
    elapsed = time.perf_counter() - t0
    ok = worst["pure"] < 1e-8 and worst["thermal"] < 1e-6 and elapsed < 120.0
    report(3, ok, f"pure max = {worst['pure']:.2e} (tol 1e-8), thermal max = "
                  f"{worst['thermal']:.2e} (tol 1e-6), {elapsed:.1f} s")


def test_criterion_04_moment_operator_equivalence():
    worst = 0.0
    for mech in ALL_CASES:
        for tau in TAUS:
            F = f_coeffs(mech, tau, 2)
            G = build_gammas(A2, F, PRIOR)
            for k, closed in enumerate((G.gamma0, G.gamma1, G.gamma2)):
                quad = oracle.gamma_quadrature(F, A2, PRIOR, k)
                worst = max(worst, float(np.max(np.abs(closed - quad))))
    report(4, worst < 1e-8, f"max entry difference = {worst:.2e} (tol 1e-8)")


def test_criterion_05_operator_equation():
    worst_res = 0.0
    worst_int = 0.0
    for mech in ALL_CASES:
        for tau in TAUS:
            G = build_gammas(A2, f_coeffs(mech, tau, 2), PRIOR)
            M = solve_optimal(G)
            res = G.gamma0 @ M + M @ G.gamma0 - 2 * G.gamma1
            worst_res = max(worst_res, float(np.max(np.abs(res))))
            M_int = oracle.mmse_integral_quadrature(G)
            worst_int = max(worst_int, float(np.max(np.abs(M - M_int))))
    ok = worst_res < 1e-10 and worst_int < 1e-6
    report(5, ok, f"residual = {worst_res:.2e} (tol 1e-10), "
                  f"integral route = {worst_int:.2e} (tol 1e-6)")


def test_criterion_06_bound_inequality():
    g_grid = np.linspace(0.0, 2.0, 41)
    worst_margin = np.inf
    for mech in ALL_CASES:
        star = find_tstar(model(mech), A2)
        F = f_coeffs(mech, star.tau_star, 2)
        for r in bound_curve(F, A2, star.solution.m_min, g_grid):
            worst_margin = min(worst_margin, r.mse - r.lower_bound)
    report(6, worst_margin >= -1e-12,
           f"min(MSE - bound) = {worst_margin:.2e} (tol -1e-12)")


def test_criterion_07_even_estimator_without_displacement():
    worst = 0.0
    undisplaced = [Coherent()] + SQUEEZED_CASES + THERMAL_CASES
    g_grid = np.linspace(0.25, 2.0, 8)
    for mech in undisplaced:
        star = find_tstar(model(mech), A2)
        F = f_coeffs(mech, star.tau_star, 2)
        for g in g_grid:
            hp = average_estimate(star.solution.m_min, build_density(A2, F, +g))
            hm = average_estimate(star.solution.m_min, build_density(A2, F, -g))
            worst = max(worst, abs(hp - hm))
    report(7, worst < 1e-10, f"max |h(g) - h(-g)| = {worst:.2e} (tol 1e-10)")


def test_criterion_08_multiphoton_monotonicity():
    costs = []
    for n in (2, 3, 4):
        star = find_tstar(model(Coherent(), n=n), equal_weight_amplitudes(n))
        costs.append(star.cbar_at_star)
    margins = [costs[i] - costs[i + 1] for i in range(2)]
    ok = min(margins) > 1e-4 * SIGMA ** 2
    report(8, ok, f"costs N=2,3,4 = {costs[0]:.6f}, {costs[1]:.6f}, "
                  f"{costs[2]:.6f}; min margin = {min(margins):.2e}")


def test_criterion_09_thermal_damping():
    # peak-to-trough of the cost over the recurrence window must not grow
    # with the thermal occupation
    taus = np.linspace(5.5, 7.0, 64)
    ptt = []
    for n_th in (0.0, 0.5, 1.0, 2.0):
        mech = Thermal(n_th=n_th)
        costs = [solve_at_time(mech, A2, PRIOR, t).cbar_min for t in taus]
        ptt.append(max(costs) - min(costs))
    ok = all(ptt[i + 1] <= ptt[i] + 1e-12 for i in range(3))
    report(9, ok, "peak-to-trough over n_th = 0, 0.5, 1, 2: "
                  + ", ".join(f"{p:.6f}" for p in ptt))


def test_criterion_10_reduction_invariants():
    worst_th = 0.0
    worst_sq = 0.0
    for tau in TAUS:
        Fc0 = f_coeffs_coherent(Coherent(), tau, 2)
        Ft = f_coeffs_thermal(Thermal(n_th=0.0), tau, 2)
        for x, y in zip((Fc0.f0, Fc0.f1, Fc0.f2), (Ft.f0, Ft.f1, Ft.f2)):
            worst_th = max(worst_th, float(np.max(np.abs(x - y))))
        for alpha_abs, alpha_phase in ((0.0, 0.0), (1.0, 0.0), (1.0, 0.9)):
            Fc = f_coeffs_coherent(Coherent(alpha_abs, alpha_phase), tau, 2)
            Fs = f_coeffs_squeezed(
                Squeezed(alpha_abs, alpha_phase, 0.0, 0.0), tau, 2)
            for x, y in zip((Fc.f0, Fc.f1, Fc.f2), (Fs.f0, Fs.f1, Fs.f2)):
                worst_sq = max(worst_sq, float(np.max(np.abs(x - y))))
    ok = worst_th < 1e-14 and worst_sq < 1e-12
    report(10, ok, f"thermal(0) vs coherent(0) = {worst_th:.2e} (tol 1e-14), "
                   f"squeezed(zeta=0) vs coherent = {worst_sq:.2e} (tol 1e-12)")


def test_criterion_11_derivative_checks():
    h = 1e-5
    worst_fd = 0.0
    worst_comm = 0.0
    for mech in ALL_CASES:
        for tau in TAUS:
            F = f_coeffs(mech, tau, 2)
            for g in (0.5, 1.0):
                d = drho_dg(F, A2, g).drho
                fd = (build_density(A2, F, g + h).rho
                      - build_density(A2, F, g - h).rho) / (2 * h)
                worst_fd = max(worst_fd, float(np.max(np.abs(d - fd))))
                if isinstance(mech, Coherent):
                    from optomech_mmse.verify import commutator_form_residual
                    worst_comm = max(
                        worst_comm, commutator_form_residual(mech, A2, tau, g))
    ok = worst_fd < 1e-8 and worst_comm < 1e-10
    report(11, ok, f"finite difference = {worst_fd:.2e} (tol 1e-8), "
                   f"commutator form = {worst_comm:.2e} (tol 1e-10)")
