import numpy as np
import pytest

from optomech_mmse.bound import (bound_at, bound_curve, drho_dg,
                                 hilbert_schmidt_guard,
                                 information_denominator, lower_bound,
                                 mse_direct, x_of_g)
from optomech_mmse.errors import DegenerateDerivative
from optomech_mmse.estimator import find_tstar, solve_at_time
from optomech_mmse.field_state import (Coherent, ModelConfig, Squeezed,
                                       Thermal, build_density,
                                       equal_weight_amplitudes, f_coeffs)
from optomech_mmse.moments import GaussianPrior

SIGMA = 2 ** -0.25
PRIOR = GaussianPrior(g0=1.0, sigma=SIGMA)

MECHS = [
    Coherent(),
    Coherent(alpha_abs=1.0),
    Thermal(n_th=1.0),
    Squeezed(zeta_abs=0.5, zeta_phase=np.pi / 2),
]


def model(mech):
    return ModelConfig(g0=1.0, sigma=SIGMA, tau=0.0, n_phot=2, mech=mech)


class TestDerivative:
    @pytest.mark.parametrize("mech", MECHS, ids=lambda m: type(m).__name__)
    @pytest.mark.parametrize("tau", [0.5, 1.0, np.pi])
    @pytest.mark.parametrize("g", [0.5, 1.0])
    def test_matches_central_difference(self, mech, tau, g):
        a = equal_weight_amplitudes(2)
        F = f_coeffs(mech, tau, 2)
        h = 1e-5
        fd = (build_density(a, F, g + h).rho
              - build_density(a, F, g - h).rho) / (2 * h)
        assert np.max(np.abs(drho_dg(F, a, g).drho - fd)) < 1e-8

    def test_trace_free(self):
        a = equal_weight_amplitudes(2)
        F = f_coeffs(Coherent(alpha_abs=1.0), 1.0, 2)
        assert abs(np.trace(drho_dg(F, a, 1.0).drho)) < 1e-14

    def test_hermitian(self):
        a = equal_weight_amplitudes(3)
        F = f_coeffs(Squeezed(zeta_abs=0.5), 1.0, 3)
        d = drho_dg(F, a, 1.5).drho
        assert np.max(np.abs(d - d.conj().T)) < 1e-13


class TestSensitivity:
    def test_x_matches_finite_difference_of_traces(self):
        # x(g) = d/dg [Tr(rho^2 M)] - g d/dg [Tr(rho^2)]
        a = equal_weight_amplitudes(2)
        F = f_coeffs(Coherent(), 1.0, 2)
        sol = solve_at_time(Coherent(), a, PRIOR, 1.0)
        g, h = 1.2, 1e-6

        def traces(gv):
            r = build_density(a, F, gv).rho
            return np.real(np.trace(r @ r @ sol.m_min)), np.real(np.trace(r @ r))

        x1p, x2p = traces(g + h)
        x1m, x2m = traces(g - h)
        fd = (x1p - x1m) / (2 * h) - g * (x2p - x2m) / (2 * h)
        rho = build_density(a, F, g)
        x = x_of_g(rho, drho_dg(F, a, g), sol.m_min, g)
        assert x == pytest.approx(fd, abs=1e-8)


class TestBound:
    @pytest.mark.parametrize("mech", MECHS, ids=lambda m: type(m).__name__)
    def test_inequality_on_grid_at_tstar(self, mech):
        a = equal_weight_amplitudes(2)
        star = find_tstar(model(mech), a)
        F = f_coeffs(mech, star.tau_star, 2)
        results = bound_curve(F, a, star.solution.m_min, np.linspace(0, 2, 41))
        assert results, "entire grid degenerate"
        for r in results:
            assert r.mse >= r.lower_bound - 1e-12

    def test_degenerate_at_zero_time(self):
        a = equal_weight_amplitudes(2)
        F = f_coeffs(Coherent(), 0.0, 2)
        rho = build_density(a, F, 1.0)
        d = drho_dg(F, a, 1.0)
        with pytest.raises(DegenerateDerivative):
            lower_bound(rho, d, 0.0)

    def test_undisplaced_grid_skips_only_g_zero(self):
        a = equal_weight_amplitudes(2)
        F = f_coeffs(Coherent(), 1.0, 2)
        M = solve_at_time(Coherent(), a, PRIOR, 1.0).m_min
        results = bound_curve(F, a, M, np.linspace(0, 2, 41))
        assert len(results) == 40
        assert results[0].g > 0

    def test_components_consistent(self):
        a = equal_weight_amplitudes(2)
        F = f_coeffs(Coherent(alpha_abs=1.0), 1.0, 2)
        M = solve_at_time(Coherent(alpha_abs=1.0), a, PRIOR, 1.0).m_min
        rho = build_density(a, F, 0.8)
        d = drho_dg(F, a, 0.8)
        r = bound_at(rho, d, M)
        assert r.lower_bound == pytest.approx(r.x ** 2 / (4 * r.denom))
        assert r.denom == pytest.approx(information_denominator(rho, d))
        assert r.mse == pytest.approx(mse_direct(rho, M, 0.8))

    def test_mse_nonnegative(self):
        a = equal_weight_amplitudes(2)
        F = f_coeffs(Thermal(n_th=1.0), 1.0, 2)
        M = solve_at_time(Thermal(n_th=1.0), a, PRIOR, 1.0).m_min
        for g in np.linspace(0, 2, 9):
            assert mse_direct(build_density(a, F, g), M, g) >= 0


class TestHilbertSchmidt:
    def test_norms_finite(self):
        a = equal_weight_amplitudes(2)
        F = f_coeffs(Coherent(), 1.0, 2)
        rho = build_density(a, F, 1.0)
        d = drho_dg(F, a, 1.0)
        M = solve_at_time(Coherent(), a, PRIOR, 1.0).m_min
        rep = hilbert_schmidt_guard(rho, d, M)
        assert np.isfinite(rep.norm_sqrt_rho_drho)
        assert np.isfinite(rep.norm_sqrt_rho_m)
        assert rep.norm_sqrt_rho_drho >= 0
