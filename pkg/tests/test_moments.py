import numpy as np
import pytest

from optomech_mmse import oracle
from optomech_mmse.errors import BranchFailure
from optomech_mmse.field_state import (Coherent, Squeezed, Thermal,
                                       equal_weight_amplitudes, f_coeffs)
from optomech_mmse.moments import (GaussianPrior, _entry_coeffs, build_gammas,
                                   gamma_entry_coeffs)

PRIOR = GaussianPrior(g0=1.0, sigma=2 ** -0.25)

MECHS = [
    Coherent(),
    Coherent(alpha_abs=1.0),
    Thermal(n_th=1.0),
    Squeezed(zeta_abs=0.5, zeta_phase=np.pi / 2),
]


def gammas(mech, tau, n=2):
    a = equal_weight_amplitudes(n)
    F = f_coeffs(mech, tau, n)
    return a, F, build_gammas(a, F, PRIOR)


class TestPrior:
    def test_pdf_normalized(self):
        g = np.linspace(-10, 12, 20001)
        assert np.trapezoid(PRIOR.pdf(g), g) == pytest.approx(1.0, abs=1e-10)

    def test_rejects_bad_sigma(self):
        with pytest.raises(ValueError):
            GaussianPrior(g0=1.0, sigma=-1.0)


class TestTraceIdentities:
    @pytest.mark.parametrize("mech", MECHS, ids=lambda m: type(m).__name__)
    @pytest.mark.parametrize("tau", [0.0, 0.5, 1.0, np.pi])
    def test_moments_of_the_prior(self, mech, tau):
        _, _, G = gammas(mech, tau)
        assert np.trace(G.gamma0).real == pytest.approx(1.0, abs=1e-12)
        assert np.trace(G.gamma1).real == pytest.approx(PRIOR.g0, abs=1e-12)
        assert np.trace(G.gamma2).real == pytest.approx(
            PRIOR.g0 ** 2 + PRIOR.sigma ** 2, abs=1e-12)

    @pytest.mark.parametrize("mech", MECHS, ids=lambda m: type(m).__name__)
    def test_hermitian(self, mech):
        _, _, G = gammas(mech, 1.0)
        for arr in (G.gamma0, G.gamma1, G.gamma2):
            assert np.max(np.abs(arr - arr.conj().T)) < 1e-13

    def test_gamma0_positive_semidefinite(self):
        _, _, G = gammas(Coherent(), 1.0)
        assert np.linalg.eigvalsh(G.gamma0).min() > -1e-12


class TestQuadratureOracle:
    @pytest.mark.parametrize("mech", MECHS, ids=lambda m: type(m).__name__)
    @pytest.mark.parametrize("tau", [0.5, 1.0, np.pi])
    @pytest.mark.parametrize("k", [0, 1, 2])
    def test_matches_adaptive_quadrature(self, mech, tau, k):
        a, F, G = gammas(mech, tau)
        closed = (G.gamma0, G.gamma1, G.gamma2)[k]
        quad = oracle.gamma_quadrature(F, a, PRIOR, k)
        assert np.max(np.abs(closed - quad)) < 1e-8

    def test_three_levels(self):
        a, F, G = gammas(Coherent(alpha_abs=1.0), 0.8, n=3)
        for k, closed in enumerate((G.gamma0, G.gamma1, G.gamma2)):
            quad = oracle.gamma_quadrature(F, a, PRIOR, k)
            assert np.max(np.abs(closed - quad)) < 1e-8


class TestEntryCoefficients:
    def test_trivial_entry_reduces_to_prior_moments(self):
        # f0 = f1 = f2 = 0: the Gaussian integral returns the raw moments
        c = _entry_coeffs(0j, 0j, 0j, PRIOR)
        assert c.sigma_prime_sq == pytest.approx(1.0)
        assert c.gamma_nm == pytest.approx(0.0)
        assert c.A0 == pytest.approx(1.0)
        assert c.A1 == pytest.approx(PRIOR.g0)
        assert c.A2 == pytest.approx(PRIOR.g0 ** 2 + PRIOR.sigma ** 2)

    def test_branch_failure_on_divergent_integral(self):
        # 2 f2 sigma^2 + 1 <= 0 makes the Gaussian integral divergent
        bad_f2 = complex(-1.0 / PRIOR.sigma ** 2)
        with pytest.raises(BranchFailure):
            _entry_coeffs(0j, 0j, bad_f2, PRIOR)

    def test_matrix_entries_match_scalar_route(self):
        F = f_coeffs(Coherent(alpha_abs=1.0), 1.0, 2)
        c = gamma_entry_coeffs(F, PRIOR, 0, 1)
        a = equal_weight_amplitudes(2)
        G = build_gammas(a, F, PRIOR)
        w = a[0] * np.conj(a[1]) * np.exp(-c.gamma_nm)
        assert G.gamma0[0, 1] == pytest.approx(w * c.A0, abs=1e-14)
        assert G.gamma1[0, 1] == pytest.approx(w * c.A1, abs=1e-14)
        assert G.gamma2[0, 1] == pytest.approx(w * c.A2, abs=1e-14)
