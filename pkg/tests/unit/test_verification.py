"""
Unit tests for assumption checks, residuals and rate studies
"""

import math

import numpy as np
import pytest

from models import Field2
from services import KdVService, LatticeService, VerificationService


def direction_data(spec, taylor, alpha):
    k = LatticeService.couplings(spec, alpha).k
    return k, KdVService.macro_coefficients(taylor, k)


@pytest.mark.unit
class TestAssumption4:
    """Test the determinant lower bound T(z)"""

    @pytest.mark.parametrize('alpha', [0.0, math.pi / 12, math.pi / 6, math.pi / 4])
    def test_square_directions_pass(self, square, square_taylor, alpha):
        k, macro = direction_data(square, square_taylor, alpha)
        report = VerificationService.check_assumption4(square_taylor, macro, k, alpha=alpha)
        assert report.passed, [c.name for c in report.checks if not c.passed]
        assert report.oracle_max_rel_error <= 1e-10

    def test_vanishes_at_zero(self, square, square_taylor):
        k, macro = direction_data(square, square_taylor, math.pi / 6)
        assert VerificationService.t_function(square_taylor, macro, k, np.zeros(1))[0] == 0.0

    def test_quadratic_onset(self, square, square_taylor):
        """Test T(z) / z^2 tends to tau and the two prefactors differ by 2 gap"""
        k, macro = direction_data(square, square_taylor, math.pi / 6)
        tau, tau_displayed = VerificationService.tau(square_taylor, macro, k)
        z = 1e-3
        t = VerificationService.t_function(square_taylor, macro, k, np.array([z]))[0]
        assert t / z ** 2 == pytest.approx(tau, rel=1e-4)
        assert tau == pytest.approx(2.0 * macro.gap * tau_displayed, rel=1e-14)

    def test_oracle_matches(self, square, square_taylor):
        k, macro = direction_data(square, square_taylor, math.pi / 12)
        z = np.linspace(0.1, 20.0, 200)
        exact = VerificationService.t_function(square_taylor, macro, k, z)
        oracle = VerificationService.t_oracle(square_taylor, macro, k, z)
        np.testing.assert_allclose(oracle, exact, rtol=1e-10)

    @pytest.mark.parametrize('alpha', [0.0, math.pi / 12, math.pi / 6, math.pi / 4])
    def test_oracle_holds_near_zero(self, square, square_taylor, alpha):
        """Test the oracle on 10^4 frequencies, half of them in (0, 0.05]"""
        k, macro = direction_data(square, square_taylor, alpha)
        z = np.concatenate([np.geomspace(1e-8, 0.05, 5000), np.linspace(0.0, 50.0, 5000)])
        assert z.size == 10_000
        assert VerificationService.oracle_error(square_taylor, macro, k, z) <= 1e-10

    def test_oracle_error_flags_a_wrong_oracle(self, square, square_taylor, mocker):
        k, macro = direction_data(square, square_taylor, math.pi / 12)
        z = np.linspace(0.0, 50.0, 10_001)
        exact = VerificationService.t_function(square_taylor, macro, k, z)
        mocker.patch('services.verification_service._oracle_terms',
                     return_value=(exact * (1.0 + 1e-8), np.zeros_like(z)))
        assert VerificationService.oracle_error(square_taylor, macro, k, z) == pytest.approx(1e-8, rel=1e-6)

    def test_determinant_above_gap(self, square, square_taylor):
        """Test det B_eps(z) >= 2 sigma0 - (c1 + c3) wherever Assumption 4 holds"""
        k, macro = direction_data(square, square_taylor, math.pi / 12)
        z = VerificationService.default_z_grid()
        det = VerificationService.det_curve(square_taylor, macro, k, 0.1, z)
        assert np.min(det) >= macro.gap * (1 - 1e-12)

    def test_lower_branch(self, square, square_taylor):
        _, macro = direction_data(square, square_taylor, math.pi / 6)
        lower = VerificationService.macro_for_branch(macro, 'lower')
        assert lower.sigma0 < macro.sigma0
        assert math.isnan(lower.lam)
        assert VerificationService.macro_for_branch(macro, 'upper') is macro


@pytest.mark.unit
class TestDispersion:
    """Test the eigenvalue curves of the linear symbol"""

    def test_curves(self, square, square_taylor):
        k, macro = direction_data(square, square_taylor, math.pi / 6)
        report = VerificationService.dispersion_spectrum(square_taylor, k, np.linspace(0.0, 10.0, 101))
        assert all(a <= b for a, b in zip(report.mu1, report.mu2))
        assert report.mu2[0] == pytest.approx(macro.sigma0, rel=1e-12)
        assert report.mu_at_zero[1] == pytest.approx(macro.sigma0, rel=1e-12)
        assert report.max_mu >= report.mu2[0]


@pytest.mark.unit
class TestResiduals:
    """Test the travelling-wave residual"""

    def test_zero_field(self, square_context):
        assert VerificationService.wave_residual(square_context, Field2.zeros(square_context.grid)) == 0.0

    def test_taylor_and_direct_forces_agree(self, square, square_wave):
        ctx = square_wave.context
        direct = VerificationService.wave_residual(ctx, square_wave.leading, square)
        expanded = VerificationService.wave_residual(ctx, square_wave.leading)
        assert direct == pytest.approx(expanded, rel=1e-8)


@pytest.mark.unit
class TestRates:
    """Test the eps^2 convergence-rate report"""

    def test_quadratic_rate_passes(self):
        report = VerificationService.rate_from_norms([0.2, 0.1, 0.05], [4e-3, 1e-3, 2.5e-4], 0.3, 'square')
        assert report.passed
        assert report.rows[0].ratio is None
        assert [r.ratio for r in report.rows[1:]] == pytest.approx([4.0, 4.0])

    def test_linear_rate_fails(self):
        report = VerificationService.rate_from_norms([0.2, 0.1, 0.05], [1.0, 0.5, 0.25], 0.3, 'square')
        assert not report.passed

    def test_custom_window(self):
        report = VerificationService.rate_from_norms([0.2, 0.1, 0.05], [1.0, 0.5, 0.25], 0.3, 'square',
                                                     window=(1.5, 2.5))
        assert report.passed
        assert report.window == [1.5, 2.5]

    def test_single_value_never_passes(self):
        assert not VerificationService.rate_from_norms([0.1], [1e-3], 0.3, 'square').passed

    def test_no_solutions(self):
        with pytest.raises(ValueError):
            VerificationService.rate_from_solutions([], 'square')
