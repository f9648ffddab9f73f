"""
Unit tests for the corrector iteration

Tests:
- A converged wave and its recorded diagnostics
- Uniqueness of the fixed point and iteration failures
- Continuation and the displacement profile
"""

import math

import numpy as np
import pytest

from config import BallEscapeError, ConfigurationError, GenericityError, NonConvergenceError
from schemas import SolveConfig
from services import SolverService, SpectralService, VerificationService


@pytest.mark.unit
class TestConvergedWave:
    """Test the wave at alpha = pi/8, eps = 0.1"""

    def test_converged(self, square_wave):
        assert 1 <= square_wave.iterations < SolveConfig().max_iter
        assert square_wave.corrector.parity == 'even'

    def test_profile_is_even(self, square_wave):
        values = square_wave.profile.values
        np.testing.assert_array_equal(values, values[:, square_wave.profile.grid.reflection])

    def test_speed(self, square_wave):
        """Test c_eps = sqrt(sigma0 + eps^2)"""
        assert square_wave.speed == pytest.approx(math.sqrt(square_wave.macro.sigma0 + 0.01), rel=1e-15)

    def test_deviation_norm(self, square_wave):
        """Test |W_eps - W0| = eps^2 |V|"""
        grid = square_wave.profile.grid
        direct = SpectralService.l2_norm(square_wave.profile - square_wave.leading, grid)
        assert square_wave.diagnostics['deviation_norm'] == pytest.approx(direct, rel=1e-10)
        assert square_wave.diagnostics['deviation_norm'] == pytest.approx(
            0.01 * square_wave.corrector_norm, rel=1e-14)

    def test_residual_improves_on_leading_term(self, square, square_wave):
        """Test the constructed wave solves the lattice equation far better than W0"""
        ctx = square_wave.context
        residual = VerificationService.wave_residual(ctx, square_wave.profile, square)
        leading = VerificationService.wave_residual(ctx, square_wave.leading, square)
        assert residual < 1e-6
        assert residual < 0.1 * leading

    def test_contraction_recorded(self, square_wave):
        contraction = square_wave.diagnostics['contraction']
        assert math.isnan(contraction) or 0.0 < contraction < 1.0


@pytest.mark.unit
class TestFixedPoint:
    """Test the fixed-point map itself"""

    def test_unique_from_two_starts(self, square_wave):
        ctx = square_wave.context
        grid = ctx.grid
        other, _, _ = SolverService.fixed_point(ctx, 1.2 * square_wave.corrector)
        difference = SpectralService.l2_norm(other - square_wave.corrector, grid)
        assert difference <= 1e-6 * max(1.0, square_wave.corrector_norm)

    def test_iteration_budget(self, square, square_context):
        with pytest.raises(NonConvergenceError) as info:
            SolverService.solve(square, math.pi / 8, 0.1, SolveConfig(max_iter=1), square_context.grid)
        assert info.value.eps == pytest.approx(0.1)
        assert info.value.exit_code == 4
        assert len(info.value.history) == 1

    def test_ball_escape(self, square, square_context):
        """Test an iterate outside a tiny ball stops the iteration"""
        with pytest.raises(BallEscapeError) as info:
            SolverService.solve(square, math.pi / 8, 0.1, SolveConfig(ball_radius=1e-6),
                                square_context.grid)
        assert info.value.radius == 1e-6
        assert info.value.eps == pytest.approx(0.1)

    def test_singular_direction(self, diamond):
        with pytest.raises(GenericityError):
            SolverService.solve(diamond, 0.0, 0.1)

    @pytest.mark.parametrize('history, expected', [
        ([1.0, 0.1, 0.01, 0.001], 0.1),
        ([1.0, 0.5, 0.25], 0.5),
    ])
    def test_contraction_estimate(self, history, expected):
        assert SolverService.contraction_estimate(history, 1e-12) == pytest.approx(expected, rel=1e-12)

    def test_contraction_needs_two_increments(self):
        assert math.isnan(SolverService.contraction_estimate([1.0], 1e-12))


@pytest.mark.unit
class TestContinuation:
    """Test eps continuation and derived profiles"""

    def test_callback_per_solution(self, square, square_context):
        seen = []
        solutions = SolverService.continuation(square, math.pi / 8, [0.1, 0.05], SolveConfig(),
                                               square_context.grid, callback=seen.append)
        assert [s.eps for s in seen] == [0.1, 0.05]
        assert seen == solutions

    def test_ascending_list_rejected(self, square):
        with pytest.raises(ConfigurationError):
            SolverService.continuation(square, math.pi / 8, [0.05, 0.1])

    def test_empty_list(self, square):
        assert SolverService.continuation(square, math.pi / 8, []) == []

    def test_displacement_profile(self, square_wave):
        """Test the displacement is odd and vanishes at the wave centre"""
        grid = square_wave.profile.grid
        q = SolverService.displacement_profile(square_wave)
        assert q.shape == (2, grid.size)
        np.testing.assert_array_equal(q[:, grid.size // 2], [0.0, 0.0])
        np.testing.assert_allclose(q[:, grid.reflection][:, 1:], -q[:, 1:], atol=1e-10)

    def test_displacement_jump(self, square_wave):
        """Test Q_eps rises by the integral of W_eps across the box and is odd about the centre"""
        grid = square_wave.profile.grid
        values = square_wave.profile.values
        q = SolverService.displacement_profile(square_wave)
        integral = grid.spacing * values.sum(axis=1)
        np.testing.assert_allclose(q[:, -1] - q[:, 0], integral, rtol=1e-6)
        np.testing.assert_allclose(q[:, -1], 0.5 * integral, rtol=1e-6)


@pytest.mark.unit
class TestSymmetricDirections:
    """Test component structure along the axis and the diagonal"""

    def test_diagonal_components_coincide(self, square, context_factory):
        grid = context_factory(square, math.pi / 4, 0.1).grid
        wave = SolverService.solve(square, math.pi / 4, 0.1, SolveConfig(), grid)
        first, second = wave.profile.first, wave.profile.second
        assert SpectralService.l2_norm(first - second, grid) <= 1e-8 * SpectralService.l2_norm(first, grid)

    def test_axis_wave_is_longitudinal(self, square, context_factory):
        grid = context_factory(square, 0.0, 0.1).grid
        wave = SolverService.solve(square, 0.0, 0.1, SolveConfig(), grid)
        first, second = wave.profile.first, wave.profile.second
        assert SpectralService.l2_norm(second, grid) <= 1e-8 * SpectralService.l2_norm(first, grid)
