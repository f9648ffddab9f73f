"""
Unit tests for Fourier multipliers on the periodic grid
"""

import numpy as np
import pytest

from config import ConfigurationError, ConsistencyError, GridMismatchError
from models import Field2, Multiplier, PeriodicGrid
from services import SpectralService
from services.spectral_service import sinc_half


@pytest.fixture
def grid():
    return PeriodicGrid(20.0, 128)


def mode(grid, j):
    """Frequency of the j-th Fourier mode"""
    return grid.frequencies[j]


@pytest.mark.unit
class TestGrid:
    """Test grid layout"""

    def test_reflection_is_exact(self, grid):
        np.testing.assert_array_equal(grid.nodes[grid.reflection][1:], -grid.nodes[1:])

    def test_center_node(self, grid):
        assert grid.nodes[grid.size // 2] == 0.0
        assert grid.nodes[0] == -grid.half_length

    def test_half_coordinates(self, grid):
        """Test the even-subspace coordinates cover every node once with weights"""
        assert grid.half_index.size == grid.size // 2 + 1
        assert grid.half_weights.sum() == grid.size

    @pytest.mark.parametrize('size', [3, 2, 127])
    def test_invalid_size(self, size):
        with pytest.raises(ConfigurationError):
            PeriodicGrid(1.0, size)


@pytest.mark.unit
class TestMultipliers:
    """Test symbol application"""

    def test_zero_window_is_identity(self, grid, rng):
        field = Field2(grid, rng.standard_normal((2, grid.size)))
        out = SpectralService.apply_multiplier(field, SpectralService.avg_symbol(0.0, grid))
        np.testing.assert_allclose(out.values, field.values, atol=1e-13)

    def test_window_average_of_a_mode(self, grid):
        """Test the average of sin(z xi) over a window of width eta is sinc(eta z / 2) sin(z xi)"""
        z = mode(grid, 5)
        eta = 0.7
        wave = np.sin(z * grid.nodes)
        field = Field2.from_components(grid, wave, np.cos(z * grid.nodes))
        out = SpectralService.apply_multiplier(field, SpectralService.avg_symbol(eta, grid))
        factor = float(sinc_half(eta, z))
        np.testing.assert_allclose(out.first, factor * wave, atol=1e-13)
        np.testing.assert_allclose(out.second, factor * np.cos(z * grid.nodes), atol=1e-13)

    def test_even_symbol_keeps_parity(self, grid):
        field = Field2.from_components(grid, np.cos(grid.nodes), np.exp(-grid.nodes ** 2), parity='even')
        out = SpectralService.apply_multiplier(field, SpectralService.avg_symbol(0.3, grid))
        assert out.parity == 'even'

    def test_half_symbol_path_agrees(self, grid, rng):
        """Test the real-transform path matches the full transform for even symbols"""
        values = rng.standard_normal((2, grid.size))
        symbol = SpectralService.avg_symbol(0.4, grid)
        full = SpectralService.apply_multiplier(Field2(grid, values), symbol).values
        half = SpectralService.apply_even_symbol(values, symbol.half)
        np.testing.assert_allclose(half, full, atol=1e-13)

    def test_half_samples_include_nyquist(self, grid):
        """Test the half samples run from zero to the Nyquist frequency and are a copy"""
        symbol = Multiplier.from_function(grid, lambda z: 1.0 / (1.0 + z ** 2), even=True)
        half = symbol.half
        np.testing.assert_allclose(half, 1.0 / (1.0 + grid.half_frequencies ** 2), rtol=1e-15)
        half[-1] = -1.0
        assert symbol.symbol[grid.size // 2] > 0.0

    def test_non_real_symbol(self, grid, rng):
        """Test a symbol without conjugate symmetry is rejected"""
        field = Field2(grid, rng.standard_normal((2, grid.size)))
        with pytest.raises(ConsistencyError):
            SpectralService.apply_multiplier(field, Multiplier(grid, np.full(grid.size, 1j)))

    def test_grid_mismatch(self, grid):
        other = PeriodicGrid(10.0, grid.size)
        with pytest.raises(GridMismatchError) as info:
            SpectralService.apply_multiplier(Field2.zeros(grid), SpectralService.avg_symbol(0.1, other))
        assert info.value.exit_code == 2

    def test_cutoff(self, grid):
        eps = 0.5
        symbol = SpectralService.cutoff_symbol(eps, grid).symbol
        inside = np.abs(grid.frequencies) <= 2.0 / eps
        np.testing.assert_array_equal(symbol, inside.astype(float))
        assert 0 < symbol.sum() < grid.size


@pytest.mark.unit
class TestCalculus:
    """Test spectral derivatives and antiderivatives"""

    def test_derivative_of_mode(self, grid):
        z = mode(grid, 3)
        slope = SpectralService.derivative(np.sin(z * grid.nodes), grid)
        np.testing.assert_allclose(slope, z * np.cos(z * grid.nodes), atol=1e-12)

    def test_second_derivative_of_field(self, grid):
        z = mode(grid, 2)
        field = Field2.from_components(grid, np.cos(z * grid.nodes), np.zeros(grid.size), parity='even')
        out = SpectralService.derivative(field, order=2)
        np.testing.assert_allclose(out.first, -z * z * np.cos(z * grid.nodes), atol=1e-12)
        assert out.parity == 'even'

    def test_first_derivative_flips_parity(self, grid):
        field = Field2.from_components(grid, np.cos(grid.nodes * mode(grid, 1)), np.zeros(grid.size),
                                       parity='even')
        assert SpectralService.derivative(field).parity == 'odd'

    def test_antiderivative_of_mode(self, grid):
        """Test the antiderivative of cos(z xi) is sin(z xi) / z"""
        z = mode(grid, 4)
        out = SpectralService.antiderivative(np.cos(z * grid.nodes), grid)
        np.testing.assert_allclose(out, np.sin(z * grid.nodes) / z, atol=1e-12)

    def test_antiderivative_of_constant(self, grid):
        """Test a non-zero mean gives the linear ramp through the origin"""
        out = SpectralService.antiderivative(np.ones(grid.size), grid)
        np.testing.assert_allclose(out, grid.nodes, atol=1e-12)


@pytest.mark.unit
class TestParityAndNorms:
    """Test projections, inner products and norms"""

    def test_even_project(self, grid, rng):
        values = rng.standard_normal((2, grid.size))
        even = SpectralService.even_project(Field2(grid, values))
        assert even.parity == 'even'
        np.testing.assert_array_equal(even.values, even.values[:, grid.reflection])
        np.testing.assert_allclose(even.values + SpectralService.odd_part(values), values, atol=1e-14)

    def test_projection_is_idempotent(self, grid, rng):
        values = rng.standard_normal(grid.size)
        once = SpectralService.even_project(values)
        np.testing.assert_array_equal(SpectralService.even_project(once), once)

    def test_inner_and_l2(self, grid, rng):
        values = rng.standard_normal((2, grid.size))
        norm = SpectralService.l2_norm(values, grid)
        assert SpectralService.inner(values, values, grid) == pytest.approx(norm ** 2, rel=1e-14)

    def test_norm_ordering(self, grid):
        """Test the H2 norm dominates the L2 norm"""
        z = mode(grid, 6)
        values = np.vstack([np.cos(z * grid.nodes), np.zeros(grid.size)])
        norms = SpectralService.norms(values, grid)
        assert norms.linf == pytest.approx(1.0)
        assert norms.h2 == pytest.approx(norms.l2 * np.sqrt(1 + z ** 2 + z ** 4), rel=1e-12)


@pytest.mark.unit
class TestAveragingOperator:
    """Test the window average A_eta on random and smooth fields"""

    @pytest.fixture
    def fields(self, grid, rng):
        return [Field2(grid, rng.standard_normal((2, grid.size))) for _ in range(100)]

    def test_non_expansive(self, grid, fields):
        average = SpectralService.avg_symbol(0.9, grid)
        for field in fields:
            out = SpectralService.apply_multiplier(field, average)
            assert SpectralService.l2_norm(out, grid) <= SpectralService.l2_norm(field, grid) * (1 + 1e-12)

    def test_self_adjoint(self, grid, fields):
        average = SpectralService.avg_symbol(0.6, grid)
        for u, v in zip(fields[::2], fields[1::2]):
            left = SpectralService.inner(SpectralService.apply_multiplier(u, average), v, grid)
            right = SpectralService.inner(u, SpectralService.apply_multiplier(v, average), grid)
            assert left == pytest.approx(right, rel=1e-10, abs=1e-12)

    def test_averages_commute(self, grid, fields):
        a = SpectralService.avg_symbol(0.4, grid)
        b = SpectralService.avg_symbol(1.3, grid)
        for field in fields[:10]:
            ab = SpectralService.apply_multiplier(SpectralService.apply_multiplier(field, b), a)
            ba = SpectralService.apply_multiplier(SpectralService.apply_multiplier(field, a), b)
            np.testing.assert_allclose(ab.values, ba.values, atol=1e-12)

    def test_keeps_parity(self, grid, fields):
        average = SpectralService.avg_symbol(0.5, grid)
        for field in fields[:10]:
            even = SpectralService.even_project(field)
            out = SpectralService.apply_multiplier(even, average)
            np.testing.assert_allclose(out.values, out.values[:, grid.reflection], atol=1e-12)

    def test_expansion_orders(self, grid):
        """Test A_eta f - f is eta^2/24 f'' up to O(eta^4)"""
        f = np.exp(-grid.nodes ** 2)
        second = SpectralService.derivative(f, grid, order=2)
        first_order, remainders = [], []
        for eta in (0.2, 0.1):
            averaged = SpectralService.apply_even_symbol(f, sinc_half(eta, grid.half_frequencies))
            first_order.append(SpectralService.l2_norm(averaged - f, grid))
            remainders.append(SpectralService.l2_norm(averaged - f - eta ** 2 / 24 * second, grid))
        assert 3.5 < first_order[0] / first_order[1] < 4.5
        assert 12.0 < remainders[0] / remainders[1] < 20.0
