"""
Unit tests for lattice geometry and effective forces

Tests:
- Built-in geometries and couplings
- Analytic Taylor data against finite differences
- Effective forces, bond energies and remainders
"""

import math

import numpy as np
import pytest

from config import ConfigurationError, DomainError
from models import ScalarPotential
from services import LatticeService


@pytest.mark.unit
class TestGeometry:
    """Test built-in lattices and couplings"""

    @pytest.mark.parametrize('name, size', [('square', 4), ('diamond', 3), ('triangle', 3)])
    def test_builtin_sizes(self, name, size):
        assert LatticeService.builtin_lattice(name).size == size

    def test_unknown_lattice(self):
        with pytest.raises(ConfigurationError):
            LatticeService.builtin_lattice('hexagon')

    def test_non_positive_spacing(self):
        with pytest.raises(ConfigurationError):
            LatticeService.builtin_lattice('square', r_star=0.0)

    def test_square_couplings_along_axis(self, square):
        """Test k = (1, 0, 1, 1) at alpha = 0, exactly"""
        direction = LatticeService.couplings(square, 0.0)
        assert list(direction.k) == [1.0, 0.0, 1.0, 1.0]

    def test_square_integer_steps(self, square, diamond):
        """Test only the square lattice has integer bond steps throughout"""
        assert [square.integer_step(m) for m in range(4)] == [(1, 0), (0, 1), (1, 1), (1, -1)]
        assert diamond.integer_step(1) is None

    def test_diagonal_potential(self):
        """Test the square diagonals may carry their own potential"""
        stiff = ScalarPotential.harmonic(2.0)
        spec = LatticeService.builtin_lattice('square', diagonal_potential=stiff)
        assert spec.bonds[0].potential is not stiff
        assert spec.bonds[2].potential is stiff


@pytest.mark.unit
class TestTaylorData:
    """Test Taylor coefficients of the effective forces"""

    @pytest.mark.parametrize('name', ['square', 'diamond', 'triangle'])
    def test_analytic_matches_differences(self, name):
        spec = LatticeService.builtin_lattice(name)
        alpha, beta = LatticeService.analytic_taylor(spec)
        alpha_fd, beta_fd = LatticeService.finite_difference_taylor(spec)
        np.testing.assert_allclose(alpha, alpha_fd, atol=1e-7)
        np.testing.assert_allclose(beta, beta_fd, atol=1e-6)

    def test_assumption1_builtin(self, square_taylor):
        """Test pair potentials give the symmetric Taylor structure"""
        report = LatticeService.check_assumption1(square_taylor)
        assert report.passed
        assert report.max_deviation <= 1e-12

    def test_harmonic_axis_bond(self, square_taylor, square):
        """Test alpha = diag(V'', V'/r) for the horizontal bond"""
        r0 = square.r_star
        np.testing.assert_allclose(square_taylor.alpha[0], [[1.0, 0.0], [0.0, (r0 - 1.0) / r0]],
                                   atol=1e-15)

    def test_remainder_estimates(self, square):
        taylor = LatticeService.extract_taylor(square, remainder_radius=0.1)
        assert taylor.gamma.shape == (4, 2)
        assert np.all(np.isfinite(taylor.gamma))

    def test_taylor_data_serves_every_direction(self, square, square_taylor):
        """Test the Taylor data is built from the lattice alone, tolerance second"""
        taylor = LatticeService.extract_taylor(square, 1e-6, None)
        assert taylor.gamma is None
        np.testing.assert_array_equal(taylor.alpha, square_taylor.alpha)
        np.testing.assert_array_equal(taylor.beta, square_taylor.beta)

    def test_remainder_radius_positive(self, square_taylor):
        with pytest.raises(ConfigurationError):
            LatticeService.remainder_bound_check(square_taylor, 0.0)


@pytest.mark.unit
class TestForces:
    """Test effective forces and bond energies"""

    def test_force_vanishes_at_rest(self, square):
        for m in range(square.size):
            np.testing.assert_array_equal(LatticeService.effective_gradient(square, m, np.zeros(2)),
                                          np.zeros(2))

    def test_remainder_is_cubic(self, square_taylor):
        """Test halving the argument divides the remainder by about eight"""
        x = np.array([0.01, 0.02])
        for m in range(square_taylor.size):
            big = np.hypot(*square_taylor.remainder(m, x[0], x[1]))
            small = np.hypot(*square_taylor.remainder(m, x[0] / 2, x[1] / 2))
            assert 7.0 < big / small < 9.0

    def test_energy_gradient_is_force(self, square):
        """Test central differences of the bond energy reproduce the force"""
        x = np.array([0.01, -0.02])
        h = 1e-6
        for m in range(square.size):
            grad = [
                (LatticeService.bond_energy(square, m, x + h * e)
                 - LatticeService.bond_energy(square, m, x - h * e)) / (2 * h)
                for e in np.eye(2)
            ]
            np.testing.assert_allclose(grad, LatticeService.effective_gradient(square, m, x),
                                       rtol=1e-6)

    def test_energy_vanishes_to_second_order(self, square):
        energy = LatticeService.bond_energy(square, 0, np.array([1e-8, 0.0]))
        assert energy == pytest.approx(0.5e-16, rel=1e-6)

    def test_collapsed_spring(self, square):
        """Test a spring pushed to zero length raises DomainError"""
        with pytest.raises(DomainError) as info:
            LatticeService.effective_gradient(square, 0, np.array([-square.r_star, 0.0]))
        assert info.value.min_length == 0.0
        assert 'square' in info.value.message

    def test_collapsed_spring_in_a_batch(self, square):
        """Test the energy of a batch with one collapsed spring reports the shortest length"""
        x = np.array([[-square.r_star, 0.0], [0.0, 0.1]])
        with pytest.raises(DomainError) as info:
            LatticeService.bond_energy(square, 0, x)
        assert info.value.min_length == 0.0

    def test_forces_batch_shape(self, square):
        x = np.zeros((2, 5, 3))
        assert LatticeService.effective_gradient(square, 2, x).shape == (2, 5, 3)
        assert LatticeService.bond_energy(square, 2, x).shape == (5, 3)

    def test_polynomial_increment_without_cancellation(self):
        """Test V'(r + t) - V'(r) keeps full relative accuracy for tiny t"""
        potential = ScalarPotential.polynomial([1.0, 2.0, 3.0])
        t = 1e-12
        assert potential.increment(0.9, t, order=1) == pytest.approx(t * potential.derivative(0.9, 2),
                                                                     rel=1e-9)

    def test_triangle_isotropy(self, triangle):
        """Test sum k^2 alpha has angle-independent eigenvalues on the triangle lattice"""
        taylor = LatticeService.extract_taylor(triangle, remainder_radius=None)
        spectra = []
        for alpha in np.linspace(0.0, math.pi, 7):
            k = LatticeService.couplings(triangle, alpha).k
            spectra.append(np.linalg.eigvalsh(np.einsum('m,mij->ij', k ** 2, taylor.alpha)))
        np.testing.assert_allclose(spectra, np.tile(spectra[0], (7, 1)), rtol=1e-12)
