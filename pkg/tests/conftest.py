"""
Pytest fixtures - Shared test utilities

Provides fixtures for:
- Built-in and custom lattices with their Taylor data
- Small periodic grids and operator contexts
- A converged wave on a coarse grid
- CLI runner and YAML config files for command tests
"""

import math

import numpy as np
import pytest
import yaml
from click.testing import CliRunner

from app import create_cli
from schemas import LatticeConfig, SolveConfig
from services import KdVService, LatticeService, OperatorService, SolverService

SMALL_GRID = 256


@pytest.fixture(scope='session')
def square():
    """Square lattice with harmonic springs at the default r_star"""
    return LatticeService.builtin_lattice('square')


@pytest.fixture(scope='session')
def diamond():
    return LatticeService.builtin_lattice('diamond')


@pytest.fixture(scope='session')
def triangle():
    return LatticeService.builtin_lattice('triangle')


@pytest.fixture(scope='session')
def chain():
    """
    One horizontal bond, V = d^2/2 + d^3/3 at rest

    At alpha = 0: c1 = 1, c2 = c3 = 0, lambda = 0 and d1 = d2 = 12.
    """
    cfg = LatticeConfig.model_validate({
        'name': 'custom',
        'r_star': 1.0,
        'potential': {'kind': 'polynomial', 'moduli': [1.0, 1.0]},
        'bonds': [{'step': [1.0, 0.0]}],
    })
    return LatticeService.lattice_from_config(cfg)


@pytest.fixture(scope='session')
def square_taylor(square):
    return LatticeService.extract_taylor(square, remainder_radius=None)


def make_context(spec, alpha, eps, size=SMALL_GRID, threads=1):
    """Operator context on a small default-length grid"""
    taylor = LatticeService.extract_taylor(spec, remainder_radius=None)
    direction = LatticeService.couplings(spec, alpha)
    macro = KdVService.macro_coefficients(taylor, direction.k)
    grid = KdVService.default_grid(macro.d1, size)
    return OperatorService.build_context(taylor, direction, eps, grid, macro, threads)


@pytest.fixture(scope='session')
def square_context(square):
    """Square lattice, alpha = pi/8, eps = 0.1, N = 256"""
    return make_context(square, math.pi / 8, 0.1)


@pytest.fixture(scope='session')
def square_wave(square, square_context):
    """Converged wave for the square lattice at alpha = pi/8, eps = 0.1"""
    return SolverService.solve(square, math.pi / 8, 0.1, SolveConfig(), square_context.grid)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def runner():
    """Create CLI test runner"""
    return CliRunner()


@pytest.fixture
def cli():
    return create_cli()


@pytest.fixture
def write_config(tmp_path):
    """Write a YAML config (dict) into the test directory and return its path"""
    def write(data, name='config.yaml'):
        path = tmp_path / name
        path.write_text(yaml.safe_dump(data), encoding='utf-8')
        return str(path)
    return write


@pytest.fixture(scope='session')
def context_factory():
    """Build operator contexts on the small default-length grid"""
    return make_context
