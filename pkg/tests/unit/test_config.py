"""
Unit tests for run configuration and settings

Tests:
- Defaults and YAML round trip
- Angle strings and eps lists
- Rejection of malformed or unknown input
- Environment overrides
"""

import math
from pathlib import Path

import pytest

from config import ConfigurationError, get_config
from schemas import RunConfig


@pytest.mark.unit
class TestRunConfig:
    """Test the YAML run configuration"""

    def test_defaults(self):
        """Test defaults are complete and valid"""
        config = RunConfig()
        assert config.lattice.name == 'square'
        assert config.solve.eps == [0.2, 0.1, 0.05, 0.025]
        assert config.check.delta0 == 0.3
        assert config.grid.size == 4096
        assert config.verify.window == (3.2, 4.8)

    def test_yaml_round_trip(self):
        """Test dump followed by parse gives an equal object"""
        config = RunConfig.from_yaml_text(
            "lattice: {name: diamond}\n"
            "solve: {alphas: ['pi/6', 0.2], eps: [0.1, 0.05]}\n"
            "dynamics: {box: [400, 2]}\n"
        )
        assert RunConfig.from_yaml_text(config.to_yaml()) == config

    def test_angle_strings(self):
        """Test multiples of pi are accepted wherever angles are"""
        config = RunConfig.from_yaml_text(
            "solve: {alphas: ['pi/8', '-pi/4', '3*pi/8']}\n"
            "verify: {alpha: pi/6}\n"
        )
        assert config.solve.alphas == pytest.approx([math.pi / 8, -math.pi / 4, 3 * math.pi / 8])
        assert config.verify.alpha == pytest.approx(math.pi / 6)

    def test_eps_must_descend(self):
        """Test an ascending eps list is a configuration error"""
        with pytest.raises(ConfigurationError) as info:
            RunConfig.from_yaml_text("solve: {eps: [0.05, 0.1]}")
        assert 'solve.eps' in info.value.message

    def test_unknown_key(self):
        """Test unknown top-level sections are rejected"""
        with pytest.raises(ConfigurationError):
            RunConfig.from_yaml_text("solver: {eps: [0.1]}")

    def test_malformed_yaml(self):
        with pytest.raises(ConfigurationError) as info:
            RunConfig.from_yaml_text("solve: [unclosed")
        assert 'malformed YAML' in info.value.message

    def test_unknown_lattice(self):
        with pytest.raises(ConfigurationError):
            RunConfig.from_yaml_text("lattice: {name: hexagon}")

    def test_custom_lattice_needs_bonds(self):
        with pytest.raises(ConfigurationError):
            RunConfig.from_yaml_text("lattice: {name: custom}")

    def test_odd_grid_size(self):
        with pytest.raises(ConfigurationError):
            RunConfig.from_yaml_text("grid: {size: 1023}")

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError) as info:
            RunConfig.from_yaml(tmp_path / 'absent.yaml')
        assert info.value.exit_code == 2

    def test_example_file(self):
        """Test the example config shipped with the project parses"""
        config = RunConfig.from_yaml(Path(__file__).parents[2] / 'config.example.yaml')
        assert config.check.alphas[1] == pytest.approx(math.pi / 12)
        assert config.dynamics.box == (4000, 4)


@pytest.mark.unit
class TestSettings:
    """Test environment overrides"""

    def test_environment_overrides(self, monkeypatch):
        monkeypatch.setenv('FPU2D_THREADS', '3')
        monkeypatch.setenv('FPU2D_OUTPUT_DIR', 'elsewhere')
        settings = get_config()
        assert settings.THREADS == 3
        assert settings.OUTPUT_DIR == 'elsewhere'

    def test_bad_thread_count(self, monkeypatch):
        """Test a non-integer FPU2D_THREADS is a configuration error"""
        monkeypatch.setenv('FPU2D_THREADS', 'many')
        with pytest.raises(ConfigurationError) as info:
            get_config()
        assert 'FPU2D_THREADS' in info.value.message
