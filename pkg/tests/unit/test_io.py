"""
Unit tests for output files

Tests:
- CSV tables and field files
- Solution files written and read back
- Manifests and text reports
"""

import math

import numpy as np
import pandas as pd
import pytest

from config import ConfigurationError
from schemas import FailureRecord, RunConfig, SolveSummaryRow
from utils.io import (
    job_stem,
    format_report,
    read_field,
    read_solution,
    read_solutions,
    write_field,
    write_solution,
    write_table,
)
from utils.manifest import build_manifest, read_manifest, write_manifest
from utils.plots import plot_sweep
from services import KdVService, LatticeService

SUMMARY = list(SolveSummaryRow.model_fields)


@pytest.mark.unit
class TestTables:
    """Test CSV tables"""

    def test_header_only_when_empty(self, tmp_path):
        path = write_table(tmp_path / 'empty.csv', [], SUMMARY)
        assert path.read_text(encoding='utf-8').strip() == ','.join(SUMMARY)

    def test_models_and_mappings(self, tmp_path):
        rows = [SolveSummaryRow(alpha=0.1, eps=0.2, converged=True, speed=1.5),
                {'alpha': 0.1, 'eps': 0.1, 'converged': False, 'error': 'GenericityError: c2'}]
        frame = pd.read_csv(write_table(tmp_path / 'rows.csv', rows, SUMMARY))
        assert list(frame.columns) == SUMMARY
        assert frame['converged'].tolist() == [True, False]
        assert math.isnan(frame['speed'][1])

    def test_full_precision(self, tmp_path):
        value = 1.0 / 3.0
        path = write_table(tmp_path / 'p.csv', [{'x': value}], ['x'])
        assert pd.read_csv(path)['x'][0] == value

    def test_field_metadata(self, tmp_path):
        path = write_field(tmp_path / 'f.csv', {'xi': np.arange(3.0), 'W1': np.ones(3)},
                           {'lattice': 'square', 'eps': 0.1, 'size': 3})
        metadata, frame = read_field(path)
        assert metadata == {'lattice': 'square', 'eps': '0.10000000000000001', 'size': '3'}
        assert frame['W1'].tolist() == [1.0, 1.0, 1.0]

    def test_missing_field_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            read_field(tmp_path / 'absent.csv')

    def test_job_stem(self):
        assert job_stem('solution', math.pi / 8, 0.05) == 'solution_alpha0.392699_eps0.05'
        assert job_stem('t_curve', 0.0) == 't_curve_alpha0.000000'


@pytest.mark.unit
class TestSolutionFiles:
    """Test solution files written and read back"""

    def test_round_trip(self, tmp_path, square_wave):
        path = write_solution(tmp_path / 'solution_a.csv', square_wave, 'square', 1e-9)
        record = read_solution(path)
        assert record.eps == square_wave.eps
        assert record.alpha == square_wave.alpha
        assert record.grid == square_wave.profile.grid
        np.testing.assert_array_equal(record.profile, square_wave.profile.values)
        assert record.metadata['lattice'] == 'square'
        assert record.deviation_norm == pytest.approx(square_wave.diagnostics['deviation_norm'],
                                                      rel=1e-12)

    def test_directory_order_and_filter(self, tmp_path, square_wave):
        write_solution(tmp_path / 'solution_a.csv', square_wave, 'square', 0.0)
        records = read_solutions(tmp_path, alpha=square_wave.alpha)
        assert [r.eps for r in records] == [square_wave.eps]
        with pytest.raises(ConfigurationError):
            read_solutions(tmp_path, alpha=square_wave.alpha + 0.1)

    def test_not_a_directory(self, tmp_path):
        with pytest.raises(ConfigurationError) as info:
            read_solutions(tmp_path / 'missing')
        assert '--solutions' in info.value.message

    def test_truncated_file(self, tmp_path):
        path = write_field(tmp_path / 'solution_bad.csv',
                           {c: np.zeros(4) for c in ('xi', 'W1', 'W2', 'V1', 'V2')},
                           {'eps': 0.1, 'alpha': 0.0, 'half_length': 10.0, 'size': 8})
        with pytest.raises(ConfigurationError):
            read_solution(path)


@pytest.mark.unit
class TestManifestAndReports:
    """Test run bookkeeping"""

    def test_manifest_round_trip(self, tmp_path):
        config = RunConfig()
        failure = FailureRecord(alpha=0.0, eps=None, error='GenericityError', message='c2 vanishes')
        manifest = build_manifest('solve', config, [tmp_path / 'solve_summary.csv'], [failure], 3,
                                  root=tmp_path)
        write_manifest(tmp_path, manifest)
        loaded = read_manifest(tmp_path)
        assert loaded.exit_code == 3
        assert loaded.outputs == ['solve_summary.csv']
        assert loaded.failures[0].error == 'GenericityError'
        assert loaded.tolerances['rate_window_low'] == 3.2
        assert 'numpy' in loaded.versions

    def test_format_report(self, square, square_taylor):
        macro = KdVService.macro_coefficients(square_taylor, LatticeService.couplings(square, 0.0).k)
        text = format_report('Assumption 2', KdVService.check_assumption2(macro, 0.0))
        assert text.splitlines()[:2] == ['Assumption 2', '============']
        assert '[PASS] sigma0 > 0' in text

    def test_sweep_figure(self, tmp_path, triangle):
        rows = KdVService.sweep_alpha(triangle, np.linspace(0.0, math.pi, 5))
        path = plot_sweep(tmp_path / 'sweep.svg', rows, 'triangle')
        assert path.read_text(encoding='utf-8').lstrip().startswith('<?xml')
