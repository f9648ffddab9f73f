"""
Schemas package - Pydantic models for validation and serialization

Separates the run configuration and report contracts from the numeric models.
"""

from .run_config import (
    PotentialConfig, BondConfig, LatticeConfig, GridConfig, SweepConfig, SolveConfig,
    CheckConfig, DynamicsConfig, VerifyConfig, OutputConfig, RunConfig,
)
from .reports import (
    ConditionResult, Assumption1Report, Assumption2Report, RemainderReport, AssumptionReport,
    DispersionReport, InverseBoundReport, SweepRow, SolveSummaryRow, RateRow, RateStudyReport,
    DynamicsReport,
)
from .common import FailureRecord, RunManifest

__all__ = [
    'PotentialConfig', 'BondConfig', 'LatticeConfig', 'GridConfig', 'SweepConfig', 'SolveConfig',
    'CheckConfig', 'DynamicsConfig', 'VerifyConfig', 'OutputConfig', 'RunConfig',
    'ConditionResult', 'Assumption1Report', 'Assumption2Report', 'RemainderReport',
    'AssumptionReport', 'DispersionReport', 'InverseBoundReport', 'SweepRow', 'SolveSummaryRow',
    'RateRow', 'RateStudyReport', 'DynamicsReport',
    'FailureRecord', 'RunManifest',
]
