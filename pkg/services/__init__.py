"""
Services package - Numerical logic layer

Contains the lattice, KdV-limit, operator, solver and verification logic,
separated from command-line and file concerns.
"""

from .lattice_service import LatticeService
from .kdv_service import KdVService
from .spectral_service import SpectralService, FieldNorms
from .operator_service import OperatorService
from .solver_service import SolverService
from .verification_service import VerificationService
from .dynamics_service import DynamicsService, PeriodicBox

__all__ = [
    'LatticeService', 'KdVService', 'SpectralService', 'FieldNorms',
    'OperatorService', 'SolverService', 'VerificationService',
    'DynamicsService', 'PeriodicBox',
]
