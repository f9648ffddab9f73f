"""
Models package - numeric domain types of the lattice-wave construction
"""

from .potential import ScalarPotential, POTENTIAL_KINDS
from .lattice import BondFamily, LatticeSpec, DirectionData, TaylorData, LATTICE_NAMES
from .field import PeriodicGrid, Field2, Multiplier, PARITIES
from .coefficients import MacroCoefficients, KdVProfile
from .operators import SymbolMatrix2, OperatorContext
from .wave import WaveSolution
from .mixins import GridBoundMixin

__all__ = [
    'ScalarPotential', 'POTENTIAL_KINDS',
    'BondFamily', 'LatticeSpec', 'DirectionData', 'TaylorData', 'LATTICE_NAMES',
    'PeriodicGrid', 'Field2', 'Multiplier', 'PARITIES',
    'MacroCoefficients', 'KdVProfile',
    'SymbolMatrix2', 'OperatorContext',
    'WaveSolution',
    'GridBoundMixin',
]
