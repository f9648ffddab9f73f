"""
Constructed lattice wave
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from .coefficients import MacroCoefficients
from .field import Field2
from .operators import OperatorContext


@dataclass(frozen=True, eq=False)
class WaveSolution:
    """W_eps = W0 + eps^2 V_eps travelling at c_eps = sqrt(sigma0 + eps^2)"""
    eps: float
    alpha: float
    speed: float
    corrector: Field2
    leading: Field2
    profile: Field2
    macro: MacroCoefficients
    history: List[float] = field(default_factory=list)
    diagnostics: Dict[str, float] = field(default_factory=dict)
    context: Optional[OperatorContext] = field(default=None, repr=False)

    @property
    def iterations(self) -> int:
        return len(self.history)

    @property
    def corrector_norm(self) -> float:
        return float(self.diagnostics.get("corrector_norm", np.nan))
