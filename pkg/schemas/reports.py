"""
Report schemas - Pydantic models for check, sweep, solve and verification results

Every report serialises to flat rows for CSV output and to readable text.
"""

from typing import List, Optional
from pydantic import BaseModel, Field


class ConditionResult(BaseModel):
    """One pass/fail condition with the value it was decided on"""
    name: str
    value: float
    margin: float = Field(..., description="Signed distance to the failure threshold")
    passed: bool
    detail: str = ""


class Assumption1Report(BaseModel):
    """Symmetry of the linear and quadratic Taylor coefficients"""
    passed: bool
    tolerance: float
    max_deviation: float
    deviations: List[float] = Field(default_factory=list, description="Worst relative deviation per bond")


class Assumption2Report(BaseModel):
    """
    Genericity of the KdV limit

    Conditions: sigma0 > 0, c2 != 0, d1 > 0, d2 != 0.
    """
    alpha: Optional[float] = None
    passed: bool
    conditions: List[ConditionResult]

    def failed(self) -> List[str]:
        return [c.name for c in self.conditions if not c.passed]

    class Config:
        json_schema_extra = {
            "example": {
                "alpha": 0.0,
                "passed": False,
                "conditions": [
                    {"name": "c2 != 0", "value": 0.0, "margin": 0.0, "passed": False, "detail": ""}
                ],
            }
        }


class RemainderReport(BaseModel):
    """Sampled estimates of the cubic Lipschitz constants gamma^m_i of the remainders"""
    radius: float
    pairs: int
    gamma: List[List[float]]
    max_quotient: float


class AssumptionReport(BaseModel):
    """
    Lower bound T(z) >= delta0 * min(|z|, 2)^2 of the determinant expansion

    ``tau`` is the local quadratic coefficient of the reconstructed T at z = 0;
    ``tau_displayed`` is the same sum with the 1/24 prefactor.
    """
    alpha: Optional[float] = None
    branch: str = "upper"
    passed: bool
    delta0: float
    min_margin: float
    worst_z: float
    tau: float
    tau_displayed: float
    oracle_max_rel_error: float
    checks: List[ConditionResult] = Field(default_factory=list)
    z_grid: List[float] = Field(default_factory=list)


class DispersionReport(BaseModel):
    """Eigenvalue curves mu1(z) <= mu2(z) of the linear symbol"""
    z: List[float]
    mu1: List[float]
    mu2: List[float]
    max_mu: float
    mu_at_zero: List[float]


class InverseBoundReport(BaseModel):
    """Norms of the first column of B_eps^{-1} split at the cutoff |z| = 2/eps"""
    eps: float
    low_h2: List[float]
    high_scaled: List[float]


class SweepRow(BaseModel):
    """One row of an alpha sweep"""
    alpha: float
    c1: float
    c2: float
    c3: float
    sigma0: float
    lam: float
    d1: float
    d2: float
    p1: float
    p2: float
    assumption2: bool
    flags: str = ""


class SolveSummaryRow(BaseModel):
    """Outcome of one (alpha, eps) solve"""
    alpha: float
    eps: float
    converged: bool
    speed: float = float("nan")
    iterations: int = 0
    corrector_norm: float = float("nan")
    deviation_norm: float = float("nan")
    residual: float = float("nan")
    residual_leading: float = float("nan")
    contraction: float = float("nan")
    error: str = ""


class RateRow(BaseModel):
    """||W_eps - W0||_2 at one eps and the ratio to the next larger eps"""
    eps: float
    deviation_norm: float
    ratio: Optional[float] = None


class RateStudyReport(BaseModel):
    alpha: float
    lattice: str
    window: List[float]
    passed: bool
    rows: List[RateRow]


class DynamicsReport(BaseModel):
    """Direct lattice simulation seeded with a constructed wave"""
    alpha: float
    eps: float
    box: List[int]
    dt: float
    steps: int
    horizon: float
    speed_expected: float
    speed_measured: float
    speed_error: float = Field(..., description="speed_measured / speed_expected - 1")
    shape_drift: float
    energy_drift: float
    transverse_ratio: float
    component_mismatch: float
    times: List[float] = Field(default_factory=list)
    positions: List[float] = Field(default_factory=list)
    shape_errors: List[float] = Field(default_factory=list)
