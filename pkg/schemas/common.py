"""
Common schemas - run bookkeeping shared by every command
"""

from typing import Any, Dict, List, Optional
from pydantic import BaseModel, Field


class FailureRecord(BaseModel):
    """A job that did not complete"""
    alpha: Optional[float] = None
    eps: Optional[float] = None
    error: str
    message: str


class RunManifest(BaseModel):
    """
    Reproducibility record written once per run directory

    Lists the inputs, package versions, tolerances, produced files and failures.
    """
    command: str
    created: str
    exit_code: int = 0
    config: Dict[str, Any]
    versions: Dict[str, str]
    tolerances: Dict[str, float]
    outputs: List[str] = Field(default_factory=list)
    failures: List[FailureRecord] = Field(default_factory=list)

    class Config:
        json_schema_extra = {
            "example": {
                "command": "solve",
                "created": "2024-01-01T00:00:00+00:00",
                "exit_code": 0,
                "config": {"lattice": {"name": "square"}},
                "versions": {"numpy": "1.26.4"},
                "tolerances": {"tol_fp": 1e-11},
                "outputs": ["solution_alpha0.392699_eps0.1.csv"],
                "failures": [],
            }
        }
