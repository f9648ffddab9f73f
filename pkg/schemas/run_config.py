"""
Run configuration schemas - Pydantic models for the YAML config file

Sections mirror the service layer:
- lattice: geometry, reference spacing and potentials
- sweep: alpha grid of the analyze command
- grid: periodic grid for profiles and operators
- solve: corrector iteration and continuation
- check: Assumption-4 grid, delta0, remainder radius
- verify: rate study and dynamics request
- dynamics: direct lattice simulation
- output: run directory and plots
"""

import math
from pathlib import Path
from typing import List, Literal, Optional, Tuple, Union

import yaml
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from config import ConfigurationError
from config.settings import Config as Defaults
from utils.validators import parse_angle, validate_eps_list

Angle = Union[float, str]


def _angles(values) -> List[float]:
    return [parse_angle(v) for v in values]


class PotentialConfig(BaseModel):
    """Spring potential: harmonic or FPU-type polynomial in (r - rest_length)"""
    kind: Literal["harmonic", "polynomial"] = "harmonic"
    stiffness: float = Field(1.0, gt=0, description="Harmonic stiffness V''")
    rest_length: float = Field(1.0, gt=0)
    moduli: List[float] = Field(default_factory=lambda: [1.0, 0.0, 0.0],
                                description="(c2, c3, c4) of sum c_n/n (r - l)^n")

    @field_validator("moduli")
    @classmethod
    def check_moduli(cls, v):
        if not 1 <= len(v) <= 3:
            raise ValueError("moduli takes one to three coefficients (c2, c3, c4)")
        return v


class BondConfig(BaseModel):
    """
    Custom bond family given by its neighbour vector in lattice units

    ``step`` = rho * e; the unit direction and rest multiplier are derived from it.
    """
    step: Tuple[float, float]
    potential: Optional[PotentialConfig] = None

    @field_validator("step")
    @classmethod
    def check_step(cls, v):
        if math.hypot(*v) == 0.0:
            raise ValueError("step must be non-zero")
        return v


class LatticeConfig(BaseModel):
    """Lattice selection"""
    name: Literal["square", "diamond", "triangle", "custom"] = "square"
    r_star: float = Field(Defaults.R_STAR, gt=0)
    potential: PotentialConfig = Field(default_factory=PotentialConfig)
    diagonal_potential: Optional[PotentialConfig] = None
    bonds: List[BondConfig] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_bonds(self):
        if self.name == "custom" and not self.bonds:
            raise ValueError("a custom lattice needs a non-empty bonds list")
        if self.name != "custom" and self.bonds:
            raise ValueError(f"bonds can only be given for custom lattices, not {self.name}")
        if self.diagonal_potential is not None and self.name != "square":
            raise ValueError("diagonal_potential applies to the square lattice only")
        return self


class GridConfig(BaseModel):
    """Periodic grid; half_length None means max(40/sqrt(d1), 40)"""
    half_length: Optional[float] = Field(None, gt=0)
    size: int = Field(Defaults.GRID_SIZE, ge=16)

    @field_validator("size")
    @classmethod
    def check_even(cls, v):
        if v % 2:
            raise ValueError("grid size must be even")
        return v


class SweepConfig(BaseModel):
    """Alpha grid for the analyze command; explicit ``alphas`` win over start/stop/points"""
    alphas: Optional[List[Angle]] = None
    start: Optional[Angle] = None
    stop: Optional[Angle] = None
    points: int = Field(Defaults.SWEEP_POINTS, ge=0)
    profile_angles: List[Angle] = Field(default_factory=list)

    @field_validator("alphas", "profile_angles")
    @classmethod
    def parse_list(cls, v):
        return None if v is None else _angles(v)

    @field_validator("start", "stop")
    @classmethod
    def parse_one(cls, v):
        return None if v is None else parse_angle(v)


class SolveConfig(BaseModel):
    """Corrector iteration and eps continuation"""
    alphas: List[Angle] = Field(default_factory=lambda: [math.pi / 8])
    eps: List[float] = Field(default_factory=lambda: list(Defaults.EPS_LIST))
    tol_fp: float = Field(Defaults.TOL_FP, gt=0)
    floor_tol: float = Field(Defaults.FLOOR_TOL, gt=0)
    max_iter: int = Field(Defaults.MAX_ITER, ge=1)
    relaxation: float = Field(Defaults.RELAXATION, gt=0, le=1)
    ball_radius: Optional[float] = Field(None, gt=0, description="None: 10 * |L^-1 (R + P)|")
    tol_lin: float = Field(Defaults.TOL_LIN, gt=0)
    linear_solver: Literal["dense", "gmres"] = "dense"
    warm_start: bool = True

    @field_validator("alphas")
    @classmethod
    def parse_alphas(cls, v):
        return _angles(v)

    @field_validator("eps")
    @classmethod
    def check_eps(cls, v):
        try:
            return validate_eps_list(v)
        except ConfigurationError as e:
            raise ValueError(e.message)


class CheckConfig(BaseModel):
    """Assumption checks"""
    alphas: List[Angle] = Field(default_factory=lambda: [0.0, math.pi / 12, math.pi / 6, math.pi / 4])
    delta0: float = Field(Defaults.DELTA0, gt=0)
    z_max: float = Field(Defaults.Z_MAX, gt=0)
    z_points: int = Field(Defaults.Z_POINTS, ge=2)
    z_refine_max: float = Field(Defaults.Z_REFINE_MAX, gt=0)
    z_refine_points: int = Field(Defaults.Z_REFINE_POINTS, ge=0)
    branch: Literal["upper", "lower"] = "upper"
    remainder_radius: float = Field(0.1, gt=0)
    det_eps: List[float] = Field(default_factory=lambda: [0.2, 0.1, 0.05])

    @field_validator("alphas")
    @classmethod
    def parse_alphas(cls, v):
        return _angles(v)


class DynamicsConfig(BaseModel):
    """Direct lattice simulation; alpha must be a rational direction of an integer-step lattice"""
    alpha: Angle = 0.0
    eps: float = Field(0.1, gt=0)
    box: Tuple[int, int] = Defaults.BOX
    dt: float = Field(Defaults.DT, gt=0)
    horizon: Optional[float] = Field(None, gt=0, description="None: 50 / c_eps")
    samples: int = Field(50, ge=2)
    energy_tolerance: float = Field(Defaults.ENERGY_TOLERANCE, gt=0)

    @field_validator("alpha")
    @classmethod
    def parse_alpha(cls, v):
        return parse_angle(v)

    @field_validator("box")
    @classmethod
    def check_box(cls, v):
        if v[0] < 8 or v[1] < 1:
            raise ValueError("box must be at least 8 x 1 cells")
        return v


class VerifyConfig(BaseModel):
    """Rate study (and optionally dynamics) for one direction"""
    alpha: Angle = math.pi / 8
    eps: List[float] = Field(default_factory=lambda: [0.2, 0.1, 0.05])
    dynamics: bool = False
    solutions_dir: Optional[str] = None
    window: Tuple[float, float] = Defaults.RATE_WINDOW

    @field_validator("alpha")
    @classmethod
    def parse_alpha(cls, v):
        return parse_angle(v)

    @field_validator("window")
    @classmethod
    def check_window(cls, v):
        if not 0 < v[0] < v[1]:
            raise ValueError("window must be (low, high) with 0 < low < high")
        return v

    @field_validator("eps")
    @classmethod
    def check_eps(cls, v):
        try:
            return validate_eps_list(v)
        except ConfigurationError as e:
            raise ValueError(e.message)


class OutputConfig(BaseModel):
    directory: Optional[str] = None
    plots: bool = True


class RunConfig(BaseModel):
    """
    Complete run configuration

    Parsed from YAML; ``to_yaml`` followed by ``from_yaml_text`` gives an equal object.
    """
    lattice: LatticeConfig = Field(default_factory=LatticeConfig)
    sweep: SweepConfig = Field(default_factory=SweepConfig)
    grid: GridConfig = Field(default_factory=GridConfig)
    solve: SolveConfig = Field(default_factory=SolveConfig)
    check: CheckConfig = Field(default_factory=CheckConfig)
    verify: VerifyConfig = Field(default_factory=VerifyConfig)
    dynamics: DynamicsConfig = Field(default_factory=DynamicsConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)
    threads: Optional[int] = Field(None, ge=1)

    class Config:
        extra = "forbid"
        json_schema_extra = {
            "example": {
                "lattice": {"name": "square", "r_star": 0.8047},
                "solve": {"alphas": ["pi/8"], "eps": [0.1]},
                "grid": {"size": 4096},
            }
        }

    @classmethod
    def from_yaml_text(cls, text: str) -> "RunConfig":
        """
        Parse a YAML document

        Raises:
            ConfigurationError: If the YAML is malformed or fails validation
        """
        try:
            data = yaml.safe_load(text) or {}
        except yaml.YAMLError as e:
            raise ConfigurationError(f"malformed YAML: {e}")
        if not isinstance(data, dict):
            raise ConfigurationError("top level of the config must be a mapping")
        try:
            return cls.model_validate(data)
        except ValidationError as e:
            first = e.errors()[0]
            location = ".".join(str(part) for part in first["loc"])
            raise ConfigurationError(first["msg"], field=location or None)

    @classmethod
    def from_yaml(cls, path: Union[str, Path]) -> "RunConfig":
        path = Path(path)
        if not path.is_file():
            raise ConfigurationError(f"config file not found: {path}", field="--config")
        return cls.from_yaml_text(path.read_text(encoding="utf-8"))

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.model_dump(mode="json"), sort_keys=False)
