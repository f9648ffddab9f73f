"""
File utilities - CSV tables, field files and text reports

Tables are written with pandas: UTF-8, '.' decimal separator and 17 significant
digits. Field files (a wave profile on the grid) start with ``# key: value``
metadata lines followed by an ordinary CSV table.
"""

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel

from config import ConfigurationError
from models import PeriodicGrid

PathLike = Union[str, Path]

FLOAT_FORMAT = "%.17g"

SOLUTION_COLUMNS = ["xi", "W1", "W2", "V1", "V2"]
PROFILE_COLUMNS = ["xi", "W1", "W2"]
DET_COLUMNS = ["eps", "z", "det", "lower_bound"]
T_COLUMNS = ["z", "T", "bound", "mu1", "mu2"]
DYNAMICS_COLUMNS = ["t", "position", "shape_error"]


def _rows(rows: Iterable[Union[BaseModel, Mapping]]) -> List[dict]:
    return [r.model_dump() if isinstance(r, BaseModel) else dict(r) for r in rows]


def write_table(path: PathLike, rows: Iterable[Union[BaseModel, Mapping]],
                columns: Sequence[str]) -> Path:
    """
    Write rows as CSV with a fixed column order

    An empty ``rows`` gives a header-only file.

    Args:
        path: destination file
        rows: report models or plain mappings
        columns: header, in order; extra keys are dropped

    Returns:
        The written path
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(_rows(rows), columns=list(columns))
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, encoding="utf-8")
    return path


def read_table(path: PathLike) -> pd.DataFrame:
    return pd.read_csv(path, comment="#")


def write_field(path: PathLike, columns: Mapping[str, np.ndarray],
                metadata: Optional[Mapping[str, object]] = None) -> Path:
    """
    Write grid samples with a ``# key: value`` metadata header

    Args:
        path: destination file
        columns: ordered mapping of column name to 1D array (equal lengths)
        metadata: scalar values written above the table

    Returns:
        The written path
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame({name: np.asarray(values, dtype=float) for name, values in columns.items()})
    with path.open("w", encoding="utf-8", newline="") as handle:
        for key, value in (metadata or {}).items():
            if isinstance(value, float):
                value = FLOAT_FORMAT % value
            handle.write(f"# {key}: {value}\n")
        frame.to_csv(handle, index=False, float_format=FLOAT_FORMAT)
    return path


def read_field(path: PathLike):
    """
    Read a field file

    Returns:
        Tuple (metadata dict of strings, DataFrame)

    Raises:
        ConfigurationError: If the file is missing or has no table
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"field file not found: {path}", field="--solutions")
    metadata: Dict[str, str] = {}
    with path.open("r", encoding="utf-8") as handle:
        for line in handle:
            if not line.startswith("#"):
                break
            key, _, value = line[1:].partition(":")
            metadata[key.strip()] = value.strip()
    frame = pd.read_csv(path, comment="#")
    if frame.empty:
        raise ConfigurationError(f"{path} holds no samples", field="--solutions")
    return metadata, frame


@dataclass(frozen=True)
class SolutionRecord:
    """A wave read back from disk: metadata plus the W and V samples"""
    path: Path
    eps: float
    alpha: float
    grid: PeriodicGrid
    profile: np.ndarray
    corrector: np.ndarray
    metadata: Dict[str, str]

    @property
    def deviation_norm(self) -> float:
        """|W_eps - W0|_2 = eps^2 |V|_2"""
        v = self.corrector
        return self.eps ** 2 * math.sqrt(self.grid.spacing * float(np.sum(v * v)))


def solution_metadata(solution, lattice: str, residual: float) -> Dict[str, object]:
    macro = solution.macro
    grid = solution.profile.grid
    return {
        "lattice": lattice,
        "alpha": float(solution.alpha),
        "eps": float(solution.eps),
        "speed": float(solution.speed),
        "sigma0": float(macro.sigma0),
        "lambda": float(macro.lam),
        "d1": float(macro.d1),
        "d2": float(macro.d2),
        "residual": float(residual),
        "half_length": float(grid.half_length),
        "size": int(grid.size),
        "iterations": solution.iterations,
    }


def write_solution(path: PathLike, solution, lattice: str, residual: float) -> Path:
    """Write a WaveSolution as (xi, W1, W2, V1, V2) with its metadata header"""
    grid = solution.profile.grid
    w = solution.profile.values
    v = solution.corrector.values
    columns = dict(zip(SOLUTION_COLUMNS, (grid.nodes, w[0], w[1], v[0], v[1])))
    return write_field(path, columns, solution_metadata(solution, lattice, residual))


def read_solution(path: PathLike) -> SolutionRecord:
    """
    Read a solution file written by ``write_solution``

    Raises:
        ConfigurationError: If columns or metadata are missing
    """
    metadata, frame = read_field(path)
    missing = [c for c in SOLUTION_COLUMNS if c not in frame.columns]
    if missing:
        raise ConfigurationError(f"{path} lacks columns {missing}", field="--solutions")
    try:
        eps = float(metadata["eps"])
        alpha = float(metadata["alpha"])
        grid = PeriodicGrid(float(metadata["half_length"]), int(metadata["size"]))
    except (KeyError, ValueError) as e:
        raise ConfigurationError(f"{path} has incomplete metadata ({e})", field="--solutions")
    if len(frame) != grid.size:
        raise ConfigurationError(f"{path} has {len(frame)} rows for a grid of {grid.size}",
                                 field="--solutions")
    return SolutionRecord(
        path=Path(path),
        eps=eps,
        alpha=alpha,
        grid=grid,
        profile=frame[["W1", "W2"]].to_numpy().T.copy(),
        corrector=frame[["V1", "V2"]].to_numpy().T.copy(),
        metadata=metadata,
    )


def read_solutions(directory: PathLike, alpha: Optional[float] = None) -> List[SolutionRecord]:
    """
    All solution files of a run directory, largest eps first

    Args:
        directory: folder holding ``solution_*.csv`` files
        alpha: keep only files for this angle

    Raises:
        ConfigurationError: If the folder does not exist or holds no solutions
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise ConfigurationError(f"not a directory: {directory}", field="--solutions")
    records = [read_solution(p) for p in sorted(directory.glob("solution_*.csv"))]
    if alpha is not None:
        records = [r for r in records if abs(r.alpha - alpha) < 1e-9]
    if not records:
        raise ConfigurationError(f"no solution files in {directory}", field="--solutions")
    return sorted(records, key=lambda r: -r.eps)


def job_stem(prefix: str, alpha: float, eps: Optional[float] = None) -> str:
    """File stem unique per (alpha, eps) job"""
    stem = f"{prefix}_alpha{alpha:.6f}"
    if eps is not None:
        stem += f"_eps{eps:g}"
    return stem


def write_text(path: PathLike, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
    return path


def format_report(title: str, report: BaseModel, skip: Sequence[str] = ()) -> str:
    """
    Human-readable rendering of a report model

    Scalars print one per line; lists of condition models print as PASS/FAIL
    lines; long numeric lists are summarised by their length.
    """
    lines = [title, "=" * len(title)]
    for name, value in report.model_dump().items():
        if name in skip:
            continue
        if isinstance(value, list) and value and isinstance(value[0], dict) and "passed" in value[0]:
            lines.append(f"{name}:")
            for item in value:
                status = "PASS" if item["passed"] else "FAIL"
                detail = f"  ({item['detail']})" if item.get("detail") else ""
                lines.append(f"  [{status}] {item['name']}: value={item['value']:.6g} "
                             f"margin={item['margin']:.6g}{detail}")
        elif isinstance(value, list) and len(value) > 8:
            lines.append(f"{name}: [{len(value)} values]")
        else:
            lines.append(f"{name}: {value}")
    return "\n".join(lines)
