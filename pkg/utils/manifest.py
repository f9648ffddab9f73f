"""
Manifest utilities - reproducibility record of a run directory
"""

import platform
from datetime import datetime, timezone
from importlib import metadata
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Union

import yaml

from config import Config
from schemas.common import FailureRecord, RunManifest
from schemas.run_config import RunConfig

MANIFEST_NAME = "MANIFEST.yaml"

_DISTRIBUTIONS = ("numpy", "scipy", "pandas", "matplotlib", "pydantic", "click", "PyYAML",
                  "python-dotenv")


def package_versions() -> Dict[str, str]:
    versions = {"python": platform.python_version()}
    for name in _DISTRIBUTIONS:
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = "not installed"
    return versions


def tolerances(config: RunConfig) -> Dict[str, float]:
    """Every tolerance that decides pass/fail or convergence in a run"""
    solve = config.solve
    return {
        "tol_fp": solve.tol_fp,
        "floor_tol": solve.floor_tol,
        "tol_lin": solve.tol_lin,
        "fd_tolerance": Config.FD_TOLERANCE,
        "symmetry_tolerance": Config.SYMMETRY_TOLERANCE,
        "singular_tolerance": Config.SINGULAR_TOLERANCE,
        "parity_tolerance": Config.PARITY_TOLERANCE,
        "delta0": config.check.delta0,
        "energy_tolerance": config.dynamics.energy_tolerance,
        "rate_window_low": config.verify.window[0],
        "rate_window_high": config.verify.window[1],
    }


def build_manifest(command: str, config: RunConfig, outputs: Iterable[Union[str, Path]],
                   failures: Optional[List[FailureRecord]] = None, exit_code: int = 0,
                   root: Optional[Path] = None) -> RunManifest:
    """
    Collect the manifest of one command run

    Args:
        command: CLI verb
        config: resolved run configuration
        outputs: files produced (stored relative to ``root`` when given)
        failures: jobs that raised
        exit_code: process exit code the run ends with
        root: run directory
    """
    names = []
    for p in outputs:
        p = Path(p)
        try:
            names.append(str(p.relative_to(root)) if root is not None else str(p))
        except ValueError:
            names.append(str(p))
    return RunManifest(
        command=command,
        created=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        exit_code=exit_code,
        config=config.model_dump(mode="json"),
        versions=package_versions(),
        tolerances=tolerances(config),
        outputs=sorted(names),
        failures=list(failures or []),
    )


def write_manifest(directory: Union[str, Path], manifest: RunManifest) -> Path:
    path = Path(directory) / MANIFEST_NAME
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(yaml.safe_dump(manifest.model_dump(mode="json"), sort_keys=False),
                    encoding="utf-8")
    return path


def read_manifest(directory: Union[str, Path]) -> RunManifest:
    path = Path(directory) / MANIFEST_NAME
    return RunManifest.model_validate(yaml.safe_load(path.read_text(encoding="utf-8")))
