"""
Shared command plumbing - run directories, option sets and job fan-out

Every command opens a Run, writes its files through it, fans (alpha, eps) jobs
out to a thread pool and closes the Run, which writes the MANIFEST exactly once.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime
from functools import wraps
from pathlib import Path
from typing import Any, Callable, List, Optional, Sequence, Tuple, Union

import click
import numpy as np

from config import FPU2DError, get_config
from middleware import EXIT_OK
from schemas import FailureRecord, RunConfig
from services import KdVService
from utils.manifest import build_manifest, write_manifest

logger = logging.getLogger(__name__)


@dataclass
class JobOutcome:
    """Result or error of one job"""
    alpha: Optional[float]
    eps: Optional[float]
    value: Any = None
    error: Optional[FPU2DError] = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass
class Run:
    """One command invocation writing into one directory"""
    command: str
    config: RunConfig
    directory: Path
    threads: int
    outputs: List[Path] = field(default_factory=list)
    failures: List[FailureRecord] = field(default_factory=list)
    exit_code: int = EXIT_OK

    @property
    def plots(self) -> bool:
        return self.config.output.plots

    def path(self, name: str) -> Path:
        return self.directory / name

    def record(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        self.outputs.append(path)
        return path

    def fail(self, outcome: JobOutcome) -> None:
        """Remember a failed job; the first failure decides the exit code"""
        error = outcome.error
        self.failures.append(FailureRecord(alpha=outcome.alpha, eps=outcome.eps,
                                           error=type(error).__name__, message=error.message))
        if self.exit_code == EXIT_OK:
            self.exit_code = error.exit_code

    def flag(self, exit_code: int) -> None:
        if self.exit_code == EXIT_OK:
            self.exit_code = exit_code

    def close(self) -> int:
        """Write the MANIFEST and return the exit code"""
        manifest = build_manifest(self.command, self.config, self.outputs, self.failures,
                                  self.exit_code, root=self.directory)
        write_manifest(self.directory, manifest)
        logger.info("%s finished with exit code %d; %d files in %s", self.command,
                    self.exit_code, len(self.outputs), self.directory)
        return self.exit_code


def run_options(f):
    """--config, --out and --threads, shared by every command"""
    @click.option("--config", "config_path", type=click.Path(dir_okay=False),
                  default=None, help="YAML run configuration (defaults apply when omitted).")
    @click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None,
                  help="Run directory (overrides FPU2D_OUTPUT_DIR and output.directory).")
    @click.option("--threads", type=click.IntRange(min=1), default=None,
                  help="Worker threads (overrides FPU2D_THREADS and the config).")
    @wraps(f)
    def decorated_function(*args, **kwargs):
        return f(*args, **kwargs)

    return decorated_function


def open_run(command: str, config_path: Optional[str], out_dir: Optional[str],
             threads: Optional[int]) -> Run:
    """
    Resolve configuration, run directory and worker count

    Precedence: CLI flag, then config file, then environment, then defaults.

    Raises:
        ConfigurationError: If the config file or an environment value is invalid
    """
    settings = get_config()
    config = RunConfig.from_yaml(config_path) if config_path else RunConfig()
    if out_dir:
        directory = Path(out_dir)
    elif config.output.directory:
        directory = Path(config.output.directory)
    else:
        stamp = datetime.now().strftime("%Y%m%d-%H%M%S")
        directory = Path(settings.OUTPUT_DIR) / f"{command}-{stamp}"
    directory.mkdir(parents=True, exist_ok=True)
    workers = threads or config.threads or settings.THREADS
    logger.info("%s: writing to %s with %d worker thread(s)", command, directory, workers)
    return Run(command=command, config=config, directory=directory, threads=workers)


def fan_out(run: Run, jobs: Sequence[Tuple[float, Optional[float], Callable[[], Any]]]) -> List[JobOutcome]:
    """
    Run jobs on a thread pool, in input order

    fpu2d errors are captured per job; anything else propagates.

    Args:
        run: current run (its thread count sizes the pool)
        jobs: (alpha, eps, callable) triples

    Returns:
        One JobOutcome per job
    """
    def guarded(alpha, eps, job) -> JobOutcome:
        try:
            return JobOutcome(alpha, eps, value=job())
        except FPU2DError as e:
            where = f"alpha={alpha:.6f}" + ("" if eps is None else f" eps={eps:g}")
            logger.error("Job %s failed: %s", where, e.message)
            return JobOutcome(alpha, eps, error=e)

    if run.threads <= 1 or len(jobs) <= 1:
        return [guarded(*job) for job in jobs]
    with ThreadPoolExecutor(max_workers=run.threads) as pool:
        futures = [pool.submit(guarded, *job) for job in jobs]
        return [f.result() for f in futures]


def execute(run: Run, body: Callable[[Run], None]) -> None:
    """
    Run a command body and close the run

    Errors that abort the whole command are recorded in the MANIFEST before they
    propagate to the error middleware; job failures end in SystemExit with the
    first failure's code.
    """
    try:
        body(run)
    except FPU2DError as e:
        run.fail(JobOutcome(None, None, error=e))
        run.close()
        raise
    code = run.close()
    if code != EXIT_OK:
        raise SystemExit(code)


def fft_workers(run: Run, jobs: int) -> int:
    """FFT threads per job: the whole budget for a single job, one each otherwise"""
    return run.threads if jobs <= 1 else 1


def alpha_grid(run: Run, lattice_name: str) -> np.ndarray:
    """Sweep angles: explicit list, else start/stop/points, else the lattice default"""
    sweep = run.config.sweep
    if sweep.alphas is not None:
        return np.asarray(sweep.alphas, dtype=float)
    if sweep.start is not None or sweep.stop is not None:
        default = KdVService.default_alpha_grid(lattice_name, 2)
        start = default[0] if sweep.start is None else sweep.start
        stop = default[-1] if sweep.stop is None else sweep.stop
        return np.linspace(start, stop, sweep.points)
    return KdVService.default_alpha_grid(lattice_name, sweep.points)
