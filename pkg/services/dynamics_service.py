"""
Dynamics service - direct lattice simulation seeded with a constructed wave

Business logic for:
- Mapping a rational propagation direction onto a periodic box of lattice cells
- Initial data q(0) = eps Q(xi), qdot(0) = -eps^2 c W(xi) from a WaveSolution
- Velocity Verlet integration of the Newton equations of the lattice
- Peak tracking, shape drift and energy bookkeeping
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy.interpolate import CubicSpline

from config import Config, ConfigurationError, IntegratorError
from models import LatticeSpec, WaveSolution
from schemas.reports import DynamicsReport
from schemas.run_config import DynamicsConfig
from services.lattice_service import LatticeService
from services.solver_service import SolverService
from utils.validators import bezout, rational_direction

logger = logging.getLogger(__name__)

# W* falls below 1e-8 of its peak beyond this many decay lengths 1/sqrt(d1)
_SUPPORT_DECAY_LENGTHS = 20.0


@dataclass(frozen=True)
class PeriodicBox:
    """
    N1 x N2 cells in coordinates n = p i + q j, m = -s i + r j

    The wave depends on n only. Indices wrap in both directions; crossing the
    n-seam adds the displacement jump carried by the wave.
    """
    shape: Tuple[int, int]
    direction: Tuple[int, int]
    steps: Tuple[Tuple[int, int], ...]
    jump: np.ndarray

    @property
    def period(self) -> float:
        """Distance along kappa between successive n-lines"""
        return math.hypot(*self.direction)

    def wraps(self, dn: int) -> np.ndarray:
        """Seam crossings of the bond n -> n + dn, shape (1, N1, 1)"""
        n1 = self.shape[0]
        return np.floor_divide(np.arange(n1) + dn, n1).astype(float)[None, :, None]

    def bond_vectors(self, q: np.ndarray, b: int) -> np.ndarray:
        """q at the far end minus q at the near end for bond family b"""
        dn, dm = self.steps[b]
        far = np.roll(q, shift=(-dn, -dm), axis=(1, 2))
        return far - q + self.jump[:, None, None] * self.wraps(dn)


class DynamicsService:
    """Service for the direct lattice cross-check of a constructed wave"""

    @staticmethod
    def periodic_box(spec: LatticeSpec, alpha: float, shape: Tuple[int, int],
                     jump: Optional[np.ndarray] = None) -> PeriodicBox:
        """
        Periodic box aligned with a rational direction

        Args:
            spec: lattice whose bond steps are integer vectors
            alpha: propagation angle with tan(alpha) rational
            shape: (N1, N2) cells along and across the direction
            jump: displacement jump across the n-seam (zero when omitted)

        Raises:
            ConfigurationError: If a bond step is not an integer vector or alpha is
                not a rational direction with small indices
        """
        steps = [spec.integer_step(m) for m in range(spec.size)]
        if any(step is None for step in steps):
            raise ConfigurationError(
                f"the {spec.name} lattice has non-integer bond steps; direct dynamics needs "
                f"integer steps", field="dynamics")
        direction = rational_direction(alpha, Config.MAX_DIRECTION_INDEX)
        if direction is None:
            raise ConfigurationError(
                f"alpha={alpha:.6f} is not commensurate with a periodic box (tan(alpha) must "
                f"be q/p with |p|, |q| <= {Config.MAX_DIRECTION_INDEX})", field="dynamics.alpha")
        p, q = direction
        r, s = bezout(p, q)
        mapped = tuple((p * di + q * dj, -s * di + r * dj) for di, dj in steps)
        jump = np.zeros(2) if jump is None else np.asarray(jump, dtype=float)
        return PeriodicBox(tuple(shape), direction, mapped, jump)

    @staticmethod
    def accelerations(spec: LatticeSpec, box: PeriodicBox, q: np.ndarray) -> np.ndarray:
        """Right-hand side of the Newton equations (unit masses), shape (2, N1, N2)"""
        acc = np.zeros_like(q)
        for b, (dn, dm) in enumerate(box.steps):
            force = LatticeService.effective_gradient(spec, b, box.bond_vectors(q, b))
            acc += force - np.roll(force, shift=(dn, dm), axis=(1, 2))
        return acc

    @staticmethod
    def energy(spec: LatticeSpec, box: PeriodicBox, q: np.ndarray, v: np.ndarray) -> float:
        """Kinetic energy plus bond energies measured from the reference state"""
        total = 0.5 * float(np.sum(v * v))
        for b in range(len(box.steps)):
            total += float(np.sum(LatticeService.bond_energy(spec, b, box.bond_vectors(q, b))))
        return total

    @staticmethod
    def initial_state(solution: WaveSolution, box: PeriodicBox, center: float):
        """
        Lattice data of the travelling wave at t = 0

        Phases outside the computational domain are clamped to its ends, where the
        profile has decayed.

        Returns:
            Tuple (q, v), each of shape (2, N1, N2)
        """
        grid = solution.profile.grid
        eps, c = solution.eps, solution.speed
        displacement = CubicSpline(grid.nodes, SolverService.displacement_profile(solution), axis=1)
        velocity = CubicSpline(grid.nodes, solution.profile.values, axis=1)
        n1, n2 = box.shape
        xi = eps * (np.arange(n1) - center) / box.period
        xi = np.clip(xi, grid.nodes[0], grid.nodes[-1])
        q = eps * displacement(xi)
        v = -eps ** 2 * c * velocity(xi)
        return (np.repeat(q[:, :, None], n2, axis=2), np.repeat(v[:, :, None], n2, axis=2))

    @staticmethod
    def track_peak(speed_profile: np.ndarray) -> float:
        """Sub-cell position of the maximum by a three-point parabola"""
        k = int(np.argmax(speed_profile))
        if k == 0 or k == speed_profile.size - 1:
            return float(k)
        left, mid, right = speed_profile[k - 1], speed_profile[k], speed_profile[k + 1]
        curvature = left - 2.0 * mid + right
        if curvature == 0.0:
            return float(k)
        return k + 0.5 * (left - right) / curvature

    @staticmethod
    def lattice_dynamics(spec: LatticeSpec, alpha: float, solution: WaveSolution,
                         config: Optional[DynamicsConfig] = None) -> DynamicsReport:
        """
        Integrate the lattice from the travelling-wave data and compare with the wave

        Args:
            spec: lattice with integer bond steps
            alpha: propagation angle of the solution
            solution: constructed wave
            config: box, time step, horizon and energy guard

        Returns:
            DynamicsReport with the measured speed, shape drift and energy drift

        Raises:
            ConfigurationError: If the direction is not commensurate, the box is too
                short for the wave, or dt violates the resolution guard
            IntegratorError: If the relative energy drift exceeds the tolerance
            DomainError: If a spring collapses during the run
        """
        config = config or DynamicsConfig()
        if abs(solution.alpha - alpha) > 1e-12:
            raise ConfigurationError(
                f"solution was built for alpha={solution.alpha:.6f}, not {alpha:.6f}",
                field="dynamics.alpha")
        eps, c = solution.eps, solution.speed
        dt = config.dt
        if not dt * c < 0.1 * spec.r_star:
            raise ConfigurationError(
                f"dt * c = {dt * c:.3e} must stay below 0.1 r_* = {0.1 * spec.r_star:.3e}",
                field="dynamics.dt")
        horizon = config.horizon or Config.HORIZON_WAVELENGTHS / c
        steps = max(1, int(round(horizon / dt)))
        horizon = steps * dt

        ends = SolverService.displacement_profile(solution)[:, [0, -1]]
        box = DynamicsService.periodic_box(spec, alpha, config.box, eps * (ends[:, 1] - ends[:, 0]))
        n1, _ = box.shape
        travel = box.period * c * horizon
        margin = eps * (0.5 * n1 - travel) / box.period
        needed = _SUPPORT_DECAY_LENGTHS / math.sqrt(solution.macro.d1)
        if margin < needed:
            raise ConfigurationError(
                f"box of {n1} cells is too short: the wave needs {needed:.1f} decay lengths "
                f"beyond its travel but only {margin:.1f} fit", field="dynamics.box")

        center = float(n1 // 2 - int(travel // 2))
        q, v = DynamicsService.initial_state(solution, box, center)
        kappa = np.array([math.cos(alpha), math.sin(alpha)])
        xi_nodes = solution.profile.grid.nodes
        profile = CubicSpline(xi_nodes, solution.profile.values, axis=1)
        logger.info("Lattice dynamics: %s alpha=%.6f eps=%g box=%dx%d dt=%g steps=%d",
                    spec.name, alpha, eps, n1, box.shape[1], dt, steps)

        sample_steps = sorted(set(np.linspace(0, steps, config.samples).round().astype(int)))
        times: List[float] = []
        positions: List[float] = []
        shape_errors: List[float] = []
        transverse = 0.0
        longitudinal = 0.0
        mismatch = 0.0
        energy0 = DynamicsService.energy(spec, box, q, v)
        energy_drift = 0.0

        acc = DynamicsService.accelerations(spec, box, q)
        step = 0
        for target in sample_steps:
            while step < target:
                v += 0.5 * dt * acc
                q += dt * v
                acc = DynamicsService.accelerations(spec, box, q)
                v += 0.5 * dt * acc
                step += 1

            t = step * dt
            section = v.mean(axis=2)
            peak = DynamicsService.track_peak(np.hypot(section[0], section[1]))
            # expected cross-section re-centred on the tracked peak
            xi = np.clip(eps * (np.arange(n1) - peak) / box.period, xi_nodes[0], xi_nodes[-1])
            expected = -eps ** 2 * c * profile(xi)
            shape_errors.append(float(np.linalg.norm(section - expected) / np.linalg.norm(expected)))
            times.append(t)
            positions.append(peak / box.period)

            along = kappa[0] * section[0] + kappa[1] * section[1]
            across = -kappa[1] * section[0] + kappa[0] * section[1]
            longitudinal = max(longitudinal, float(np.max(np.abs(along))))
            transverse = max(transverse, float(np.max(np.abs(across))))
            scale = float(np.max(np.abs(section)))
            if scale > 0:
                mismatch = max(mismatch, float(np.max(np.abs(section[0] - section[1]))) / scale)

            energy = DynamicsService.energy(spec, box, q, v)
            energy_drift = max(energy_drift, abs(energy - energy0) / abs(energy0))
            logger.debug("t=%.4f peak=%.4f shape error=%.3e energy drift=%.3e",
                         t, peak, shape_errors[-1], energy_drift)
            if energy_drift > config.energy_tolerance:
                raise IntegratorError(energy_drift, config.energy_tolerance)

        if len(times) >= 2:
            measured = float(np.polyfit(times, positions, 1)[0])
        else:
            measured = float("nan")
        report = DynamicsReport(
            alpha=float(alpha),
            eps=float(eps),
            box=list(box.shape),
            dt=float(dt),
            steps=steps,
            horizon=float(horizon),
            speed_expected=float(c),
            speed_measured=measured,
            speed_error=measured / c - 1.0,
            shape_drift=float(max(shape_errors)),
            energy_drift=float(energy_drift),
            transverse_ratio=transverse / longitudinal if longitudinal > 0 else 0.0,
            component_mismatch=mismatch,
            times=times,
            positions=positions,
            shape_errors=shape_errors,
        )
        logger.info("Lattice dynamics: speed %.6f (expected %.6f, error %.2e), shape drift %.2e, "
                    "energy drift %.2e", measured, c, report.speed_error, report.shape_drift,
                    report.energy_drift)
        return report
