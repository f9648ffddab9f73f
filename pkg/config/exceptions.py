"""
Custom exceptions for fpu2d

Provides clear error types for the different failure scenarios of a run.
Every error carries a human-readable ``message`` and the process exit code
the command line reports for it.
"""

from typing import Optional, Sequence


class FPU2DError(Exception):
    """Base exception for all fpu2d errors"""
    exit_code = 1

    def __init__(self, message: str = "fpu2d error"):
        self.message = message
        super().__init__(self.message)


class ConfigurationError(FPU2DError):
    """Raised when a configuration value or file is invalid"""
    exit_code = 2

    def __init__(self, message: str, field: Optional[str] = None):
        self.field = field
        if field:
            message = f"{field}: {message}"
        super().__init__(message)


class UsageError(FPU2DError):
    """Raised when library functions are called with incompatible arguments"""
    exit_code = 2


class GridMismatchError(UsageError):
    """Raised when fields or multipliers live on different grids"""
    def __init__(self, message: str = "Operands are sampled on different grids"):
        super().__init__(message)


class ParityError(UsageError):
    """Raised when a field violates the parity an operation requires"""
    def __init__(self, odd_fraction: float, tolerance: float):
        self.odd_fraction = odd_fraction
        self.tolerance = tolerance
        super().__init__(
            f"Right-hand side has odd part {odd_fraction:.3e} (relative), "
            f"above the tolerance {tolerance:.1e}; only even data can be solved for"
        )


class DomainError(FPU2DError):
    """Raised when a force is evaluated outside its domain"""
    exit_code = 4

    def __init__(self, message: str = "Spring length must stay positive", min_length: Optional[float] = None):
        self.min_length = min_length
        super().__init__(message)


class AmplitudeTooLargeError(DomainError):
    """Raised when scaled amplitudes push a spring to zero length"""
    def __init__(self, eps: float, min_length: float):
        self.eps = eps
        super().__init__(
            f"Amplitude too large at eps={eps:g}: deformed spring length "
            f"reaches {min_length:.3e}",
            min_length=min_length,
        )


class ConsistencyError(FPU2DError):
    """Raised when two independent evaluation paths disagree"""
    exit_code = 4

    def __init__(self, message: str, deviation: Optional[float] = None):
        self.deviation = deviation
        super().__init__(message)


class AssumptionViolationError(FPU2DError):
    """Raised when a structural assumption of the construction fails"""
    exit_code = 3

    def __init__(self, assumption: int, message: str):
        self.assumption = assumption
        super().__init__(f"Assumption {assumption} violated: {message}")


class GenericityError(AssumptionViolationError):
    """Raised when the KdV limit is not generic (Assumption 2)"""
    def __init__(self, message: str):
        super().__init__(2, message)


class DegenerateDirectionError(GenericityError):
    """Raised when the KdV denominator vanishes for a propagation direction"""
    def __init__(self, denominator: float):
        self.denominator = denominator
        super().__init__(f"KdV denominator vanishes ({denominator:.3e})")


class InvertibilityError(AssumptionViolationError):
    """Raised when the determinant symbol loses its positive lower bound (Assumption 4)"""
    def __init__(self, min_det: float, threshold: float):
        self.min_det = min_det
        self.threshold = threshold
        super().__init__(
            4, f"min det symbol {min_det:.6e} is below the guard {threshold:.6e}"
        )


class LinearSolveError(FPU2DError):
    """Raised when the linear solve against L_eps does not reach its tolerance"""
    exit_code = 4

    def __init__(self, residual: float, iterations: int, tolerance: float):
        self.residual = residual
        self.iterations = iterations
        self.tolerance = tolerance
        super().__init__(
            f"Linear solve stalled: relative residual {residual:.3e} after "
            f"{iterations} iterations (tolerance {tolerance:.1e})"
        )


class NonConvergenceError(FPU2DError):
    """Raised when the corrector iteration exceeds its iteration budget"""
    exit_code = 4

    def __init__(self, iterations: int, history: Sequence[float], eps: Optional[float] = None):
        self.iterations = iterations
        self.history = list(history)
        self.eps = eps
        last = self.history[-1] if self.history else float("nan")
        where = f" at eps={eps:g}" if eps is not None else ""
        super().__init__(
            f"Fixed-point iteration did not converge{where} within {iterations} "
            f"iterations (last increment {last:.3e})"
        )


class BallEscapeError(NonConvergenceError):
    """Raised when an iterate leaves the ball the iteration is confined to"""
    def __init__(self, norm: float, radius: float, iterations: int,
                 history: Sequence[float], eps: Optional[float] = None):
        self.norm = norm
        self.radius = radius
        super().__init__(iterations, history, eps)
        self.message = (
            f"Iterate left the ball: |V|={norm:.3e} > D={radius:.3e} after "
            f"{iterations} iterations; eps={eps} is probably too large"
        )
        self.args = (self.message,)


class IntegratorError(FPU2DError):
    """Raised when the lattice integrator loses energy conservation"""
    exit_code = 4

    def __init__(self, drift: float, tolerance: float):
        self.drift = drift
        self.tolerance = tolerance
        super().__init__(
            f"Relative energy drift {drift:.3e} exceeds {tolerance:.1e}; reduce dt"
        )
