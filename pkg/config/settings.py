"""
Configuration module for fpu2d

Holds the numeric defaults every layer refers to and the two runtime knobs
that may come from the environment (output directory and worker threads).
"""

import os
from dotenv import load_dotenv

from .exceptions import ConfigurationError

# Load environment variables
load_dotenv()

BASE_DIR = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))


class Config:
    """Base configuration"""

    # Lattice
    R_STAR = 0.8047
    FD_STEPS = (1e-3, 5e-4)
    FD_TOLERANCE = 1e-6
    SYMMETRY_TOLERANCE = 1e-10

    # KdV limit
    SINGULAR_TOLERANCE = 1e-8
    SWEEP_POINTS = 181

    # Grid
    GRID_SIZE = 4096
    DOMAIN_SCALE = 40.0

    # Wave operators
    TOL_LIN = 1e-10
    ASSEMBLY_CHUNK = 256
    PARITY_TOLERANCE = 1e-8
    REAL_TOLERANCE = 1e-12

    # Fixed point
    TOL_FP = 1e-11
    FLOOR_TOL = 1e-8
    MAX_ITER = 200
    RELAXATION = 1.0
    BALL_FACTOR = 10.0
    EPS_LIST = (0.2, 0.1, 0.05, 0.025)

    # Verification
    DELTA0 = 0.3
    Z_MAX = 50.0
    Z_POINTS = 4001
    Z_REFINE_MAX = 0.5
    Z_REFINE_POINTS = 1001
    RATE_WINDOW = (3.2, 4.8)

    # Dynamics
    DT = 0.002
    BOX = (4000, 4)
    HORIZON_WAVELENGTHS = 50.0
    ENERGY_TOLERANCE = 1e-6
    MAX_DIRECTION_INDEX = 12

    # Output
    OUTPUT_DIR = "runs"
    THREADS = 1

    def __init__(self):
        self.OUTPUT_DIR = os.environ.get("FPU2D_OUTPUT_DIR", Config.OUTPUT_DIR)
        raw_threads = os.environ.get("FPU2D_THREADS", str(Config.THREADS))
        try:
            self.THREADS = int(raw_threads)
        except ValueError:
            raise ConfigurationError(f"not an integer: {raw_threads!r}", field="FPU2D_THREADS")
        if self.THREADS < 1:
            raise ConfigurationError("must be at least 1", field="FPU2D_THREADS")


def get_config() -> Config:
    """Get configuration with environment overrides applied at call time"""
    return Config()
