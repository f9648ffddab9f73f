"""
Logging bootstrap

One place that configures the root logger; modules only ever call
``logging.getLogger(__name__)``.
"""

import logging

LOG_FORMAT = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"


def init_logging(verbosity: int = 0) -> None:
    """
    Configure root logging for a CLI run

    Args:
        verbosity: 0 for warnings only, 1 for info, 2 or more for debug
    """
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT, force=True)
    # matplotlib stays at warnings
    logging.getLogger("matplotlib").setLevel(logging.WARNING)
