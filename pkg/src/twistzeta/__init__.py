"""Twisted zeta functions of graded cohomological models over finite fields.

Exact traces, rational reconstruction, certified spectral radii and
positivity checks, with a command-line front end (``twistzeta``).
"""

__version__ = "0.1.0"

from .config import ModelConfig, load_config  # noqa: E402
from .models import (  # noqa: E402
    AbelianProductModel,
    GradedAction,
    GradedPiece,
    TorusModel,
    abelian_graded_action,
    constant_map_action,
    torus_graded_action,
)
from .report import Report, run_pipeline, scan_iterates  # noqa: E402
from .zeta import zeta  # noqa: E402

__all__ = [
    "__version__",
    "ModelConfig",
    "load_config",
    "GradedPiece",
    "GradedAction",
    "TorusModel",
    "AbelianProductModel",
    "torus_graded_action",
    "abelian_graded_action",
    "constant_map_action",
    "zeta",
    "Report",
    "run_pipeline",
    "scan_iterates",
]
