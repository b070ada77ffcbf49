"""Controllability analysis for finite-dimensional bilinear quantum control systems."""

__version__ = "0.1.0"

from .analysis import (  # noqa: E402
    AnalysisReport,
    analyze,
    classify,
    orbit_equality,
    realify,
    realify_state,
    small_time_report,
    test_dmc,
    test_esc,
    test_oc,
    test_psc,
)
from .lie import LieBasis, lie_closure  # noqa: E402
from .matcore import DensityMatrix  # noqa: E402
from .models import SystemModel  # noqa: E402
