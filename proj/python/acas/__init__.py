"""Context-aware service adaptation runtime.

Thin Python surface over the C++ core: geo conversions, the condition
language, strategy-document canonicalization and the Restaurants Searching
demo world.
"""

import os

try:
    from ._acas import (
        AcasError,
        Condition,
        DemoWorld,
        canonicalize_document,
        dd_to_dms,
        dms_to_dd,
        great_circle_distance_km,
        run_scenario_files,
        __version__,
    )
except ImportError:  # in-tree builds put _acas next to the package
    from _acas import (
        AcasError,
        Condition,
        DemoWorld,
        canonicalize_document,
        dd_to_dms,
        dms_to_dd,
        great_circle_distance_km,
        run_scenario_files,
        __version__,
    )

__all__ = [
    "AcasError",
    "Condition",
    "DemoWorld",
    "canonicalize_document",
    "data_dir",
    "dd_to_dms",
    "dms_to_dd",
    "great_circle_distance_km",
    "run_scenario_files",
    "__version__",
]


def data_dir():
    """Directory holding the shipped demo fixtures (strategy document,
    restaurant dataset, scenario scripts)."""
    override = os.environ.get("ACAS_DATA_DIR")
    if override:
        return override
    packaged = os.path.join(os.path.dirname(__file__), "data")
    if os.path.isdir(packaged):
        return packaged
    raise FileNotFoundError(
        "no data directory: set ACAS_DATA_DIR or install the packaged wheel"
    )
