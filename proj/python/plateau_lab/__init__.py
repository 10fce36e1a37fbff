"""Discrete fillings of Jordan curves in normed and metric targets.

The heavy lifting lives in the compiled extension; this package re-exports
its surface.
"""

from ._core import (  # noqa: F401
    Assertion,
    BiDiscReport,
    CourantLebesgue,
    DiscMesh,
    Functional,
    HolderFit,
    JordanBoundary,
    Norm,
    PLMap,
    PlateauError,
    Problem,
    QcReport,
    RunArtifact,
    Seminorm,
    SolveResult,
    SolverConfig,
    Target,
    VariationResult,
    Volume,
    bi_disc_scenario,
    fill_injective,
    jacobian,
    list_scenarios,
    make_disc_mesh,
    map_from_json,
    minimize_area,
    minimize_energy,
    norm_constant,
    read_off,
    run_scenario,
    variation_test,
)

__all__ = [name for name in dir() if not name.startswith("_")]
