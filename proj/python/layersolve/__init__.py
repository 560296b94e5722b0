"""Parameter-uniform solver for singularly perturbed turning-point problems."""

from ._layersolve import (
    ConfigError,
    Mesh,
    PivotError,
    Problem,
    SolutionGrid,
    TridiagonalSystem,
    __version__,
    assemble,
    compute_L,
    double_mesh_error,
    generalized_shishkin,
    is_m_matrix,
    order,
    problem_1,
    problem_2,
    run_experiment,
    solve,
    standard_shishkin,
    thomas_solve,
    uniform_mesh,
    validate,
)

__all__ = [
    "ConfigError",
    "Mesh",
    "PivotError",
    "Problem",
    "SolutionGrid",
    "TridiagonalSystem",
    "__version__",
    "assemble",
    "compute_L",
    "double_mesh_error",
    "generalized_shishkin",
    "is_m_matrix",
    "order",
    "problem_1",
    "problem_2",
    "run_experiment",
    "solve",
    "standard_shishkin",
    "thomas_solve",
    "uniform_mesh",
    "validate",
]
