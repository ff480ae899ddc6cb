"""Randomized minimal-norm solutions of underdetermined complex linear systems."""

from .bench import BenchRow, GeneratedInstance, generate_instance, normalized_error, run_benchmark
from .estimators import (
    ClassicalMinNormRegressor,
    RandomizedMinNormRegressor,
    SketchedLeastSquares,
    SRFTSketch,
)
from .exceptions import ConfigurationError, DimensionError, MatrixMarketError, RankDeficiencyError
from .lsq import LsqConfig, LsqSolution, dense_ls_oracle, solve_ls
from .minnorm import (
    ProblemInstance,
    SolveReport,
    SolverConfig,
    solve_classical,
    solve_oracle_svd,
    solve_randomized,
)
from .rng import DEFAULT_SEED, RandomStream
from .srft import (
    SrftOperator,
    apply,
    apply_adjoint,
    apply_h,
    apply_to_columns,
    build_srft,
    dft,
    materialize_dense,
)

__version__ = "0.1.0"

__all__ = [
    "BenchRow", "ClassicalMinNormRegressor", "ConfigurationError", "DEFAULT_SEED",
    "DimensionError", "GeneratedInstance", "LsqConfig", "LsqSolution", "MatrixMarketError",
    "ProblemInstance", "RandomStream", "RandomizedMinNormRegressor", "RankDeficiencyError",
    "SRFTSketch", "SketchedLeastSquares", "SolveReport", "SolverConfig", "SrftOperator",
    "apply", "apply_adjoint", "apply_h", "apply_to_columns", "build_srft", "dense_ls_oracle",
    "dft", "generate_instance", "materialize_dense", "normalized_error", "run_benchmark",
    "solve_classical", "solve_ls", "solve_oracle_svd", "solve_randomized",
]
