"""Probabilistic sparse subspace clustering with delayed association.

A union-of-subspaces clusterer that alternates a weighted sparse
self-representation solve with spectral clustering, keeps only
high-confidence assignments between iterations, and feeds the resulting
association matrix back into the solver. Includes the single-pass sparse
subspace clustering baseline, a synthetic intersecting-subspace
generator, a paired benchmark harness, and evaluation metrics.
"""

from ._version import __version__
from .association import (
    build_association,
    build_soft_assignment,
    certainty_threshold,
    compute_omega,
    compute_probabilities,
)
from .bench import METHODS, BenchmarkTable, CellResult, run_benchmark
from .driver import run, run_ssc_baseline, stopping_check
from .estimators import ProbabilisticSubspaceClustering, SparseSubspaceClustering
from .fileio import (
    ParseError,
    parse_config,
    read_labels,
    read_matrix,
    read_result,
    result_to_dict,
    write_benchmark,
    write_labels,
    write_matrix,
    write_result,
)
from .metrics import best_label_matching, confusion_matrix, misclassification, ssr_error
from .model import (
    STOP_KAPPA,
    STOP_PHI_FIXED,
    STOP_T_MAX,
    ClusteringResult,
    CoefficientState,
    DegenerateAffinity,
    DegenerateScale,
    DimensionError,
    EigenFailure,
    HyperParams,
    IterationRecord,
    NonFinite,
    SoftAssignment,
    TooFewPoints,
    ValidationError,
    ZeroColumn,
    validate_dataset,
)
from .solver import (
    ColumnProblem,
    compute_lambda0,
    objective_value,
    solve_column,
    solve_self_representation,
)
from .spectral import (
    SpectralEmbedding,
    cluster_full,
    cluster_incremental,
    kmeans,
    normalized_laplacian,
    spectral_embed,
)
from .synth import SubspaceModel, generate_subspaces, sample_points

__all__ = [
    "__version__",
    "BenchmarkTable",
    "CellResult",
    "ClusteringResult",
    "CoefficientState",
    "ColumnProblem",
    "DegenerateAffinity",
    "DegenerateScale",
    "DimensionError",
    "EigenFailure",
    "HyperParams",
    "IterationRecord",
    "METHODS",
    "NonFinite",
    "ParseError",
    "ProbabilisticSubspaceClustering",
    "STOP_KAPPA",
    "STOP_PHI_FIXED",
    "STOP_T_MAX",
    "SoftAssignment",
    "SparseSubspaceClustering",
    "SpectralEmbedding",
    "SubspaceModel",
    "TooFewPoints",
    "ValidationError",
    "ZeroColumn",
    "best_label_matching",
    "build_association",
    "build_soft_assignment",
    "certainty_threshold",
    "cluster_full",
    "cluster_incremental",
    "compute_lambda0",
    "compute_omega",
    "compute_probabilities",
    "confusion_matrix",
    "generate_subspaces",
    "kmeans",
    "misclassification",
    "normalized_laplacian",
    "objective_value",
    "parse_config",
    "read_labels",
    "read_matrix",
    "read_result",
    "result_to_dict",
    "run",
    "run_benchmark",
    "run_ssc_baseline",
    "sample_points",
    "solve_column",
    "solve_self_representation",
    "spectral_embed",
    "ssr_error",
    "stopping_check",
    "validate_dataset",
    "write_benchmark",
    "write_labels",
    "write_matrix",
    "write_result",
]
