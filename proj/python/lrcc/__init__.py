"""Low-rank conditional-correlation graph learning."""

from ._core import (
    LrccError,
    __version__,
    auc,
    edge_scores,
    fit,
    horizontal_project,
    kernel_ground_truth,
    laplacian,
    logdet_k,
    objective,
    precision,
    precision_from_laplacian,
    project_to_manifold,
    pseudo_inverse,
    random_graph,
    retract,
    riemannian_gradient,
    roc,
    sample_gaussian,
    tangent_project,
    threshold_graph,
)

__all__ = [
    "LrccError",
    "__version__",
    "auc",
    "edge_scores",
    "fit",
    "horizontal_project",
    "kernel_ground_truth",
    "laplacian",
    "logdet_k",
    "objective",
    "precision",
    "precision_from_laplacian",
    "project_to_manifold",
    "pseudo_inverse",
    "random_graph",
    "retract",
    "riemannian_gradient",
    "roc",
    "sample_gaussian",
    "tangent_project",
    "threshold_graph",
]
