"""Variance-aware GNN initialization laboratory."""

from gnnlab._core import (
    BundleError,
    ConvergenceError,
    DimensionError,
    Graph,
    InitScheme,
    NormalizedAdjacency,
    build_graph,
    circular_law_check,
    general_eig,
    jacobi_eigh,
    load_node_bundle,
    normalize,
    oversmoothing_distance,
    predicted_disk_radius,
    probe_backward_variance,
    probe_forward_variance,
    sample_weight,
    sbm_generate,
    spectral_gap,
    target_std,
    top_singular_value,
    train_gcn,
)

__all__ = [
    "BundleError",
    "ConvergenceError",
    "DimensionError",
    "Graph",
    "InitScheme",
    "NormalizedAdjacency",
    "build_graph",
    "circular_law_check",
    "general_eig",
    "jacobi_eigh",
    "load_node_bundle",
    "normalize",
    "oversmoothing_distance",
    "predicted_disk_radius",
    "probe_backward_variance",
    "probe_forward_variance",
    "sample_weight",
    "sbm_generate",
    "spectral_gap",
    "target_std",
    "top_singular_value",
    "train_gcn",
]
