"""Synchronisation certificates for networks of Goodwin oscillators."""

from ._core import (
    BlowUp,
    ConfigError,
    DimensionMismatch,
    Error,
    Graph,
    InadmissibleParams,
    InvalidGraph,
    Uncertified,
    case_study_json,
    certificate_gamma,
    certify,
    complete_graph,
    delta,
    delta_oracle,
    edge_stats,
    gain_bound,
    incidence,
    jacobi_eigenvalues,
    laplacian,
    path_graph,
    pd_oracle,
    prop1_check,
    simulate,
    theorem1_margin,
)

__all__ = [name for name in dir() if not name.startswith("_")]
