"""Least-paradoxical cat states: reduced states, the lambda(A) relation and
the constrained optimizer, backed by the C++ core."""

from ._catbound import (
    CatboundError,
    __version__,
    bloch,
    check_constraints,
    construct_optimal,
    lambda_from_overlap,
    lambda_max_sq,
    lambda_residual,
    optimize,
    p_alive,
    partial_trace,
    qubit_triplet,
    sampling_oracle,
    schmidt,
    sweep,
    trace_distance,
    verify,
)

__all__ = [
    "CatboundError",
    "__version__",
    "bloch",
    "check_constraints",
    "construct_optimal",
    "lambda_from_overlap",
    "lambda_max_sq",
    "lambda_residual",
    "optimize",
    "p_alive",
    "partial_trace",
    "qubit_triplet",
    "sampling_oracle",
    "schmidt",
    "sweep",
    "trace_distance",
    "verify",
]
