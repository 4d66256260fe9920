"""Multi-Mesh of Trees all-to-all broadcast with random linear network coding."""

from ._core import (
    Error,
    Field,
    InvalidParameter,
    ParseError,
    butterfly_trial,
    graph_metrics,
    run,
    schedule_rounds,
    topology,
)

__all__ = [
    "Error",
    "Field",
    "InvalidParameter",
    "ParseError",
    "butterfly_trial",
    "graph_metrics",
    "run",
    "schedule_rounds",
    "topology",
]
