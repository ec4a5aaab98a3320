"""Null-message analysis for synchronous crash-failure protocols."""

from .model import (
    EMPTY_PATTERN,
    FailureEvent,
    FailurePattern,
    LocalState,
    ModelError,
    Network,
    ORInstance,
    Protocol,
    ProtocolViolation,
    Run,
    Step,
    harsher,
    validate_pattern,
)
from .simulator import ResourceBoundError, RunIndex, enumerate_runs, is_compatible, minimal_pattern, nice_run, simulate

__all__ = [
    "EMPTY_PATTERN",
    "FailureEvent",
    "FailurePattern",
    "LocalState",
    "ModelError",
    "Network",
    "ORInstance",
    "Protocol",
    "ProtocolViolation",
    "ResourceBoundError",
    "Run",
    "RunIndex",
    "Step",
    "enumerate_runs",
    "harsher",
    "is_compatible",
    "minimal_pattern",
    "nice_run",
    "simulate",
    "validate_pattern",
]
