"""Entropy-stable nodal DG solver for a seven-equation two-phase flow model."""

__version__ = "0.1.0"

from .errors import (
    AveragePreconditionViolated,
    BnesError,
    CaseError,
    ConfigError,
    DegenerateState,
    InvalidState,
    IoError,
    MeshMismatch,
    NonFiniteBound,
    NonPositiveArgument,
    NotApplicable,
    PositivityFailure,
    UnknownCase,
    UnsupportedDegree,
)

__all__ = [
    "__version__",
    "AveragePreconditionViolated",
    "BnesError",
    "CaseError",
    "ConfigError",
    "DegenerateState",
    "InvalidState",
    "IoError",
    "MeshMismatch",
    "NonFiniteBound",
    "NonPositiveArgument",
    "NotApplicable",
    "PositivityFailure",
    "UnknownCase",
    "UnsupportedDegree",
]
