"""Uplink/downlink bandwidth allocation for end-edge model updating."""

from __future__ import annotations

from .config import SolverOptions, load_instance, parse_instance, validate_instance
from .envelope import Envelope, build_envelope, per_level_boundary, rho_cap
from .model import (
    DegenerateDomain,
    EdgeSplitError,
    InstanceValidationError,
    ProblemInstance,
    SystemParams,
    check_feasible,
)
from .oracle import GridSpec, brute_force
from .solver import AllocationResult, solve
from .sweep import SweepSpec, run_sweep

__version__ = "0.1.0"

__all__ = [
    "AllocationResult",
    "DegenerateDomain",
    "EdgeSplitError",
    "Envelope",
    "GridSpec",
    "InstanceValidationError",
    "ProblemInstance",
    "SolverOptions",
    "SweepSpec",
    "SystemParams",
    "brute_force",
    "build_envelope",
    "check_feasible",
    "load_instance",
    "parse_instance",
    "per_level_boundary",
    "rho_cap",
    "run_sweep",
    "solve",
    "validate_instance",
]
