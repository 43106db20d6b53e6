"""System model for end-edge bandwidth allocation."""

from __future__ import annotations

import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Any

import numpy as np
from numpy.typing import ArrayLike

from .const import (
    CONF_G,
    CONF_MAP_PRE,
    CONF_PHI,
    CONF_Q,
    CONSTRAINT_DOWNLINK,
    CONSTRAINT_PARAM_COUNT,
    CONSTRAINT_RHO_AND_LEVEL,
    CONSTRAINT_TIME_BUDGET,
    CONSTRAINT_TOLERANCE,
    CONSTRAINT_UPLINK,
    PARAM_BANDWIDTH,
    PARAM_DOWNLINK_EFFICIENCY,
    PARAM_FRAME_RATE,
    PARAM_FRAME_SIZE,
    PARAM_MAX_PARAMS,
    PARAM_PARAM_BITS,
    PARAM_TOTAL_TIME,
    PARAM_UPLINK_EFFICIENCY,
)
from .curves import (
    BlendCurve,
    UplinkCurve,
    blend_curve_from_config,
    uplink_curve_from_config,
)

_LOGGER = logging.getLogger(__name__)


class EdgeSplitError(Exception):
    """Base exception for edgesplit."""


class DomainError(EdgeSplitError, ValueError):
    """Exception for an argument outside an operation's domain."""


class DegenerateDomain(EdgeSplitError):
    """Exception for an instance whose parameter domain [0, M_hi] is empty."""


class GridBudgetError(EdgeSplitError):
    """Exception for a brute-force grid larger than its candidate budget."""


class SweepSpecError(EdgeSplitError):
    """Exception for an invalid sweep specification."""


class StructuralViolation(EdgeSplitError):
    """One broken structural assumption of a problem instance."""


class ConcavityViolation(StructuralViolation):
    """An uplink curve is not concave."""


class MonotonicityViolation(StructuralViolation):
    """The fusion blending curve is not strictly increasing."""


class EmptyLevelSet(StructuralViolation):
    """The instance has no quantization levels."""


class NonpositiveParam(StructuralViolation):
    """A parameter that must be positive is not."""


class RangeViolation(StructuralViolation):
    """A value falls outside its allowed range."""


class SchemaViolation(StructuralViolation):
    """The instance document does not have the expected structure."""


class InstanceValidationError(EdgeSplitError):
    """Exception carrying every structural violation found in an instance."""

    def __init__(self, violations: list[StructuralViolation]) -> None:
        """Initialize with the violation report."""
        self.violations = list(violations)
        lines = [f"{type(v).__name__}: {v}" for v in self.violations]
        super().__init__(
            f"{len(self.violations)} violation(s): " + "; ".join(lines)
        )

    def kinds(self) -> set[type[StructuralViolation]]:
        """Return the violation classes present in the report."""
        return {type(v) for v in self.violations}


# Maps instance-document keys to SystemParams attributes
_PARAM_FIELDS = {
    PARAM_BANDWIDTH: "bandwidth",
    PARAM_UPLINK_EFFICIENCY: "uplink_efficiency",
    PARAM_DOWNLINK_EFFICIENCY: "downlink_efficiency",
    PARAM_FRAME_RATE: "frame_rate",
    PARAM_FRAME_SIZE: "frame_size",
    PARAM_TOTAL_TIME: "total_time",
    PARAM_MAX_PARAMS: "max_params",
    PARAM_PARAM_BITS: "param_bits",
}


@dataclass(frozen=True)
class SystemParams:
    """Channel and device constants.

    Units: Hz, bits/s/Hz, frames/s, parameters/frame, seconds, parameters,
    bits/parameter.
    """

    bandwidth: float
    uplink_efficiency: float
    downlink_efficiency: float
    frame_rate: float
    frame_size: float
    total_time: float
    max_params: float
    param_bits: int

    @classmethod
    def from_config(cls, data: dict[str, Any]) -> SystemParams:
        """Create from the ``params`` object of an instance document."""
        values: dict[str, Any] = {
            attr: float(data[key]) for key, attr in _PARAM_FIELDS.items()
        }
        bits = values["param_bits"]
        values["param_bits"] = int(bits) if float(bits).is_integer() else bits
        return cls(**values)

    def as_config(self) -> dict[str, Any]:
        """Return the instance-document form."""
        return {key: getattr(self, attr) for key, attr in _PARAM_FIELDS.items()}

    def replace(self, key: str, value: float) -> SystemParams:
        """Return a copy with one parameter, named by its document key, changed."""
        try:
            attr = _PARAM_FIELDS[key]
        except KeyError as err:
            raise DomainError(f"Unknown parameter: {key}") from err
        return dataclasses.replace(self, **{attr: value})

    @property
    def downlink_capacity_params(self) -> float:
        """Parameters the downlink could carry with the whole cycle."""
        return (
            self.total_time
            * self.bandwidth
            * self.downlink_efficiency
            / self.param_bits
        )

    @property
    def m_hi(self) -> float:
        """Upper end of the parameter-count domain, min(M_max, T*B*S_d/b)."""
        return min(self.max_params, self.downlink_capacity_params)


@dataclass(frozen=True)
class QuantLevelModel:
    """One quantization level q_j with its uplink performance curve g_j."""

    q: float
    g: UplinkCurve

    @classmethod
    def from_config(cls, data: dict[str, Any]) -> QuantLevelModel:
        """Create from one entry of the ``levels`` array."""
        return cls(q=float(data[CONF_Q]), g=uplink_curve_from_config(data[CONF_G]))

    def as_config(self) -> dict[str, Any]:
        """Return the instance-document form."""
        return {CONF_Q: self.q, CONF_G: self.g.as_config()}


@dataclass(frozen=True)
class FusionModel:
    """Downlink fusion f(M, s) = mAP_pre + (s - mAP_pre) * phi(M / M_max)."""

    map_pre: float
    phi: BlendCurve
    max_params: float

    @classmethod
    def from_config(cls, data: dict[str, Any], max_params: float) -> FusionModel:
        """Create from the ``fusion`` object of an instance document."""
        return cls(
            map_pre=float(data[CONF_MAP_PRE]),
            phi=blend_curve_from_config(data[CONF_PHI]),
            max_params=max_params,
        )

    def as_config(self) -> dict[str, Any]:
        """Return the instance-document form."""
        return {CONF_MAP_PRE: self.map_pre, CONF_PHI: self.phi.as_config()}

    def weight(self, m: ArrayLike) -> Any:
        """Blend weight phi(M / M_max)."""
        u = np.clip(np.asarray(m, dtype=float) / self.max_params, 0.0, 1.0)
        return self.phi(u)

    def evaluate(self, m: ArrayLike, s: ArrayLike) -> Any:
        """Evaluate f(M, s).

        Written as the convex combination (1 - w)*mAP_pre + w*s so that
        f(0, s) = mAP_pre and f(M_max, s) = s hold exactly.
        """
        w = self.weight(m)
        return (1.0 - w) * self.map_pre + w * np.asarray(s, dtype=float)


@dataclass(frozen=True)
class ProblemInstance:
    """Parameters, quantization level set and fusion function of one problem.

    ``rho_best`` and ``warnings`` are filled in by validation.
    """

    params: SystemParams
    levels: tuple[QuantLevelModel, ...]
    fusion: FusionModel
    rho_best: tuple[float, ...] = ()
    warnings: tuple[str, ...] = ()

    @property
    def level_values(self) -> tuple[float, ...]:
        """The quantization set Omega, in level order."""
        return tuple(level.q for level in self.levels)

    @property
    def is_validated(self) -> bool:
        """Whether validation has annotated the instance."""
        return len(self.rho_best) == len(self.levels) > 0

    def level_rho_best(self, j: int) -> float:
        """Return the maximiser of g_j on [0, 1]."""
        if self.is_validated:
            return self.rho_best[j]
        return self.levels[j].g.argmax()

    def with_param(self, key: str, value: float) -> ProblemInstance:
        """Return an unvalidated copy with one system parameter changed."""
        params = self.params.replace(key, value)
        fusion = dataclasses.replace(self.fusion, max_params=params.max_params)
        return ProblemInstance(params=params, levels=self.levels, fusion=fusion)

    def as_config(self) -> dict[str, Any]:
        """Return the instance-document form."""
        return {
            "params": self.params.as_config(),
            "levels": [level.as_config() for level in self.levels],
            "fusion": self.fusion.as_config(),
        }


@dataclass(frozen=True)
class FeasibilityReport:
    """Result of checking one candidate allocation."""

    feasible: bool
    violations: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.feasible


def uplink_rate(rho: float, q: float, params: SystemParams) -> float:
    """Uplink rate R_V = N * rho * F * q in bits/s."""
    if not 0.0 <= rho <= 1.0:
        raise DomainError(f"Upload proportion must lie in [0, 1], got {rho}")
    if q <= 0:
        raise DomainError(f"Quantization level must be positive, got {q}")
    return params.frame_rate * rho * params.frame_size * q


def downlink_rate(m: float, params: SystemParams) -> float:
    """Downlink rate R_M = M * b / T_total in bits/s."""
    if not 0.0 <= m <= params.max_params:
        raise DomainError(
            f"Parameter count must lie in [0, {params.max_params}], got {m}"
        )
    return m * params.param_bits / params.total_time


def feasibility_excess(
    m: ArrayLike,
    rho: ArrayLike,
    q: float,
    t_u: ArrayLike,
    t_d: ArrayLike,
    params: SystemParams,
) -> dict[str, Any]:
    """Normalised excess of every continuous constraint; broadcasts over arrays.

    Each value is (lhs - rhs) / scale for a constraint written lhs <= rhs,
    where scale is the constraint's natural magnitude: T_total for time,
    the full-upload demand N*F*q for the uplink (so the excess reads in rho
    units), B*S_d for the downlink and M_max for the parameter count. A
    candidate satisfies a constraint when its excess is at most
    CONSTRAINT_TOLERANCE.
    """
    m = np.asarray(m, dtype=float)
    rho = np.asarray(rho, dtype=float)
    t_u = np.asarray(t_u, dtype=float)
    t_d = np.asarray(t_d, dtype=float)
    total = params.total_time
    uplink_capacity = params.bandwidth * params.uplink_efficiency
    downlink_capacity = params.bandwidth * params.downlink_efficiency

    rho_excess = np.maximum(-rho, rho - 1.0)
    time_excess = np.maximum.reduce(
        [(t_u + t_d - total) / total, -t_u / total, -t_d / total]
    )
    demand = params.frame_rate * params.frame_size * q
    uplink_excess = (demand * rho - uplink_capacity * t_u / total) / (
        demand if demand > 0 else uplink_capacity
    )
    downlink_excess = (
        m * params.param_bits / total - downlink_capacity * t_d / total
    ) / downlink_capacity
    count_excess = np.maximum(-m, m - params.max_params) / params.max_params
    return {
        CONSTRAINT_RHO_AND_LEVEL: rho_excess,
        CONSTRAINT_TIME_BUDGET: time_excess,
        CONSTRAINT_UPLINK: uplink_excess,
        CONSTRAINT_DOWNLINK: downlink_excess,
        CONSTRAINT_PARAM_COUNT: count_excess,
    }


def check_feasible(
    m: float,
    rho: float,
    q: float,
    t_u: float,
    t_d: float,
    instance: ProblemInstance,
) -> FeasibilityReport:
    """Check a candidate (M, rho, q, T_u, T_d) against every constraint."""
    violations: list[str] = []
    values = (m, rho, q, t_u, t_d)
    if not all(math.isfinite(v) for v in values):
        return FeasibilityReport(
            False,
            (
                CONSTRAINT_RHO_AND_LEVEL,
                CONSTRAINT_TIME_BUDGET,
                CONSTRAINT_UPLINK,
                CONSTRAINT_DOWNLINK,
                CONSTRAINT_PARAM_COUNT,
            ),
        )

    excess = feasibility_excess(m, rho, q, t_u, t_d, instance.params)
    in_omega = any(
        math.isclose(q, level_q, rel_tol=1e-12) for level_q in instance.level_values
    )
    for constraint, value in excess.items():
        violated = float(value) > CONSTRAINT_TOLERANCE
        if constraint == CONSTRAINT_RHO_AND_LEVEL and not in_omega:
            violated = True
        if violated:
            violations.append(constraint)

    return FeasibilityReport(not violations, tuple(violations))
