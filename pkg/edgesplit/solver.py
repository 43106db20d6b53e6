"""Communication resource allocation solver."""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from typing import Any

import numpy as np

from .config import SolverOptions
from .envelope import Envelope, build_envelope, per_level_boundary
from .model import FusionModel, ProblemInstance
from .search import golden_section_max

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolveDiagnostics:
    """How the optimum was found."""

    active_segment: int
    evaluations: int
    knots: tuple[float, ...]
    no_downlink: bool = False
    map_at_floor: float | None = None
    map_at_ceil: float | None = None
    floor_delta: float | None = None
    envelope_below_pre: bool = False

    def as_dict(self) -> dict[str, Any]:
        """Return the JSON form."""
        data = asdict(self)
        data["knots"] = list(self.knots)
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> SolveDiagnostics:
        """Create from the JSON form."""
        return cls(**{**data, "knots": tuple(data["knots"])})


@dataclass(frozen=True)
class AllocationResult:
    """Optimal allocation (M, q, rho, T_u, T_d) and its performance."""

    m_opt: float
    m_opt_int: int
    q_opt: float
    rho_opt: float
    t_u_opt: float
    t_d_opt: float
    map_star_opt: float
    map_opt: float
    diagnostics: SolveDiagnostics

    def as_dict(self) -> dict[str, Any]:
        """Return the JSON form with the published field names."""
        return {
            "M_opt": self.m_opt,
            "M_opt_int": self.m_opt_int,
            "q_opt": self.q_opt,
            "rho_opt": self.rho_opt,
            "T_u_opt": self.t_u_opt,
            "T_d_opt": self.t_d_opt,
            "mAP_star_opt": self.map_star_opt,
            "mAP_opt": self.map_opt,
            "diagnostics": self.diagnostics.as_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> AllocationResult:
        """Create from the JSON form."""
        return cls(
            m_opt=data["M_opt"],
            m_opt_int=data["M_opt_int"],
            q_opt=data["q_opt"],
            rho_opt=data["rho_opt"],
            t_u_opt=data["T_u_opt"],
            t_d_opt=data["T_d_opt"],
            map_star_opt=data["mAP_star_opt"],
            map_opt=data["mAP_opt"],
            diagnostics=SolveDiagnostics.from_dict(data["diagnostics"]),
        )


def objective(m: float, envelope: Envelope, fusion: FusionModel) -> float:
    """End-model performance f(M, L(M)) when M parameters are sent."""
    point = envelope.evaluate(m)
    return float(fusion.evaluate(point.m, point.value))


def _no_downlink_result(instance: ProblemInstance) -> AllocationResult:
    """Best allocation when no model parameter fits on the downlink."""
    params = instance.params
    boundaries = [per_level_boundary(j, instance) for j in range(len(instance.levels))]
    values = [float(b.value(0.0)) for b in boundaries]
    j = int(np.argmax(values))
    return AllocationResult(
        m_opt=0.0,
        m_opt_int=0,
        q_opt=boundaries[j].q,
        rho_opt=float(boundaries[j].rho_at(0.0)),
        t_u_opt=params.total_time,
        t_d_opt=0.0,
        map_star_opt=values[j],
        map_opt=instance.fusion.map_pre,
        diagnostics=SolveDiagnostics(
            active_segment=0,
            evaluations=0,
            knots=(0.0,),
            no_downlink=True,
        ),
    )


def solve(
    instance: ProblemInstance,
    options: SolverOptions | None = None,
) -> AllocationResult:
    """Find the allocation maximising the end model's mAP.

    Builds the envelope, samples f(M, L(M)) on every envelope segment,
    refines around the best sample by golden-section search and recovers
    the time split with the whole cycle used.
    """
    options = options or SolverOptions()
    params = instance.params
    fusion = instance.fusion
    m_hi = params.m_hi
    if not m_hi > 0:
        _LOGGER.warning("No parameter fits on the downlink (M_hi=%s)", m_hi)
        return _no_downlink_result(instance)

    envelope = build_envelope(instance, scan_points=options.crossing_scan_points)

    ms = np.unique(
        np.concatenate(
            [
                np.linspace(seg.start, seg.end, options.segment_samples)
                for seg in envelope.segments
            ]
        )
    )
    envelope_values = envelope.values(ms)
    objective_values = np.asarray(fusion.evaluate(ms, envelope_values), dtype=float)
    evaluations = int(ms.size)

    # First maximum, i.e. the smallest M among ties
    best = int(np.argmax(objective_values))
    m_opt = float(ms[best])
    best_value = float(objective_values[best])

    refined = golden_section_max(
        lambda m: float(fusion.evaluate(m, envelope.values(m)[0])),
        float(ms[max(best - 1, 0)]),
        float(ms[min(best + 1, ms.size - 1)]),
        options.refine_tolerance * m_hi,
    )
    evaluations += refined.evaluations
    if refined.maximum > best_value:
        m_opt = refined.argmax

    point = envelope.evaluate(m_opt)
    map_opt = float(fusion.evaluate(point.m, point.value))

    downlink_capacity = params.bandwidth * params.downlink_efficiency
    t_d = min(point.m * params.param_bits / downlink_capacity, params.total_time)
    t_u = params.total_time - t_d

    m_floor = math.floor(point.m)
    map_at_floor = objective(float(m_floor), envelope, fusion)
    m_ceil = math.ceil(point.m)
    map_at_ceil = objective(float(m_ceil), envelope, fusion) if m_ceil <= m_hi else None

    below_pre = bool(np.any(envelope_values < fusion.map_pre))
    if below_pre:
        _LOGGER.warning(
            "Envelope drops below mAP_pre=%.4g; sending more parameters can "
            "lower mAP in that region",
            fusion.map_pre,
        )

    _LOGGER.debug(
        "Solved: M_opt=%.6g q=%s rho=%.6g mAP=%.6g after %d evaluations",
        point.m,
        point.q,
        point.rho,
        map_opt,
        evaluations,
    )
    return AllocationResult(
        m_opt=point.m,
        m_opt_int=int(m_floor),
        q_opt=point.q,
        rho_opt=point.rho,
        t_u_opt=t_u,
        t_d_opt=t_d,
        map_star_opt=point.value,
        map_opt=map_opt,
        diagnostics=SolveDiagnostics(
            active_segment=envelope.segment_index(point.m),
            evaluations=evaluations,
            knots=envelope.knots,
            map_at_floor=map_at_floor,
            map_at_ceil=map_at_ceil,
            floor_delta=map_opt - map_at_floor,
            envelope_below_pre=below_pre,
        ),
    )
