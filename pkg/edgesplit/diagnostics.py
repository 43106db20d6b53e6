"""Diagnostics support for validated instances."""

from __future__ import annotations

from typing import Any

from .const import CONF_FAMILY
from .envelope import Envelope, build_envelope
from .model import DegenerateDomain, ProblemInstance


def get_instance_diagnostics(
    instance: ProblemInstance, envelope: Envelope | None = None
) -> dict[str, Any]:
    """Return a JSON-ready summary of an instance and its envelope."""
    params = instance.params

    if envelope is None:
        try:
            envelope = build_envelope(instance)
        except DegenerateDomain:
            envelope = None

    levels_info = []
    for j, level in enumerate(instance.levels):
        info: dict[str, Any] = {
            "index": j,
            "q": level.q,
            "family": level.g.as_config()[CONF_FAMILY],
            "rho_best": instance.level_rho_best(j),
        }
        if envelope is not None:
            boundary = envelope.boundaries[j]
            info["plateau_value"] = boundary.plateau_value
            info["threshold"] = boundary.threshold
        levels_info.append(info)

    return {
        "params": params.as_config(),
        "domain": {
            "M_hi": params.m_hi,
            "downlink_capacity_params": params.downlink_capacity_params,
        },
        "levels": {
            "count": len(instance.levels),
            "details": levels_info,
        },
        "fusion": {
            "mAP_pre": instance.fusion.map_pre,
            "phi_family": instance.fusion.phi.as_config()[CONF_FAMILY],
        },
        "envelope": (
            {
                "knots": list(envelope.knots),
                "segments": [
                    {
                        "start": seg.start,
                        "end": seg.end,
                        "q": envelope.boundaries[seg.level_index].q,
                        "kind": seg.kind,
                    }
                    for seg in envelope.segments
                ],
            }
            if envelope is not None
            else None
        ),
        "warnings": list(instance.warnings),
    }
