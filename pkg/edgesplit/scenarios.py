"""Preset and randomly generated instance documents."""

from __future__ import annotations

from typing import Any

import numpy as np

from .const import (
    CONF_COEFFS,
    CONF_FAMILY,
    CONF_FUSION,
    CONF_G,
    CONF_LEVELS,
    CONF_MAP_PRE,
    CONF_PARAMS,
    CONF_PHI,
    CONF_POINTS,
    CONF_Q,
    G_FAMILY_EXP_SATURATION,
    G_FAMILY_LOG_SATURATION,
    G_FAMILY_QUADRATIC,
    G_FAMILY_TABULATED,
    PHI_FAMILY_EXP_SATURATION,
    PHI_FAMILY_IDENTITY,
    PHI_FAMILY_POWER,
)
from .curves import uplink_curve_from_config

# Reference channel: 1 MHz channel, unit spectral efficiency, 10 s cycle,
# 10 frames/s of 1000 parameters, 8-bit model parameters, 1e6 parameters.
REFERENCE_PARAMS: dict[str, float] = {
    "B": 1e6,
    "S_u": 1.0,
    "S_d": 1.0,
    "N": 10.0,
    "F": 1000.0,
    "T_total": 10.0,
    "M_max": 1e6,
    "b": 8,
}

QUANTIZATION_CHOICES = (1.0, 2.0, 4.0, 8.0, 16.0, 32.0)


def quadratic(a: float, c: float, d: float = 0.0) -> dict[str, Any]:
    """Document form of g(rho) = a + c*rho - d*rho^2."""
    return {CONF_FAMILY: G_FAMILY_QUADRATIC, CONF_COEFFS: {"a": a, "c": c, "d": d}}


def identity_phi() -> dict[str, Any]:
    """Document form of phi(u) = u."""
    return {CONF_FAMILY: PHI_FAMILY_IDENTITY, CONF_COEFFS: {}}


def reference_channel(
    levels: list[tuple[float, dict[str, Any]]] | None = None,
    *,
    map_pre: float = 0.4,
    phi: dict[str, Any] | None = None,
    **param_overrides: float,
) -> dict[str, Any]:
    """Reference channel instance document.

    Defaults to one level q=8 with g(rho) = 0.5 + 0.3*rho - 0.1*rho^2 and
    an identity blend.
    """
    levels = levels or [(8.0, quadratic(0.5, 0.3, 0.1))]
    return {
        CONF_PARAMS: {**REFERENCE_PARAMS, **param_overrides},
        CONF_LEVELS: [{CONF_Q: q, CONF_G: g} for q, g in levels],
        CONF_FUSION: {CONF_MAP_PRE: map_pre, CONF_PHI: phi or identity_phi()},
    }


def _log_uniform(rng: np.random.Generator, lo: float, hi: float) -> float:
    return float(10 ** rng.uniform(np.log10(lo), np.log10(hi)))


def _random_uplink_curve(rng: np.random.Generator) -> dict[str, Any]:
    family = rng.choice(
        [
            G_FAMILY_QUADRATIC,
            G_FAMILY_LOG_SATURATION,
            G_FAMILY_EXP_SATURATION,
            G_FAMILY_TABULATED,
        ]
    )
    base = float(rng.uniform(0.1, 0.5))
    if family == G_FAMILY_QUADRATIC:
        c = float(rng.uniform(0.0, 0.95 - base))
        d = float(rng.uniform(0.0, min(0.5, base + c)))
        return quadratic(base, c, d)
    if family == G_FAMILY_TABULATED:
        xs = np.linspace(0.0, 1.0, 5)
        slopes = np.sort(rng.uniform(-0.1, 0.8, size=4))[::-1]
        rises = slopes * np.diff(xs)
        ys = base + np.concatenate([[0.0], np.cumsum(rises)])
        peak = ys.max()
        if peak > 0.95:
            ys = base + (ys - base) * (0.95 - base) / (peak - base)
        return {
            CONF_FAMILY: G_FAMILY_TABULATED,
            CONF_POINTS: [[float(x), float(y)] for x, y in zip(xs, ys, strict=True)],
        }
    return {
        CONF_FAMILY: str(family),
        CONF_COEFFS: {
            "m0": base,
            "a": float(rng.uniform(0.0, 0.95 - base)),
            "k": _log_uniform(rng, 0.1, 100.0),
        },
    }


def _random_blend_curve(rng: np.random.Generator) -> dict[str, Any]:
    family = rng.choice(
        [PHI_FAMILY_POWER, PHI_FAMILY_EXP_SATURATION, PHI_FAMILY_IDENTITY]
    )
    if family == PHI_FAMILY_POWER:
        return {
            CONF_FAMILY: PHI_FAMILY_POWER,
            CONF_COEFFS: {"gamma": _log_uniform(rng, 0.3, 3.0)},
        }
    if family == PHI_FAMILY_EXP_SATURATION:
        return {
            CONF_FAMILY: PHI_FAMILY_EXP_SATURATION,
            CONF_COEFFS: {"k": _log_uniform(rng, 0.1, 10.0)},
        }
    return identity_phi()


def random_instance(
    rng: np.random.Generator, max_levels: int = 4
) -> dict[str, Any]:
    """Random instance document with built-in curve families.

    Channel and device parameters are log-uniform over three decades. The
    no-update performance sits below every level's g(0), so updating never
    hurts.
    """
    params = {
        "B": _log_uniform(rng, 1e5, 1e8),
        "S_u": float(rng.uniform(0.5, 4.0)),
        "S_d": float(rng.uniform(0.5, 4.0)),
        "N": _log_uniform(rng, 1.0, 1e3),
        "F": _log_uniform(rng, 1e2, 1e5),
        "T_total": _log_uniform(rng, 0.1, 100.0),
        "M_max": _log_uniform(rng, 1e4, 1e7),
        "b": int(rng.choice([4, 8, 16, 32])),
    }
    count = int(rng.integers(1, max_levels + 1))
    qs = sorted(rng.choice(QUANTIZATION_CHOICES, size=count, replace=False))
    levels = [
        {CONF_Q: float(q), CONF_G: _random_uplink_curve(rng)} for q in qs
    ]
    floor = min(float(uplink_curve_from_config(lv[CONF_G])(0.0)) for lv in levels)
    return {
        CONF_PARAMS: params,
        CONF_LEVELS: levels,
        CONF_FUSION: {
            CONF_MAP_PRE: float(rng.uniform(0.5, 1.0)) * floor,
            CONF_PHI: _random_blend_curve(rng),
        },
    }
