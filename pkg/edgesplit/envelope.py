"""Upper boundary of the feasible region in the (M, mAP*) plane.

For a fixed quantization level q_j, delivering M parameters on the downlink
leaves the rest of the cycle to the uplink, which caps the upload proportion
at rho_cap(M). The best reachable update performance is therefore

    L_j(M) = g_j(min(rho_best_j, rho_cap_j(M)))

which is constant up to the level's threshold and concave and non-increasing
after it. The envelope L(M) is the pointwise maximum over all levels.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.typing import ArrayLike

from .const import (
    CROSSING_TOLERANCE,
    DEFAULT_CROSSING_SCAN_POINTS,
    KNOT_MERGE_TOLERANCE,
)
from .curves import UplinkCurve
from .model import DegenerateDomain, DomainError, ProblemInstance, SystemParams
from .search import bisect_sign_change

_LOGGER = logging.getLogger(__name__)

SEGMENT_CONSTANT = "constant"
SEGMENT_CONCAVE = "concave-decreasing"


def _raw_rho_cap(m: ArrayLike, q: float, params: SystemParams) -> Any:
    """Upload proportion the uplink can carry once M parameters are sent."""
    m = np.asarray(m, dtype=float)
    remaining = params.bandwidth - m * params.param_bits / (
        params.total_time * params.downlink_efficiency
    )
    scale = params.uplink_efficiency / (params.frame_rate * params.frame_size * q)
    return scale * remaining


def _params_for_rho(rho: float, q: float, params: SystemParams) -> float:
    """Parameter count at which the uplink cap falls to ``rho``."""
    return (
        params.total_time
        * params.downlink_efficiency
        / params.param_bits
        * (
            params.bandwidth
            - rho * q * params.frame_rate * params.frame_size / params.uplink_efficiency
        )
    )


def _check_domain(m: float, m_hi: float) -> None:
    if not -KNOT_MERGE_TOLERANCE * m_hi <= m <= m_hi * (1 + KNOT_MERGE_TOLERANCE):
        raise DomainError(f"Parameter count must lie in [0, {m_hi}], got {m}")


def rho_cap(m: float, j: int, instance: ProblemInstance) -> float:
    """Largest feasible upload proportion for level j with M parameters sent."""
    params = instance.params
    _check_domain(m, params.m_hi)
    q = instance.levels[j].q
    return float(np.clip(_raw_rho_cap(m, q, params), 0.0, 1.0))


@dataclass(frozen=True)
class PerLevelBoundary:
    """Boundary function L_j(M) of one quantization level."""

    level_index: int
    q: float
    rho_best: float
    plateau_value: float
    threshold: float
    domain_hi: float
    g: UplinkCurve = field(repr=False)
    params: SystemParams = field(repr=False)

    def rho_at(self, m: ArrayLike) -> Any:
        """Upload proportion used at M: min(rho_best, rho_cap(M))."""
        cap = np.clip(_raw_rho_cap(m, self.q, self.params), 0.0, 1.0)
        return np.minimum(self.rho_best, cap)

    def value(self, m: ArrayLike) -> Any:
        """Evaluate L_j(M)."""
        return self.g(self.rho_at(m))

    def is_capped(self, m: float) -> bool:
        """Whether the uplink cap, not rho_best, limits the level at M."""
        cap = float(np.clip(_raw_rho_cap(m, self.q, self.params), 0.0, 1.0))
        return cap < self.rho_best


def per_level_boundary(j: int, instance: ProblemInstance) -> PerLevelBoundary:
    """Build the closed-form boundary of level j."""
    params = instance.params
    level = instance.levels[j]
    m_hi = params.m_hi
    rho_best = instance.level_rho_best(j)
    threshold = float(np.clip(_params_for_rho(rho_best, level.q, params), 0.0, m_hi))
    return PerLevelBoundary(
        level_index=j,
        q=level.q,
        rho_best=rho_best,
        plateau_value=float(level.g(rho_best)),
        threshold=threshold,
        domain_hi=m_hi,
        g=level.g,
        params=params,
    )


@dataclass(frozen=True)
class EnvelopeSegment:
    """Interval between consecutive knots with its winning level."""

    start: float
    end: float
    level_index: int
    kind: str


@dataclass(frozen=True)
class EnvelopePoint:
    """Envelope value at one M with the level and proportion achieving it."""

    m: float
    value: float
    level_index: int
    q: float
    rho: float


@dataclass(frozen=True)
class Envelope:
    """Pointwise maximum of the per-level boundaries on [0, M_hi]."""

    knots: tuple[float, ...]
    segments: tuple[EnvelopeSegment, ...]
    boundaries: tuple[PerLevelBoundary, ...]
    domain_hi: float

    def level_values(self, ms: ArrayLike) -> np.ndarray:
        """Matrix of L_j(M), one row per level."""
        ms = np.atleast_1d(np.asarray(ms, dtype=float))
        return np.vstack(
            [np.asarray(b.value(ms), dtype=float) for b in self.boundaries]
        )

    def values(self, ms: ArrayLike) -> np.ndarray:
        """Vectorised L(M)."""
        return np.max(self.level_values(ms), axis=0)

    def evaluate(self, m: float) -> EnvelopePoint:
        """Evaluate L(M); ties go to the smallest level index."""
        _check_domain(m, self.domain_hi)
        m = min(max(m, 0.0), self.domain_hi)
        column = self.level_values(m)[:, 0]
        j = int(np.argmax(column))
        boundary = self.boundaries[j]
        return EnvelopePoint(
            m=m,
            value=float(column[j]),
            level_index=j,
            q=boundary.q,
            rho=float(boundary.rho_at(m)),
        )

    def segment_index(self, m: float) -> int:
        """Index of the segment containing M (the left one at a knot)."""
        idx = int(np.searchsorted(self.knots, m, side="left")) - 1
        return min(max(idx, 0), len(self.segments) - 1)

    def sample(self, samples: int) -> list[EnvelopePoint]:
        """Evaluate the envelope on ``samples`` evenly spaced points."""
        if samples < 2:
            raise DomainError("At least two samples are needed")
        ms = np.linspace(0.0, self.domain_hi, samples)
        return [self.evaluate(float(m)) for m in ms]


def _crossings(
    first: PerLevelBoundary,
    second: PerLevelBoundary,
    grid: np.ndarray,
    tol: float,
) -> list[float]:
    """Points where two boundaries swap order, located by bisection."""
    diff = np.asarray(first.value(grid), dtype=float) - np.asarray(
        second.value(grid), dtype=float
    )
    nonzero = np.flatnonzero(diff)
    points: list[float] = []
    for a, b in itertools.pairwise(nonzero):
        if np.sign(diff[a]) == np.sign(diff[b]):
            continue
        if b > a + 1:
            # An exact tie on the grid between the two sign changes
            points.append(float(grid[a + 1]))
            continue
        points.append(
            bisect_sign_change(
                lambda m: float(first.value(m)) - float(second.value(m)),
                float(grid[a]),
                float(grid[b]),
                tol,
            )
        )
    return points


def _merge_knots(candidates: list[float], m_hi: float) -> tuple[float, ...]:
    merge_tol = KNOT_MERGE_TOLERANCE * m_hi
    knots = [0.0]
    for knot in sorted(candidates):
        if merge_tol < knot < m_hi - merge_tol and knot - knots[-1] > merge_tol:
            knots.append(knot)
    knots.append(m_hi)
    return tuple(knots)


def build_envelope(
    instance: ProblemInstance,
    *,
    scan_points: int = DEFAULT_CROSSING_SCAN_POINTS,
) -> Envelope:
    """Build L(M) with its knots and labelled segments.

    Knots are the domain ends, every level threshold, every point where a
    level's uplink cap reaches 1 or 0, and every crossing of two level
    boundaries found on a ``scan_points`` grid. Crossings narrower than the
    scan spacing can be missed.
    """
    params = instance.params
    m_hi = params.m_hi
    if not m_hi > 0:
        raise DegenerateDomain(f"Parameter domain is empty (M_hi={m_hi})")

    boundaries = tuple(
        per_level_boundary(j, instance) for j in range(len(instance.levels))
    )

    candidates: list[float] = []
    for boundary in boundaries:
        candidates.append(boundary.threshold)
        candidates.extend(
            _params_for_rho(rho, boundary.q, params) for rho in (1.0, 0.0)
        )

    grid = np.linspace(0.0, m_hi, scan_points)
    tol = CROSSING_TOLERANCE * m_hi
    for first, second in itertools.combinations(boundaries, 2):
        candidates.extend(_crossings(first, second, grid, tol))

    knots = _merge_knots(candidates, m_hi)

    segments = []
    for start, end in itertools.pairwise(knots):
        mid = 0.5 * (start + end)
        column = np.array([float(b.value(mid)) for b in boundaries])
        j = int(np.argmax(column))
        kind = SEGMENT_CONCAVE if boundaries[j].is_capped(mid) else SEGMENT_CONSTANT
        segments.append(EnvelopeSegment(start, end, j, kind))

    _LOGGER.debug(
        "Envelope over [0, %.6g]: %d level(s), %d knot(s)",
        m_hi,
        len(boundaries),
        len(knots),
    )
    return Envelope(
        knots=knots,
        segments=tuple(segments),
        boundaries=boundaries,
        domain_hi=m_hi,
    )
