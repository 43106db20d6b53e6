"""Exhaustive grid search over (M, rho, q) used as ground truth."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .const import CONSTRAINT_TOLERANCE, DEFAULT_ORACLE_BUDGET
from .envelope import build_envelope
from .model import (
    DegenerateDomain,
    DomainError,
    GridBudgetError,
    ProblemInstance,
    check_feasible,
    feasibility_excess,
)

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class GridSpec:
    """Grid resolution: n_m points over [0, M_hi], n_rho over [0, 1]."""

    n_m: int
    n_rho: int

    def __post_init__(self) -> None:
        if self.n_m < 2 or self.n_rho < 2:
            raise DomainError(
                f"Grid needs at least 2 points per axis, got {self.n_m}x{self.n_rho}"
            )

    @classmethod
    def parse(cls, text: str) -> GridSpec:
        """Parse the ``nM,nRho`` form used on the command line."""
        try:
            n_m, n_rho = (int(part) for part in text.split(","))
        except ValueError as err:
            raise DomainError(f"Grid must look like 'nM,nRho', got {text!r}") from err
        return cls(n_m, n_rho)

    def candidates(self, levels: int) -> int:
        """Number of (M, rho, q) tuples on the grid."""
        return self.n_m * self.n_rho * levels


@dataclass(frozen=True)
class OracleCandidate:
    """One feasible grid tuple and its performance."""

    m: float
    rho: float
    q: float
    level_index: int
    t_u: float
    t_d: float
    map_star: float
    map_value: float

    def _rank(self) -> tuple[float, float, float, int]:
        # Higher mAP, then smaller M, then higher mAP*, then smaller level
        return (self.map_value, -self.m, self.map_star, -self.level_index)


@dataclass(frozen=True)
class OracleResult:
    """Best grid candidate with search statistics."""

    best: OracleCandidate
    evaluated: int
    feasible: int
    trace: tuple[OracleCandidate, ...] | None = None


def _grid_axes(
    instance: ProblemInstance, grid: GridSpec
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    params = instance.params
    ms = np.linspace(0.0, params.m_hi, grid.n_m)
    rhos = np.linspace(0.0, 1.0, grid.n_rho)
    t_d = ms * params.param_bits / (params.bandwidth * params.downlink_efficiency)
    t_u = params.total_time - t_d
    return ms, rhos, t_u, t_d


def _trace_search(
    instance: ProblemInstance, grid: GridSpec
) -> tuple[OracleCandidate, int, tuple[OracleCandidate, ...]]:
    """Enumerate every tuple through check_feasible."""
    ms, rhos, t_u, t_d = _grid_axes(instance, grid)
    fusion = instance.fusion
    rows: list[OracleCandidate] = []
    best: OracleCandidate | None = None
    for i, m in enumerate(ms):
        for j, level in enumerate(instance.levels):
            for rho in rhos:
                m_f, rho_f = float(m), float(rho)
                if not check_feasible(
                    m_f, rho_f, level.q, float(t_u[i]), float(t_d[i]), instance
                ):
                    continue
                star = float(level.g(rho_f))
                candidate = OracleCandidate(
                    m=m_f,
                    rho=rho_f,
                    q=level.q,
                    level_index=j,
                    t_u=float(t_u[i]),
                    t_d=float(t_d[i]),
                    map_star=star,
                    map_value=float(fusion.evaluate(m_f, star)),
                )
                rows.append(candidate)
                if best is None or candidate._rank() > best._rank():
                    best = candidate
    if best is None:
        raise DegenerateDomain("No feasible candidate on the grid")
    return best, len(rows), tuple(rows)


def _vector_search(
    instance: ProblemInstance, grid: GridSpec
) -> tuple[OracleCandidate, int]:
    """Same search with the feasibility test broadcast over the grid."""
    params = instance.params
    fusion = instance.fusion
    ms, rhos, t_u, t_d = _grid_axes(instance, grid)
    feasible_total = 0
    best: OracleCandidate | None = None

    for j, level in enumerate(instance.levels):
        excess = feasibility_excess(
            ms[:, None], rhos[None, :], level.q, t_u[:, None], t_d[:, None], params
        )
        mask = np.ones((grid.n_m, grid.n_rho), dtype=bool)
        for value in excess.values():
            mask &= np.broadcast_to(value <= CONSTRAINT_TOLERANCE, mask.shape)
        feasible_total += int(mask.sum())

        g_values = np.asarray(level.g(rhos), dtype=float)
        stars = np.where(mask, g_values[None, :], -np.inf)
        rho_idx = np.argmax(stars, axis=1)
        best_stars = stars[np.arange(grid.n_m), rho_idx]
        rows = np.flatnonzero(np.isfinite(best_stars))
        if rows.size == 0:
            continue
        values = np.asarray(fusion.evaluate(ms[rows], best_stars[rows]), dtype=float)
        order = np.lexsort((-best_stars[rows], ms[rows], -values))
        i = int(rows[order[0]])
        candidate = OracleCandidate(
            m=float(ms[i]),
            rho=float(rhos[rho_idx[i]]),
            q=level.q,
            level_index=j,
            t_u=float(t_u[i]),
            t_d=float(t_d[i]),
            map_star=float(best_stars[i]),
            map_value=float(values[order[0]]),
        )
        if best is None or candidate._rank() > best._rank():
            best = candidate

    if best is None:
        raise DegenerateDomain("No feasible candidate on the grid")
    return best, feasible_total


def brute_force(
    instance: ProblemInstance,
    grid: GridSpec,
    *,
    budget: int = DEFAULT_ORACLE_BUDGET,
    trace: bool = False,
) -> OracleResult:
    """Search every (M, rho, q) grid tuple for the best feasible allocation.

    T_d is set to carry exactly M parameters and T_u takes the rest of the
    cycle. With ``trace`` every candidate goes through check_feasible one
    at a time and all feasible ones are returned; meant for small grids.
    """
    if not instance.params.m_hi > 0:
        raise DegenerateDomain(
            f"Parameter domain is empty (M_hi={instance.params.m_hi})"
        )
    evaluated = grid.candidates(len(instance.levels))
    if evaluated > budget:
        raise GridBudgetError(
            f"Grid has {evaluated} candidates, above the budget of {budget}"
        )

    _LOGGER.debug(
        "Brute force over %dx%dx%d grid", grid.n_m, grid.n_rho, len(instance.levels)
    )
    if trace:
        best, feasible, rows = _trace_search(instance, grid)
        return OracleResult(best, evaluated, feasible, rows)

    best, feasible = _vector_search(instance, grid)
    return OracleResult(best, evaluated, feasible)


def grid_tolerance(instance: ProblemInstance, grid: GridSpec) -> float:
    """Estimate how far the grid optimum can fall below the true optimum.

    Sum of the largest objective change across one M step (along the
    envelope) and the largest g change across one rho step.
    """
    envelope = build_envelope(instance)
    ms = np.linspace(0.0, instance.params.m_hi, grid.n_m)
    along_envelope = np.asarray(
        instance.fusion.evaluate(ms, envelope.values(ms)), dtype=float
    )
    m_step = float(np.max(np.abs(np.diff(along_envelope))))

    rhos = np.linspace(0.0, 1.0, grid.n_rho)
    rho_step = max(
        float(np.max(np.abs(np.diff(np.asarray(level.g(rhos), dtype=float)))))
        for level in instance.levels
    )
    return m_step + rho_step
