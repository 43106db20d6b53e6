"""Parameter sweeps and baseline comparators."""

from __future__ import annotations

import asyncio
import dataclasses
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

import numpy as np

from .config import SolverOptions, validate_instance
from .const import (
    BASELINE_FIXED_STRATEGY,
    BASELINE_NONE_UPDATE,
    DEFAULT_SWEEP_CONCURRENCY,
    MAX_SWEEP_CONCURRENCY,
    STATUS_DEGENERATE,
    STATUS_ERROR,
    STATUS_INVALID,
    STATUS_OK,
    SWEEP_PARAMS,
)
from .model import (
    DegenerateDomain,
    InstanceValidationError,
    ProblemInstance,
    SweepSpecError,
    check_feasible,
)
from .solver import solve

_LOGGER = logging.getLogger(__name__)


class Baseline(Protocol):
    """A non-optimising allocation policy compared against the solver."""

    name: str

    def check(self, instance: ProblemInstance) -> None:
        """Raise SweepSpecError if the policy does not fit the instance."""

    def evaluate(self, instance: ProblemInstance) -> float:
        """Return the end model's mAP under the policy."""


@dataclass(frozen=True)
class NoneUpdateBaseline:
    """Distributed computing framework: the end model is never updated."""

    name: str = BASELINE_NONE_UPDATE

    def check(self, instance: ProblemInstance) -> None:
        return None

    def evaluate(self, instance: ProblemInstance) -> float:
        return instance.fusion.map_pre


@dataclass(frozen=True)
class FixedStrategyBaseline:
    """Non-adaptive policy holding rho, q and M fixed across a sweep.

    M is clipped to the point's domain; a point where the fixed upload
    proportion does not fit in the remaining uplink time scores mAP_pre.
    """

    rho_fix: float
    q_fix: float
    m_fix: float
    name: str = BASELINE_FIXED_STRATEGY

    def check(self, instance: ProblemInstance) -> None:
        if not 0.0 <= self.rho_fix <= 1.0:
            raise SweepSpecError(f"Fixed rho must lie in [0, 1], got {self.rho_fix}")
        if self.q_fix not in instance.level_values:
            raise SweepSpecError(
                f"Fixed q={self.q_fix} is not one of {instance.level_values}"
            )
        if not 0.0 <= self.m_fix <= instance.params.max_params:
            raise SweepSpecError(
                f"Fixed M must lie in [0, {instance.params.max_params}], "
                f"got {self.m_fix}"
            )

    def evaluate(self, instance: ProblemInstance) -> float:
        params = instance.params
        m = min(self.m_fix, max(params.m_hi, 0.0))
        t_d = min(
            m * params.param_bits / (params.bandwidth * params.downlink_efficiency),
            params.total_time,
        )
        t_u = params.total_time - t_d
        if not check_feasible(m, self.rho_fix, self.q_fix, t_u, t_d, instance):
            return instance.fusion.map_pre
        j = instance.level_values.index(self.q_fix)
        star = float(instance.levels[j].g(self.rho_fix))
        return float(instance.fusion.evaluate(m, star))


@dataclass(frozen=True)
class SweepSpec:
    """Which parameter to sweep, over which values, against which baselines."""

    param: str
    values: tuple[float, ...]
    baselines: tuple[Baseline, ...] = ()
    output: Path | None = None

    def __post_init__(self) -> None:
        if self.param not in SWEEP_PARAMS:
            raise SweepSpecError(
                f"Cannot sweep {self.param!r}, expected one of {SWEEP_PARAMS}"
            )
        if not self.values:
            raise SweepSpecError("Sweep needs at least one value")
        if any(not math.isfinite(v) or v <= 0 for v in self.values):
            raise SweepSpecError("Swept values must be finite and positive")
        if any(b <= a for a, b in zip(self.values, self.values[1:], strict=False)):
            raise SweepSpecError("Swept values must be strictly increasing")
        names = [baseline.name for baseline in self.baselines]
        if len(set(names)) != len(names):
            raise SweepSpecError(f"Duplicate baselines: {names}")

    @classmethod
    def from_range(
        cls,
        param: str,
        start: float,
        stop: float,
        steps: int,
        *,
        log: bool = False,
        baselines: tuple[Baseline, ...] = (),
        output: Path | None = None,
    ) -> SweepSpec:
        """Create a sweep over ``steps`` values from start to stop inclusive."""
        if steps < 1:
            raise SweepSpecError(f"Sweep needs at least one step, got {steps}")
        if steps == 1:
            values = np.array([start], dtype=float)
        elif log:
            if start <= 0 or stop <= 0:
                raise SweepSpecError("Geometric sweeps need positive bounds")
            values = np.geomspace(start, stop, steps)
        else:
            values = np.linspace(start, stop, steps)
        return cls(
            param=param,
            values=tuple(float(v) for v in values),
            baselines=baselines,
            output=output,
        )

    @property
    def baseline_names(self) -> tuple[str, ...]:
        """Names of the baselines, in column order."""
        return tuple(baseline.name for baseline in self.baselines)


@dataclass(frozen=True)
class SweepRow:
    """Solver and baseline results at one swept value."""

    param: str
    value: float
    status: str
    map_opt: float | None = None
    baseline_maps: dict[str, float | None] = field(default_factory=dict)
    m_opt: float | None = None
    q_opt: float | None = None
    rho_opt: float | None = None
    t_u_opt: float | None = None
    t_d_opt: float | None = None
    uplink_bits: float | None = None
    downlink_bits: float | None = None
    uplink_fraction: float | None = None
    downlink_fraction: float | None = None


@dataclass(frozen=True)
class OverheadSplit:
    """Shares of the cycle's bits spent on the data and model streams."""

    uplink_fraction: float
    downlink_fraction: float
    defined: bool = True


def overhead_split(row: SweepRow) -> OverheadSplit:
    """Normalise the uplink and downlink bit budgets of a solved row."""
    uplink = row.uplink_bits or 0.0
    downlink = row.downlink_bits or 0.0
    total = uplink + downlink
    if total <= 0:
        return OverheadSplit(0.0, 0.0, defined=False)
    return OverheadSplit(uplink / total, downlink / total)


def _solve_point(
    instance: ProblemInstance,
    spec: SweepSpec,
    value: float,
    options: SolverOptions | None,
) -> SweepRow:
    """Solve one sweep point, recording failures in the row."""
    try:
        point = validate_instance(instance.with_param(spec.param, value))
        result = solve(point, options)
        baseline_maps: dict[str, float | None] = {
            baseline.name: baseline.evaluate(point) for baseline in spec.baselines
        }
    except InstanceValidationError as err:
        _LOGGER.warning("Sweep point %s=%s is invalid: %s", spec.param, value, err)
        return SweepRow(spec.param, value, STATUS_INVALID)
    except DegenerateDomain as err:
        _LOGGER.warning("Sweep point %s=%s is degenerate: %s", spec.param, value, err)
        return SweepRow(spec.param, value, STATUS_DEGENERATE)
    except Exception:
        _LOGGER.exception("Unexpected error at sweep point %s=%s", spec.param, value)
        return SweepRow(spec.param, value, STATUS_ERROR)

    params = point.params
    uplink_bits = params.bandwidth * params.uplink_efficiency * result.t_u_opt
    downlink_bits = params.bandwidth * params.downlink_efficiency * result.t_d_opt
    row = SweepRow(
        param=spec.param,
        value=value,
        status=STATUS_DEGENERATE if result.diagnostics.no_downlink else STATUS_OK,
        map_opt=result.map_opt,
        baseline_maps=baseline_maps,
        m_opt=result.m_opt,
        q_opt=result.q_opt,
        rho_opt=result.rho_opt,
        t_u_opt=result.t_u_opt,
        t_d_opt=result.t_d_opt,
        uplink_bits=uplink_bits,
        downlink_bits=downlink_bits,
    )
    split = overhead_split(row)
    if not split.defined:
        return row
    return dataclasses.replace(
        row,
        uplink_fraction=split.uplink_fraction,
        downlink_fraction=split.downlink_fraction,
    )


async def async_run_sweep(
    instance: ProblemInstance,
    spec: SweepSpec,
    *,
    options: SolverOptions | None = None,
    concurrency: int = DEFAULT_SWEEP_CONCURRENCY,
) -> list[SweepRow]:
    """Solve every sweep point on worker threads.

    At most ``concurrency`` points run at once. Rows come back in swept
    order whatever the completion order.
    """
    if not 1 <= concurrency <= MAX_SWEEP_CONCURRENCY:
        raise SweepSpecError(
            f"Concurrency must lie in [1, {MAX_SWEEP_CONCURRENCY}], got {concurrency}"
        )
    for baseline in spec.baselines:
        baseline.check(instance)

    semaphore = asyncio.Semaphore(concurrency)

    async def run_point(value: float) -> SweepRow:
        async with semaphore:
            return await asyncio.to_thread(_solve_point, instance, spec, value, options)

    rows = await asyncio.gather(*(run_point(value) for value in spec.values))
    failed = sum(1 for row in rows if row.status != STATUS_OK)
    _LOGGER.debug(
        "Sweep over %s: %d point(s), %d not ok", spec.param, len(rows), failed
    )
    return list(rows)


def run_sweep(
    instance: ProblemInstance,
    spec: SweepSpec,
    *,
    options: SolverOptions | None = None,
    concurrency: int = DEFAULT_SWEEP_CONCURRENCY,
) -> list[SweepRow]:
    """Synchronous wrapper around async_run_sweep."""
    return asyncio.run(
        async_run_sweep(instance, spec, options=options, concurrency=concurrency)
    )
