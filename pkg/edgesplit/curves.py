"""Performance curve families.

Two families of scalar curves drive the allocation problem:

* uplink curves ``g_j(rho)`` map the uploaded data proportion to the update
  performance mAP* of the edge model for one quantization level, and
* blend curves ``phi(u)`` shape how the end model moves from ``mAP_pre`` to
  ``mAP*`` as the transmitted share ``u = M / M_max`` of the model grows.

All curves accept floats or numpy arrays.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, ClassVar

import numpy as np
from numpy.typing import ArrayLike

from .const import (
    ARGMAX_TOLERANCE,
    CONF_COEFFS,
    CONF_FAMILY,
    CONF_POINTS,
    G_FAMILY_EXP_SATURATION,
    G_FAMILY_LOG_SATURATION,
    G_FAMILY_QUADRATIC,
    G_FAMILY_TABULATED,
    PHI_FAMILY_EXP_SATURATION,
    PHI_FAMILY_IDENTITY,
    PHI_FAMILY_POWER,
    SHAPE_SAMPLE_POINTS,
)
from .search import golden_section_max

_SAMPLE_GRID = np.linspace(0.0, 1.0, SHAPE_SAMPLE_POINTS)


class UplinkCurve(ABC):
    """Concave curve rho in [0, 1] -> mAP* for one quantization level."""

    family: ClassVar[str]

    @abstractmethod
    def __call__(self, rho: ArrayLike) -> Any:
        """Evaluate the curve."""

    @abstractmethod
    def as_config(self) -> dict[str, Any]:
        """Return the instance-document form of the curve."""

    def argmax(self) -> float:
        """Return the smallest maximiser of the curve on [0, 1]."""
        result = golden_section_max(
            lambda rho: float(self(rho)), 0.0, 1.0, ARGMAX_TOLERANCE
        )
        return result.argmax

    def concavity_defect(self) -> float:
        """Largest midpoint-triple violation of concavity on the sample grid.

        Non-positive for a concave curve.
        """
        values = np.asarray(self(_SAMPLE_GRID), dtype=float)
        chords = 0.5 * (values[:-2] + values[2:])
        return float(np.max(chords - values[1:-1]))

    def value_range(self) -> tuple[float, float]:
        """Return (min, max) of the curve over the sample grid."""
        values = np.asarray(self(_SAMPLE_GRID), dtype=float)
        return float(values.min()), float(values.max())


@dataclass(frozen=True)
class QuadraticCurve(UplinkCurve):
    """g(rho) = a + c*rho - d*rho^2 with d >= 0."""

    family: ClassVar[str] = G_FAMILY_QUADRATIC

    a: float
    c: float
    d: float = 0.0

    def __call__(self, rho: ArrayLike) -> Any:
        rho = np.asarray(rho, dtype=float)
        return self.a + self.c * rho - self.d * rho * rho

    def argmax(self) -> float:
        # Vertex of the parabola, clipped into [0, 1]
        if self.d > 0:
            return float(np.clip(self.c / (2.0 * self.d), 0.0, 1.0))
        return 1.0 if self.c > 0 else 0.0

    def as_config(self) -> dict[str, Any]:
        return {
            CONF_FAMILY: self.family,
            CONF_COEFFS: {"a": self.a, "c": self.c, "d": self.d},
        }


@dataclass(frozen=True)
class LogSaturationCurve(UplinkCurve):
    """g(rho) = m0 + a * ln(1 + k*rho) / ln(1 + k) with k > 0."""

    family: ClassVar[str] = G_FAMILY_LOG_SATURATION

    m0: float
    a: float
    k: float

    def __call__(self, rho: ArrayLike) -> Any:
        rho = np.asarray(rho, dtype=float)
        return self.m0 + self.a * np.log1p(self.k * rho) / np.log1p(self.k)

    def as_config(self) -> dict[str, Any]:
        return {
            CONF_FAMILY: self.family,
            CONF_COEFFS: {"m0": self.m0, "a": self.a, "k": self.k},
        }


@dataclass(frozen=True)
class ExpSaturationCurve(UplinkCurve):
    """g(rho) = m0 + a * (1 - exp(-k*rho)) with k > 0."""

    family: ClassVar[str] = G_FAMILY_EXP_SATURATION

    m0: float
    a: float
    k: float

    def __call__(self, rho: ArrayLike) -> Any:
        rho = np.asarray(rho, dtype=float)
        return self.m0 - self.a * np.expm1(-self.k * rho)

    def as_config(self) -> dict[str, Any]:
        return {
            CONF_FAMILY: self.family,
            CONF_COEFFS: {"m0": self.m0, "a": self.a, "k": self.k},
        }


@dataclass(frozen=True)
class TabulatedCurve(UplinkCurve):
    """Measured (rho, mAP*) points joined by straight lines.

    Piecewise-linear interpolation of concave data stays concave, so the
    concavity test only needs the slopes between consecutive points.
    """

    family: ClassVar[str] = G_FAMILY_TABULATED

    points: tuple[tuple[float, float], ...]
    _xs: np.ndarray = field(init=False, repr=False, compare=False)
    _ys: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        xs = np.array([p[0] for p in self.points], dtype=float)
        ys = np.array([p[1] for p in self.points], dtype=float)
        object.__setattr__(self, "_xs", xs)
        object.__setattr__(self, "_ys", ys)

    def __call__(self, rho: ArrayLike) -> Any:
        return np.interp(np.asarray(rho, dtype=float), self._xs, self._ys)

    @property
    def slopes(self) -> np.ndarray:
        """Slopes of the segments between consecutive points."""
        return np.diff(self._ys) / np.diff(self._xs)

    def argmax(self) -> float:
        # A concave polyline peaks at one of its points
        return float(self._xs[int(np.argmax(self._ys))])

    def concavity_defect(self) -> float:
        if len(self.points) < 3:
            return float("-inf")
        return float(np.max(np.diff(self.slopes)))

    def value_range(self) -> tuple[float, float]:
        return float(self._ys.min()), float(self._ys.max())

    def as_config(self) -> dict[str, Any]:
        return {
            CONF_FAMILY: self.family,
            CONF_POINTS: [[x, y] for x, y in self.points],
        }


class BlendCurve(ABC):
    """Increasing curve phi: [0, 1] -> [0, 1] with phi(0) = 0 and phi(1) = 1."""

    family: ClassVar[str]

    @abstractmethod
    def __call__(self, u: ArrayLike) -> Any:
        """Evaluate the curve."""

    @abstractmethod
    def as_config(self) -> dict[str, Any]:
        """Return the instance-document form of the curve."""

    def smallest_step(self) -> float:
        """Smallest increase between consecutive sample points.

        Positive for a strictly increasing curve.
        """
        values = np.asarray(self(_SAMPLE_GRID), dtype=float)
        return float(np.min(np.diff(values)))


@dataclass(frozen=True)
class PowerBlend(BlendCurve):
    """phi(u) = u^gamma with gamma > 0."""

    family: ClassVar[str] = PHI_FAMILY_POWER

    gamma: float

    def __call__(self, u: ArrayLike) -> Any:
        return np.power(np.asarray(u, dtype=float), self.gamma)

    def as_config(self) -> dict[str, Any]:
        return {CONF_FAMILY: self.family, CONF_COEFFS: {"gamma": self.gamma}}


@dataclass(frozen=True)
class ExpSaturationBlend(BlendCurve):
    """phi(u) = (1 - exp(-k*u)) / (1 - exp(-k)) with k > 0."""

    family: ClassVar[str] = PHI_FAMILY_EXP_SATURATION

    k: float

    def __call__(self, u: ArrayLike) -> Any:
        u = np.asarray(u, dtype=float)
        return np.expm1(-self.k * u) / np.expm1(-self.k)

    def as_config(self) -> dict[str, Any]:
        return {CONF_FAMILY: self.family, CONF_COEFFS: {"k": self.k}}


@dataclass(frozen=True)
class IdentityBlend(BlendCurve):
    """phi(u) = u."""

    family: ClassVar[str] = PHI_FAMILY_IDENTITY

    def __call__(self, u: ArrayLike) -> Any:
        return np.asarray(u, dtype=float)

    def as_config(self) -> dict[str, Any]:
        return {CONF_FAMILY: self.family, CONF_COEFFS: {}}


UPLINK_FAMILIES: dict[str, type[UplinkCurve]] = {
    G_FAMILY_QUADRATIC: QuadraticCurve,
    G_FAMILY_LOG_SATURATION: LogSaturationCurve,
    G_FAMILY_EXP_SATURATION: ExpSaturationCurve,
}

BLEND_FAMILIES: dict[str, type[BlendCurve]] = {
    PHI_FAMILY_POWER: PowerBlend,
    PHI_FAMILY_EXP_SATURATION: ExpSaturationBlend,
    PHI_FAMILY_IDENTITY: IdentityBlend,
}


def uplink_curve_from_config(data: dict[str, Any]) -> UplinkCurve:
    """Create an uplink curve from its (schema-checked) document form."""
    family = data[CONF_FAMILY]
    if family == G_FAMILY_TABULATED:
        points = tuple((float(x), float(y)) for x, y in data[CONF_POINTS])
        return TabulatedCurve(points=points)
    return UPLINK_FAMILIES[family](**data.get(CONF_COEFFS, {}))


def blend_curve_from_config(data: dict[str, Any]) -> BlendCurve:
    """Create a blend curve from its (schema-checked) document form."""
    return BLEND_FAMILIES[data[CONF_FAMILY]](**data.get(CONF_COEFFS, {}))
