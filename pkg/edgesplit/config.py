"""Instance documents: schemas, loading and structural validation."""

from __future__ import annotations

import dataclasses
import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import voluptuous as vol

from .const import (
    CONCAVITY_TOLERANCE,
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
    CONF_SOLVER,
    DEFAULT_CROSSING_SCAN_POINTS,
    DEFAULT_ORACLE_BUDGET,
    DEFAULT_REFINE_TOLERANCE,
    DEFAULT_SEGMENT_SAMPLES,
    G_FAMILY_EXP_SATURATION,
    G_FAMILY_LOG_SATURATION,
    G_FAMILY_QUADRATIC,
    G_FAMILY_TABULATED,
    MAX_CROSSING_SCAN_POINTS,
    MAX_REFINE_TOLERANCE,
    MAX_SEGMENT_SAMPLES,
    MIN_CROSSING_SCAN_POINTS,
    MIN_REFINE_TOLERANCE,
    MIN_SEGMENT_SAMPLES,
    PARAM_KEYS,
    PARAM_PARAM_BITS,
    PHI_FAMILY_EXP_SATURATION,
    PHI_FAMILY_IDENTITY,
    PHI_FAMILY_POWER,
    RANGE_TOLERANCE,
)
from .curves import (
    BlendCurve,
    ExpSaturationBlend,
    ExpSaturationCurve,
    LogSaturationCurve,
    PowerBlend,
    QuadraticCurve,
    TabulatedCurve,
    UplinkCurve,
)
from .model import (
    ConcavityViolation,
    EmptyLevelSet,
    FusionModel,
    InstanceValidationError,
    MonotonicityViolation,
    NonpositiveParam,
    ProblemInstance,
    QuantLevelModel,
    RangeViolation,
    SchemaViolation,
    StructuralViolation,
    SystemParams,
)

_LOGGER = logging.getLogger(__name__)


def _number(value: Any) -> float:
    """Accept ints and floats (not bools or strings) as floats."""
    if isinstance(value, bool) or not isinstance(value, int | float):
        raise vol.Invalid(f"expected a number, got {value!r}")
    return float(value)


_SATURATION_COEFFS = vol.Schema(
    {
        vol.Required("m0"): _number,
        vol.Required("a"): _number,
        vol.Required("k"): _number,
    }
)

G_COEFF_SCHEMAS = {
    G_FAMILY_QUADRATIC: vol.Schema(
        {
            vol.Required("a"): _number,
            vol.Required("c"): _number,
            vol.Optional("d", default=0.0): _number,
        }
    ),
    G_FAMILY_LOG_SATURATION: _SATURATION_COEFFS,
    G_FAMILY_EXP_SATURATION: _SATURATION_COEFFS,
}

PHI_COEFF_SCHEMAS = {
    PHI_FAMILY_POWER: vol.Schema({vol.Required("gamma"): _number}),
    PHI_FAMILY_EXP_SATURATION: vol.Schema({vol.Required("k"): _number}),
    PHI_FAMILY_IDENTITY: vol.Schema({}),
}

TABULATED_SCHEMA = vol.Schema(
    {
        vol.Required(CONF_FAMILY): G_FAMILY_TABULATED,
        vol.Required(CONF_POINTS): vol.All(
            [vol.ExactSequence([_number, _number])], vol.Length(min=2)
        ),
    }
)


def _family_schema(
    coeff_schemas: dict[str, vol.Schema], tabulated: bool
) -> Any:
    """Build a validator dispatching on the ``family`` key."""
    families = sorted(coeff_schemas) + ([G_FAMILY_TABULATED] if tabulated else [])

    def validate(value: Any) -> dict[str, Any]:
        if not isinstance(value, dict):
            raise vol.Invalid("expected an object")
        family = value.get(CONF_FAMILY)
        if family not in families:
            raise vol.Invalid(
                f"unknown family {family!r}, expected one of {families}",
                path=[CONF_FAMILY],
            )
        if family == G_FAMILY_TABULATED:
            return TABULATED_SCHEMA(value)
        schema = vol.Schema(
            {
                vol.Required(CONF_FAMILY): family,
                vol.Optional(CONF_COEFFS, default={}): coeff_schemas[family],
            }
        )
        return schema(value)

    return validate


LEVEL_SCHEMA = vol.Schema(
    {
        vol.Required(CONF_Q): _number,
        vol.Required(CONF_G): _family_schema(G_COEFF_SCHEMAS, tabulated=True),
    }
)

FUSION_SCHEMA = vol.Schema(
    {
        vol.Required(CONF_MAP_PRE): _number,
        vol.Required(CONF_PHI): _family_schema(PHI_COEFF_SCHEMAS, tabulated=False),
    }
)

SOLVER_OPTIONS_SCHEMA = vol.Schema(
    {
        vol.Optional("segment_samples", default=DEFAULT_SEGMENT_SAMPLES): vol.All(
            vol.Coerce(int),
            vol.Range(min=MIN_SEGMENT_SAMPLES, max=MAX_SEGMENT_SAMPLES),
        ),
        vol.Optional(
            "crossing_scan_points", default=DEFAULT_CROSSING_SCAN_POINTS
        ): vol.All(
            vol.Coerce(int),
            vol.Range(min=MIN_CROSSING_SCAN_POINTS, max=MAX_CROSSING_SCAN_POINTS),
        ),
        vol.Optional("refine_tolerance", default=DEFAULT_REFINE_TOLERANCE): vol.All(
            vol.Coerce(float),
            vol.Range(min=MIN_REFINE_TOLERANCE, max=MAX_REFINE_TOLERANCE),
        ),
        vol.Optional("oracle_budget", default=DEFAULT_ORACLE_BUDGET): vol.All(
            vol.Coerce(int), vol.Range(min=1)
        ),
    }
)

INSTANCE_SCHEMA = vol.Schema(
    {
        vol.Optional("name"): str,
        vol.Optional("description"): str,
        vol.Required(CONF_PARAMS): vol.Schema(
            {vol.Required(key): _number for key in PARAM_KEYS}
        ),
        vol.Required(CONF_LEVELS): [LEVEL_SCHEMA],
        vol.Required(CONF_FUSION): FUSION_SCHEMA,
        vol.Optional(CONF_SOLVER, default={}): SOLVER_OPTIONS_SCHEMA,
    }
)


@dataclass(frozen=True)
class SolverOptions:
    """Tunables of the envelope builder, solver and oracle."""

    segment_samples: int = DEFAULT_SEGMENT_SAMPLES
    crossing_scan_points: int = DEFAULT_CROSSING_SCAN_POINTS
    refine_tolerance: float = DEFAULT_REFINE_TOLERANCE
    oracle_budget: int = DEFAULT_ORACLE_BUDGET

    @classmethod
    def from_config(cls, data: dict[str, Any] | None = None) -> SolverOptions:
        """Create from the optional ``solver`` object of an instance document."""
        try:
            options = SOLVER_OPTIONS_SCHEMA(data or {})
        except vol.MultipleInvalid as err:
            raise _schema_error(err, prefix=CONF_SOLVER) from err
        return cls(**options)

    def merged(self, **overrides: Any) -> SolverOptions:
        """Return a copy with the non-None overrides applied and re-checked."""
        data = dataclasses.asdict(self)
        data.update({k: v for k, v in overrides.items() if v is not None})
        return SolverOptions.from_config(data)


def _schema_error(
    err: vol.MultipleInvalid, prefix: str | None = None
) -> InstanceValidationError:
    """Translate voluptuous errors into a validation report."""
    violations: list[StructuralViolation] = []
    for error in err.errors:
        path = [prefix] if prefix else []
        path += [str(p) for p in error.path]
        location = ".".join(path) or "<root>"
        violations.append(SchemaViolation(f"{location}: {error.msg}"))
    return InstanceValidationError(violations)


def load_document(path: str | Path) -> dict[str, Any]:
    """Read an instance JSON document."""
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as err:
        raise InstanceValidationError(
            [SchemaViolation(f"cannot read {path}: {err}")]
        ) from err
    except json.JSONDecodeError as err:
        raise InstanceValidationError(
            [SchemaViolation(f"{path} is not valid JSON: {err}")]
        ) from err
    if not isinstance(data, dict):
        raise InstanceValidationError(
            [SchemaViolation(f"{path}: top level must be an object")]
        )
    return data


def parse_document(data: dict[str, Any]) -> tuple[ProblemInstance, SolverOptions]:
    """Check a document against the schema and build the instance and options."""
    try:
        checked = INSTANCE_SCHEMA(data)
    except vol.MultipleInvalid as err:
        raise _schema_error(err) from err

    params = SystemParams.from_config(checked[CONF_PARAMS])
    levels = tuple(QuantLevelModel.from_config(level) for level in checked[CONF_LEVELS])
    fusion = FusionModel.from_config(checked[CONF_FUSION], params.max_params)
    instance = ProblemInstance(params=params, levels=levels, fusion=fusion)
    return instance, SolverOptions(**checked[CONF_SOLVER])


def parse_instance(data: dict[str, Any]) -> ProblemInstance:
    """Build an (unvalidated) instance from a document."""
    instance, _ = parse_document(data)
    return instance


def load_instance(path: str | Path) -> tuple[ProblemInstance, SolverOptions]:
    """Read, parse and validate an instance file."""
    instance, options = parse_document(load_document(path))
    return validate_instance(instance), options


def _check_params(params: SystemParams) -> list[StructuralViolation]:
    violations: list[StructuralViolation] = []
    for key, value in params.as_config().items():
        if not math.isfinite(value) or value <= 0:
            violations.append(
                NonpositiveParam(f"params.{key} must be positive, got {value}")
            )
    bits = params.param_bits
    if math.isfinite(bits) and bits > 0 and not float(bits).is_integer():
        violations.append(
            NonpositiveParam(
                f"params.{PARAM_PARAM_BITS} must be a positive integer, got {bits}"
            )
        )
    return violations


def _check_uplink_curve(j: int, g: UplinkCurve) -> list[StructuralViolation]:
    where = f"levels[{j}].g"
    violations: list[StructuralViolation] = []

    if isinstance(g, TabulatedCurve):
        xs = [x for x, _ in g.points]
        ys = [y for _, y in g.points]
        if not all(math.isfinite(v) for v in xs + ys):
            return [RangeViolation(f"{where}: points must be finite")]
        if any(b <= a for a, b in zip(xs, xs[1:], strict=False)):
            return [RangeViolation(f"{where}: rho values must strictly increase")]
        if xs[0] != 0.0 or xs[-1] != 1.0:
            violations.append(
                RangeViolation(f"{where}: points must span rho = 0 to rho = 1")
            )
    else:
        coeffs = g.as_config()[CONF_COEFFS]
        if not all(math.isfinite(v) for v in coeffs.values()):
            return [RangeViolation(f"{where}: coefficients must be finite")]
        if isinstance(g, QuadraticCurve) and g.d < 0:
            violations.append(
                ConcavityViolation(f"{where}: quadratic needs d >= 0, got {g.d}")
            )
        if isinstance(g, LogSaturationCurve | ExpSaturationCurve) and g.k <= 0:
            violations.append(NonpositiveParam(f"{where}: k must be positive"))
        if violations:
            return violations

    defect = g.concavity_defect()
    if defect > CONCAVITY_TOLERANCE:
        violations.append(
            ConcavityViolation(f"{where}: not concave (defect {defect:.3g})")
        )
    lo, hi = g.value_range()
    if lo < -RANGE_TOLERANCE or hi > 1.0 + RANGE_TOLERANCE:
        violations.append(
            RangeViolation(f"{where}: values must lie in [0, 1], got [{lo}, {hi}]")
        )
    return violations


def _check_blend_curve(phi: BlendCurve) -> list[StructuralViolation]:
    where = f"{CONF_FUSION}.{CONF_PHI}"
    coeffs = phi.as_config()[CONF_COEFFS]
    if not all(math.isfinite(v) for v in coeffs.values()):
        return [RangeViolation(f"{where}: coefficients must be finite")]
    if isinstance(phi, PowerBlend) and phi.gamma <= 0:
        return [NonpositiveParam(f"{where}: gamma must be positive")]
    if isinstance(phi, ExpSaturationBlend) and phi.k <= 0:
        return [NonpositiveParam(f"{where}: k must be positive")]
    if phi.smallest_step() <= 0:
        return [MonotonicityViolation(f"{where}: not strictly increasing")]
    return []


def validate_instance(instance: ProblemInstance) -> ProblemInstance:
    """Check every structural assumption and annotate the instance.

    Returns a copy carrying each level's rho_best and any load-time
    warnings. Raises InstanceValidationError listing every violation found.
    """
    violations = _check_params(instance.params)

    if not instance.levels:
        violations.append(EmptyLevelSet("at least one quantization level is needed"))

    seen: set[float] = set()
    for j, level in enumerate(instance.levels):
        if not math.isfinite(level.q) or level.q <= 0:
            violations.append(
                NonpositiveParam(f"levels[{j}].q must be positive, got {level.q}")
            )
        elif level.q in seen:
            violations.append(RangeViolation(f"levels[{j}].q duplicates {level.q}"))
        seen.add(level.q)
        violations.extend(_check_uplink_curve(j, level.g))

    map_pre = instance.fusion.map_pre
    if not 0.0 <= map_pre <= 1.0:
        violations.append(
            RangeViolation(f"{CONF_FUSION}.{CONF_MAP_PRE} must lie in [0, 1]")
        )
    violations.extend(_check_blend_curve(instance.fusion.phi))

    if violations:
        raise InstanceValidationError(violations)

    rho_best = tuple(level.g.argmax() for level in instance.levels)
    plateaus = [
        float(level.g(rho))
        for level, rho in zip(instance.levels, rho_best, strict=True)
    ]
    warnings: list[str] = []
    if min(plateaus) < map_pre:
        warnings.append(
            f"level q={instance.levels[plateaus.index(min(plateaus))].q} peaks at "
            f"{min(plateaus):.4g}, below mAP_pre={map_pre:.4g}; updating with it "
            "can lower the end model's mAP"
        )
    for message in warnings:
        _LOGGER.warning(message)

    _LOGGER.debug(
        "Validated instance with %d level(s), M_hi=%.6g",
        len(instance.levels),
        instance.params.m_hi,
    )
    return dataclasses.replace(instance, rho_best=rho_best, warnings=tuple(warnings))
