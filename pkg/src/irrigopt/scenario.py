"""Problem instance: crops, monthly hydrology, crop coefficients and system limits.

A :class:`Scenario` is validated in full when it is constructed and is
immutable afterwards, so it can be handed to any number of solver workers.
Validation is total: every violated invariant is collected into a
:class:`ValidationReport` before anything is raised.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np

MONTH_LABELS = ("Jan", "Feb", "Mar", "Apr", "May", "Jun",
                "Jul", "Aug", "Sep", "Oct", "Nov", "Dec")


@dataclass(frozen=True)
class Violation:
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def paths(self) -> list[str]:
        return [v.path for v in self.violations]

    def __str__(self) -> str:
        if self.ok:
            return "scenario is valid"
        return "; ".join(str(v) for v in self.violations)


class ScenarioValidationError(ValueError):
    """Raised when a scenario candidate breaks one or more invariants."""

    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__(str(report))


@dataclass(frozen=True)
class CropSpec:
    name: str
    gross_revenue_per_ha: float
    variable_cost_per_ha: float

    @property
    def margin_per_ha(self) -> float:
        return self.gross_revenue_per_ha - self.variable_cost_per_ha


@dataclass(frozen=True)
class MonthSpec:
    evapotranspiration: float   # GL/ha
    rainfall: float             # GL/ha
    inflow: float               # GL
    target_env_flow: float      # GL


@dataclass(frozen=True)
class SystemLimits:
    pump_cap_total: float
    area_total: float
    area_min_per_crop: float
    surface_cost_per_gl: float
    pump_cost_per_gl: float
    area_upper_per_crop: float = 5000.0
    env_flow_upper_per_month: float = 300.0


class CoefficientMatrix:
    """Crop coefficients, one row per crop and one column per month.

    The backing array is copied and marked read-only.
    """

    __slots__ = ("_values",)

    def __init__(self, values: Any):
        arr = np.array(values, dtype=float)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, 0)
        arr.setflags(write=False)
        self._values = arr

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def shape(self) -> tuple[int, ...]:
        return self._values.shape

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoefficientMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._values, other._values))

    def __hash__(self) -> int:
        return hash((self.shape, self._values.tobytes()))

    def __repr__(self) -> str:
        return f"CoefficientMatrix(shape={self.shape})"


def _check_nonneg(value: Any, path: str, out: list[Violation]) -> None:
    try:
        v = float(value)
    except (TypeError, ValueError):
        out.append(Violation(path, f"expected a number, got {value!r}"))
        return
    if not np.isfinite(v):
        out.append(Violation(path, f"must be finite, got {v}"))
    elif v < 0:
        out.append(Violation(path, f"must be >= 0, got {v:g}"))


def check_scenario(crops: Sequence[CropSpec], months: Sequence[MonthSpec],
                   coefficients: CoefficientMatrix, limits: SystemLimits) -> ValidationReport:
    """Collect every invariant violation of a scenario candidate."""
    out: list[Violation] = []

    if len(crops) == 0:
        out.append(Violation("crops", "at least one crop is required"))
    if len(months) == 0:
        out.append(Violation("months", "at least one month is required"))

    seen: dict[str, int] = {}
    for i, crop in enumerate(crops):
        if not isinstance(crop.name, str) or not crop.name.strip():
            out.append(Violation(f"crops[{i}].name", "must be a nonempty string"))
        elif crop.name in seen:
            out.append(Violation(f"crops[{i}].name",
                                 f"duplicate crop name {crop.name!r} (first at crops[{seen[crop.name]}])"))
        else:
            seen[crop.name] = i
        _check_nonneg(crop.gross_revenue_per_ha, f"crops[{i}].gross_revenue_per_ha", out)
        _check_nonneg(crop.variable_cost_per_ha, f"crops[{i}].variable_cost_per_ha", out)

    for j, month in enumerate(months):
        for name in ("evapotranspiration", "rainfall", "inflow", "target_env_flow"):
            _check_nonneg(getattr(month, name), f"months[{j}].{name}", out)

    shape = coefficients.shape
    expected = (len(crops), len(months))
    if shape != expected:
        out.append(Violation("coefficients",
                             f"dimension mismatch: got {shape}, expected {expected} (crops x months)"))
    else:
        bad = np.argwhere(~(coefficients.values >= 0))
        for c, m in bad[:10]:
            out.append(Violation(f"coefficients[{c}][{m}]",
                                 f"must be >= 0, got {coefficients.values[c, m]:g}"))

    limit_fields = ("pump_cap_total", "area_total", "area_min_per_crop", "surface_cost_per_gl",
                    "pump_cost_per_gl", "area_upper_per_crop", "env_flow_upper_per_month")
    for name in limit_fields:
        _check_nonneg(getattr(limits, name), f"limits.{name}", out)

    try:
        lo, hi = float(limits.area_min_per_crop), float(limits.area_upper_per_crop)
        total = float(limits.area_total)
    except (TypeError, ValueError):
        pass
    else:
        if lo > hi:
            out.append(Violation("limits.area_min_per_crop",
                                 f"minimum area {lo:g} exceeds per-crop upper bound {hi:g}"))
        if len(crops) * lo > total:
            out.append(Violation("limits.area_min_per_crop",
                                 f"infeasible minimum-area total: {len(crops)} x {lo:g} = "
                                 f"{len(crops) * lo:g} > area_total {total:g}"))

    return ValidationReport(tuple(out))


@dataclass(frozen=True)
class Scenario:
    crops: tuple[CropSpec, ...]
    months: tuple[MonthSpec, ...]
    coefficients: CoefficientMatrix
    limits: SystemLimits
    month_labels: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "crops", tuple(self.crops))
        object.__setattr__(self, "months", tuple(self.months))
        if not isinstance(self.coefficients, CoefficientMatrix):
            object.__setattr__(self, "coefficients", CoefficientMatrix(self.coefficients))
        report = check_scenario(self.crops, self.months, self.coefficients, self.limits)
        if not report.ok:
            raise ScenarioValidationError(report)
        if not self.month_labels:
            n = len(self.months)
            labels = MONTH_LABELS if n == 12 else tuple(f"M{j + 1}" for j in range(n))
            object.__setattr__(self, "month_labels", tuple(labels))

    @property
    def n_crops(self) -> int:
        return len(self.crops)

    @property
    def n_months(self) -> int:
        return len(self.months)

    @property
    def crop_names(self) -> list[str]:
        return [c.name for c in self.crops]

    # Array views used by the evaluator and the model builders.

    @property
    def revenue(self) -> np.ndarray:
        return np.array([c.gross_revenue_per_ha for c in self.crops], dtype=float)

    @property
    def variable_cost(self) -> np.ndarray:
        return np.array([c.variable_cost_per_ha for c in self.crops], dtype=float)

    @property
    def inflow(self) -> np.ndarray:
        return np.array([m.inflow for m in self.months], dtype=float)

    @property
    def target_env_flow(self) -> np.ndarray:
        return np.array([m.target_env_flow for m in self.months], dtype=float)

    @property
    def evapotranspiration(self) -> np.ndarray:
        return np.array([m.evapotranspiration for m in self.months], dtype=float)

    @property
    def rainfall(self) -> np.ndarray:
        return np.array([m.rainfall for m in self.months], dtype=float)

    def demand_matrix(self) -> np.ndarray:
        """Per-hectare water demand ``K[c, m] * ET[m] - R[m]`` (GL/ha), crops x months."""
        return self.coefficients.values * self.evapotranspiration[None, :] - self.rainfall[None, :]

    def permuted(self, order: Sequence[int]) -> "Scenario":
        """Same instance with crops reordered."""
        order = list(order)
        return Scenario(
            crops=tuple(self.crops[i] for i in order),
            months=self.months,
            coefficients=CoefficientMatrix(self.coefficients.values[order, :]),
            limits=self.limits,
            month_labels=self.month_labels,
        )


def crop_water_demand(s: Scenario, c: int, m: int) -> float:
    """Net irrigation need of crop ``c`` in month ``m`` in GL per hectare.

    Negative when rainfall exceeds the crop's evapotranspiration.
    """
    if not (0 <= c < s.n_crops):
        raise IndexError(f"crop index {c} out of range [0, {s.n_crops})")
    if not (0 <= m < s.n_months):
        raise IndexError(f"month index {m} out of range [0, {s.n_months})")
    month = s.months[m]
    return float(s.coefficients.values[c, m]) * month.evapotranspiration - month.rainfall


_CROP_KEYS = ("name", "gross_revenue_per_ha", "variable_cost_per_ha")
_MONTH_KEYS = ("evapotranspiration", "rainfall", "inflow", "target_env_flow")
_LIMIT_KEYS = ("pump_cap_total", "area_total", "area_min_per_crop", "surface_cost_per_gl",
               "pump_cost_per_gl", "area_upper_per_crop", "env_flow_upper_per_month")
_LIMIT_OPTIONAL = ("area_upper_per_crop", "env_flow_upper_per_month")
SECTIONS = ("crops", "months", "coefficients", "limits")


def _keyed_block(raw: Any, path: str, allowed: Sequence[str], optional: Sequence[str],
                 out: list[Violation]) -> dict[str, Any] | None:
    if not isinstance(raw, Mapping):
        out.append(Violation(path, f"expected a mapping, got {type(raw).__name__}"))
        return None
    for key in raw:
        if key not in allowed:
            out.append(Violation(f"{path}.{key}", "unknown key"))
    for key in allowed:
        if key not in raw and key not in optional:
            out.append(Violation(f"{path}.{key}", "missing required key"))
    return {k: raw[k] for k in allowed if k in raw}


def _number(value: Any, path: str, out: list[Violation]) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        out.append(Violation(path, f"expected a number, got {value!r}"))
        return float("nan")
    return float(value)


def validate_scenario(raw: Mapping[str, Any] | Scenario) -> Scenario:
    """Build a sealed :class:`Scenario` from a plain mapping.

    The mapping has exactly the sections ``crops``, ``months``,
    ``coefficients`` and ``limits`` with keys named after the dataclass
    fields. Unknown keys are violations. On failure a
    :class:`ScenarioValidationError` carrying the full report is raised.
    """
    if isinstance(raw, Scenario):
        return raw
    out: list[Violation] = []
    if not isinstance(raw, Mapping):
        raise ScenarioValidationError(ValidationReport((Violation("", "expected a mapping"),)))
    for key in raw:
        if key not in SECTIONS:
            out.append(Violation(str(key), "unknown section"))
    for key in SECTIONS:
        if key not in raw:
            out.append(Violation(key, "missing section"))
    if out:
        raise ScenarioValidationError(ValidationReport(tuple(out)))

    crops: list[CropSpec] = []
    if not isinstance(raw["crops"], Sequence) or isinstance(raw["crops"], str):
        out.append(Violation("crops", "expected a list"))
    else:
        for i, item in enumerate(raw["crops"]):
            block = _keyed_block(item, f"crops[{i}]", _CROP_KEYS, (), out)
            if block is None or len(block) < len(_CROP_KEYS):
                continue
            crops.append(CropSpec(
                name=block["name"] if isinstance(block["name"], str) else str(block["name"]),
                gross_revenue_per_ha=_number(block["gross_revenue_per_ha"],
                                             f"crops[{i}].gross_revenue_per_ha", out),
                variable_cost_per_ha=_number(block["variable_cost_per_ha"],
                                             f"crops[{i}].variable_cost_per_ha", out),
            ))

    months: list[MonthSpec] = []
    if not isinstance(raw["months"], Sequence) or isinstance(raw["months"], str):
        out.append(Violation("months", "expected a list"))
    else:
        for j, item in enumerate(raw["months"]):
            block = _keyed_block(item, f"months[{j}]", _MONTH_KEYS, (), out)
            if block is None or len(block) < len(_MONTH_KEYS):
                continue
            months.append(MonthSpec(**{k: _number(block[k], f"months[{j}].{k}", out)
                                       for k in _MONTH_KEYS}))

    coeffs = raw["coefficients"]
    matrix = None
    try:
        matrix = CoefficientMatrix(coeffs)
        if matrix.values.ndim != 2:
            out.append(Violation("coefficients", "expected a list of rows (crops x months)"))
            matrix = None
    except (TypeError, ValueError):
        out.append(Violation("coefficients", "expected a rectangular numeric matrix"))

    limits = None
    block = _keyed_block(raw["limits"], "limits", _LIMIT_KEYS, _LIMIT_OPTIONAL, out)
    if block is not None and all(k in block for k in _LIMIT_KEYS if k not in _LIMIT_OPTIONAL):
        limits = SystemLimits(**{k: _number(v, f"limits.{k}", out) for k, v in block.items()})

    if matrix is not None and limits is not None:
        # invariant checks run even after structural problems, so the report is total
        seen = {v.path for v in out}
        out.extend(v for v in check_scenario(crops, months, matrix, limits).violations
                   if v.path not in seen)
    if out or matrix is None or limits is None:
        raise ScenarioValidationError(ValidationReport(tuple(out)))
    return Scenario(crops=tuple(crops), months=tuple(months), coefficients=matrix, limits=limits)


def scenario_to_dict(s: Scenario) -> dict[str, Any]:
    """Plain-data form of a scenario, the inverse of :func:`validate_scenario`."""
    return {
        "crops": [{k: getattr(c, k) for k in _CROP_KEYS} for c in s.crops],
        "months": [{k: getattr(m, k) for k in _MONTH_KEYS} for m in s.months],
        "coefficients": s.coefficients.values.tolist(),
        "limits": {k: getattr(s.limits, k) for k in _LIMIT_KEYS},
    }
