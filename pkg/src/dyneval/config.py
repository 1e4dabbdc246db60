"""Run configuration: scales, weights, corridors, and selection/forecast knobs."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .aggregation import WeightProfile
from .errors import ValidationError
from .scales import ScaleConfig
from .selection import DEFAULT_EPS
from .signals import Corridor, Metric, SamplingGrid, h_max_for

SCHEMA_VERSION = "1.0"


def check_schema_version(document: dict, what: str) -> None:
    """Reject documents whose major schema version is unknown."""
    from .errors import SchemaVersionError

    version = document.get("schema_version")
    if not isinstance(version, str) or "." not in version:
        raise SchemaVersionError(f"{what} is missing a schema_version field")
    major = version.split(".", 1)[0]
    if major != SCHEMA_VERSION.split(".", 1)[0]:
        raise SchemaVersionError(
            f"{what} has schema version {version}; this reader supports major "
            f"version {SCHEMA_VERSION.split('.', 1)[0]}"
        )


@dataclass(frozen=True)
class ForecastConfig:
    basis_size: int | None = None
    horizon: float | None = None

    def __post_init__(self) -> None:
        if self.basis_size is not None and self.basis_size < 1:
            raise ValidationError(f"forecast basis size must be >= 1, got {self.basis_size}")
        if self.horizon is not None and not self.horizon > 0:
            raise ValidationError(f"forecast horizon must be positive, got {self.horizon}")


@dataclass(frozen=True, eq=False)
class RunConfig:
    """Everything the evaluation pipeline needs besides the dataset itself."""

    scale: ScaleConfig
    weights: WeightProfile
    corridors: tuple[tuple[Corridor, ...], ...]  # [characteristic][criterion]
    derivative_orders: tuple[int, ...]  # per criterion, 1..3
    tie_eps: float = DEFAULT_EPS
    forecast: ForecastConfig = field(default_factory=ForecastConfig)

    def __post_init__(self) -> None:
        if self.tie_eps < 0:
            raise ValidationError(f"tie_eps must be non-negative, got {self.tie_eps}")
        orders = tuple(int(p) for p in self.derivative_orders)
        if any(not 1 <= p <= 3 for p in orders):
            raise ValidationError(f"derivative orders must lie in 1..3, got {orders}")
        object.__setattr__(self, "derivative_orders", orders)
        rows = tuple(tuple(row) for row in self.corridors)
        if not rows or any(not row for row in rows):
            raise ValidationError("corridor table must cover every (characteristic, criterion)")
        k = len(rows[0])
        if any(len(row) != k for row in rows):
            raise ValidationError("corridor table is ragged across characteristics")
        if len(orders) != k:
            raise ValidationError(
                f"{len(orders)} derivative orders for {k} criteria"
            )
        object.__setattr__(self, "corridors", rows)

    @property
    def n_characteristics(self) -> int:
        return len(self.corridors)

    @property
    def n_criteria(self) -> int:
        return len(self.corridors[0])

    def validate_for(self, n_elements: int, n_modes: int, n_characteristics: int,
                     n_criteria: int, grid: SamplingGrid) -> None:
        """Cross-check weight lengths and corridor coverage against a dataset shape."""
        checks = (
            ("elements", self.weights.elements, n_elements),
            ("modes", self.weights.modes, n_modes),
            ("characteristics", self.weights.characteristics, n_characteristics),
            ("criteria", self.weights.criteria, n_criteria),
        )
        for name, vec, want in checks:
            if len(vec) != want:
                raise ValidationError(
                    f"weight vector '{name}' has {len(vec)} entries, dataset declares {want}"
                )
        if self.n_characteristics != n_characteristics or self.n_criteria != n_criteria:
            raise ValidationError(
                f"corridor table covers {self.n_characteristics}x{self.n_criteria} "
                f"(characteristic, criterion) cells, dataset declares "
                f"{n_characteristics}x{n_criteria}"
            )
        if grid.count < max(self.derivative_orders) + 1:
            raise ValidationError(
                f"grid has {grid.count} samples; derivative order "
                f"{max(self.derivative_orders)} needs at least {max(self.derivative_orders) + 1}"
            )
        for m, row in enumerate(self.corridors):
            for k, corridor in enumerate(row):
                corridor.bounds_on(grid)
                # Raises DegenerateCorridorError when nothing is tolerated.
                h_max_for(corridor, Metric.UNIFORM, grid)
                if k != corridor.criterion:
                    raise ValidationError(
                        f"corridor at (characteristic {m}, criterion {k}) is labelled "
                        f"criterion {corridor.criterion}"
                    )


def _require(document: dict, key: str, what: str):
    if key not in document:
        raise ValidationError(f"{what} is missing the '{key}' field")
    return document[key]


def _parse_corridor(entry: dict, index: int) -> tuple[int, int, Corridor]:
    for key in ("characteristic", "criterion", "ref_lo", "ref_hi", "perm_lo", "perm_hi"):
        if key not in entry:
            raise ValidationError(f"corridor entry {index} is missing '{key}'")
    m = int(entry["characteristic"])
    k = int(entry["criterion"])
    try:
        corridor = Corridor(
            criterion=k,
            ref_lo=entry["ref_lo"],
            ref_hi=entry["ref_hi"],
            perm_lo=entry["perm_lo"],
            perm_hi=entry["perm_hi"],
        )
    except ValueError as exc:
        raise ValidationError(
            f"corridor at (characteristic {m}, criterion {k}): {exc}"
        ) from None
    return m, k, corridor


def config_from_dict(document: dict) -> RunConfig:
    check_schema_version(document, "config")

    scale_doc = document.get("scale", {})
    scale = ScaleConfig(
        nu=float(scale_doc.get("nu", ScaleConfig().nu)),
        delta=float(scale_doc.get("delta", ScaleConfig().delta)),
        delta_grid=tuple(scale_doc.get("delta_grid", ScaleConfig().delta_grid)),
        labels=tuple(scale_doc.get("labels", ScaleConfig().labels)),
    )

    weights_doc = _require(document, "weights", "config")
    try:
        weights = WeightProfile(
            param_uniform=float(weights_doc.get("uniform_metric", 1.0)),
            param_l2=float(weights_doc.get("l2_metric", 1.0)),
            criteria=tuple(_require(weights_doc, "criteria", "weights")),
            characteristics=tuple(_require(weights_doc, "characteristics", "weights")),
            modes=tuple(_require(weights_doc, "modes", "weights")),
            elements=tuple(_require(weights_doc, "elements", "weights")),
        )
    except ValueError as exc:
        raise ValidationError(str(exc)) from None

    entries = _require(document, "corridors", "config")
    by_cell: dict[tuple[int, int], Corridor] = {}
    for i, entry in enumerate(entries):
        m, k, corridor = _parse_corridor(entry, i)
        if (m, k) in by_cell:
            raise ValidationError(
                f"duplicate corridor for (characteristic {m}, criterion {k})"
            )
        by_cell[(m, k)] = corridor
    if not by_cell:
        raise ValidationError("config declares no corridors")
    n_char = 1 + max(m for m, _ in by_cell)
    n_crit = 1 + max(k for _, k in by_cell)
    table = []
    for m in range(n_char):
        row = []
        for k in range(n_crit):
            if (m, k) not in by_cell:
                raise ValidationError(
                    f"missing corridor for (characteristic {m}, criterion {k})"
                )
            row.append(by_cell[(m, k)])
        table.append(tuple(row))

    orders = document.get("derivative_orders")
    if orders is None:
        orders = (1,) * n_crit

    forecast_doc = document.get("forecast", {})
    forecast = ForecastConfig(
        basis_size=forecast_doc.get("basis_size"),
        horizon=forecast_doc.get("horizon"),
    )

    tie_eps = float(document.get("tie_eps", DEFAULT_EPS))
    if not math.isfinite(tie_eps):
        raise ValidationError("tie_eps must be finite")

    return RunConfig(
        scale=scale,
        weights=weights,
        corridors=tuple(table),
        derivative_orders=tuple(orders),
        tie_eps=tie_eps,
        forecast=forecast,
    )


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ValidationError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config file {path} is not valid JSON: {exc}") from None
    return config_from_dict(document)


def _bound_to_json(bound):
    if isinstance(bound, float):
        return bound
    return [float(x) for x in bound]


def config_to_dict(config: RunConfig) -> dict:
    """Serializable form with a stable field order."""
    corridors = []
    for m, row in enumerate(config.corridors):
        for k, c in enumerate(row):
            corridors.append(
                {
                    "characteristic": m,
                    "criterion": k,
                    "ref_lo": _bound_to_json(c.ref_lo),
                    "ref_hi": _bound_to_json(c.ref_hi),
                    "perm_lo": _bound_to_json(c.perm_lo),
                    "perm_hi": _bound_to_json(c.perm_hi),
                }
            )
    out = {
        "schema_version": SCHEMA_VERSION,
        "scale": {
            "nu": config.scale.nu,
            "delta": config.scale.delta,
            "delta_grid": list(config.scale.delta_grid),
            "labels": list(config.scale.labels),
        },
        "weights": {
            "uniform_metric": config.weights.param_uniform,
            "l2_metric": config.weights.param_l2,
            "criteria": list(config.weights.criteria),
            "characteristics": list(config.weights.characteristics),
            "modes": list(config.weights.modes),
            "elements": list(config.weights.elements),
        },
        "corridors": corridors,
        "derivative_orders": list(config.derivative_orders),
        "tie_eps": config.tie_eps,
        "forecast": {
            "basis_size": config.forecast.basis_size,
            "horizon": config.forecast.horizon,
        },
    }
    return out


def save_config(config: RunConfig, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(config_to_dict(config), indent=2) + "\n", encoding="utf-8"
    )
