"""Rating scales: continuous, discrete, conceptual, and hybrid precise ratings.

The hybrid scale is the workhorse: a real score whose integer part is a
conceptual grade (2 = unsatisfactory .. 5 = excellent) and whose fractional
part locates the signal inside the grade band.  Each cell gets a pair of these
scores, one from the sup norm (peaks) and one from the mean-squared norm
(how widespread the disturbances are).
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np

from .signals import DeviationSignal, _l2_of, norm_uniform

DEFAULT_NU = 10.0
DEFAULT_DELTA = 0.5
DEFAULT_DELTA_GRID = tuple(i / 10 for i in range(11))
DEFAULT_LABELS = ("unsatisfactory", "satisfactory", "good", "excellent", "reference")

FAIL_GRADE = 2
TOP_GRADE = 5

# Fraction of a grade band counted as "near" its lower / upper edge.
_NEAR_LOW = 0.25
_NEAR_HIGH = 0.75

_JUST_BELOW = {4: math.nextafter(4.0, 3.0), 5: math.nextafter(5.0, 4.0)}


@dataclass(frozen=True)
class ScaleConfig:
    """Parameters shared by all four scales.

    nu scales the continuous evaluation, delta_grid defines the discrete bins,
    delta splits the hybrid grade-3/grade-4 bands, labels name the conceptual
    grades starting at grade 2.
    """

    nu: float = DEFAULT_NU
    delta: float = DEFAULT_DELTA
    delta_grid: tuple[float, ...] = DEFAULT_DELTA_GRID
    labels: tuple[str, ...] = DEFAULT_LABELS

    def __post_init__(self) -> None:
        if not (math.isfinite(self.nu) and self.nu > 0):
            raise ValueError(f"nu must be positive, got {self.nu}")
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        grid = tuple(float(x) for x in self.delta_grid)
        if len(grid) < 2 or grid[0] != 0.0 or grid[-1] != 1.0:
            raise ValueError("delta_grid must run from 0.0 to 1.0")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("delta_grid must be strictly increasing")
        object.__setattr__(self, "delta_grid", grid)
        labels = tuple(str(s) for s in self.labels)
        if not labels:
            raise ValueError("labels must not be empty")
        object.__setattr__(self, "labels", labels)


@dataclass(frozen=True)
class LocalEvaluation:
    """Hybrid precise-rating pair for one (element, mode, characteristic, criterion) cell."""

    e_uniform: float
    e_l2: float
    grade: int
    label: str


def continuous_eval(h: float, h_min: float, h_max: float, nu: float = DEFAULT_NU) -> float:
    """Linear score: nu at h_min, zero at h_max, negative beyond h_max."""
    if not h_max > h_min:
        raise ValueError(f"h_max must exceed h_min, got {h_max} <= {h_min}")
    if h < 0:
        raise ValueError(f"deviation norm must be non-negative, got {h}")
    return nu * (h_max - h) / (h_max - h_min)


def discrete_eval(e_c: float, config: ScaleConfig) -> int:
    """Bin a continuous evaluation into the integer grade grid.

    Half-open bins [delta_i, delta_{i+1}); inputs at or below zero clamp to
    grade 0, inputs at or above nu clamp to the top grade.
    """
    x = e_c / config.nu
    top = len(config.delta_grid) - 2
    if x <= 0.0:
        return 0
    if x >= 1.0:
        return top
    return bisect_right(config.delta_grid, x) - 1


def conceptual_label(grade: int, config: ScaleConfig) -> str:
    """Label for a conceptual grade; labels start at grade 2."""
    idx = grade - FAIL_GRADE
    if not 0 <= idx < len(config.labels):
        raise ValueError(
            f"grade {grade} outside the labelled range "
            f"{FAIL_GRADE}..{FAIL_GRADE + len(config.labels) - 1}"
        )
    return config.labels[idx]


def grade_of_score(score: float) -> int:
    """Conceptual grade band a precise-rating value falls in."""
    if score >= TOP_GRADE:
        return TOP_GRADE
    if score >= 4.0:
        return 4
    if score >= 3.0:
        return 3
    return FAIL_GRADE


def _check_amplitude(amplitude: float, delta: float) -> float:
    if not amplitude > 0:
        raise ValueError(f"permissible deviation amplitude must be positive, got {amplitude}")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    return delta * amplitude


def hybrid_grade(dev: DeviationSignal, amplitude: float, delta: float = DEFAULT_DELTA) -> int:
    """Integer grade of the hybrid scale.

    5 for no deviation at all, 4 up to gamma = delta*amplitude, 3 up to the
    amplitude, 2 beyond the permissible amplitude.  Band edges belong to the
    higher grade.
    """
    gamma = _check_amplitude(amplitude, delta)
    s = norm_uniform(dev)
    if s == 0.0:
        return TOP_GRADE
    if s <= gamma:
        return 4
    if s <= amplitude:
        return 3
    return FAIL_GRADE


def hybrid_eval_uniform(
    dev: DeviationSignal, amplitude: float, delta: float = DEFAULT_DELTA
) -> float:
    """Precise rating from the sup norm: tracks presence and height of peaks."""
    gamma = _check_amplitude(amplitude, delta)
    grade = hybrid_grade(dev, amplitude, delta)
    if grade == TOP_GRADE:
        return 5.0
    if grade == FAIL_GRADE:
        return 2.0
    s = norm_uniform(dev)
    if grade == 4:
        value = 4.0 + (gamma - s) / gamma
    else:
        value = 3.0 + (amplitude - s) / (amplitude - gamma)
    return _clamp_band(value, grade)


def hybrid_eval_l2(
    dev: DeviationSignal, amplitude: float, delta: float = DEFAULT_DELTA
) -> float:
    """Precise rating from the mean-squared norm: tracks how widespread disturbances are."""
    gamma = _check_amplitude(amplitude, delta)
    grade = hybrid_grade(dev, amplitude, delta)
    if grade == TOP_GRADE:
        return 5.0
    if grade == FAIL_GRADE:
        return 2.0
    dt = dev.grid.dt
    root_t = math.sqrt(dev.grid.duration)
    if grade == 4:
        value = 4.0 + _l2_of(gamma - dev.values, dt) / (gamma * root_t)
    else:
        excess = np.maximum(dev.values - gamma, 0.0)
        span = (amplitude - gamma) * root_t
        value = 3.0 + (span - _l2_of(excess, dt)) / span
    return _clamp_band(value, grade)


def _clamp_band(value: float, grade: int) -> float:
    # Rounding may push a value onto the next grade's edge; keep it in band.
    return min(max(value, float(grade)), _JUST_BELOW[grade + 1])


def hybrid_pair(
    dev: DeviationSignal,
    amplitude: float,
    config: ScaleConfig | None = None,
) -> LocalEvaluation:
    """Evaluate a deviation signal on both metrics of the hybrid scale."""
    cfg = config if config is not None else ScaleConfig()
    grade = hybrid_grade(dev, amplitude, cfg.delta)
    return LocalEvaluation(
        e_uniform=hybrid_eval_uniform(dev, amplitude, cfg.delta),
        e_l2=hybrid_eval_l2(dev, amplitude, cfg.delta),
        grade=grade,
        label=conceptual_label(grade, cfg),
    )


def classify_pair(ev: LocalEvaluation) -> str:
    """Qualitative read of a precise-rating pair.

    A low sup-side score with a high mean-squared score means the signal
    misbehaves rarely but sharply; both low means it sits near the edge of the
    grade below; both high means it is about to move up a grade.
    """
    if ev.grade == TOP_GRADE:
        return "no disturbances"
    if ev.grade == FAIL_GRADE:
        return "beyond permissible"
    frac_u = ev.e_uniform - ev.grade
    frac_l = ev.e_l2 - ev.grade
    if frac_u <= _NEAR_LOW and frac_l <= _NEAR_LOW:
        return "near-critical"
    if frac_u <= _NEAR_LOW and frac_l >= _NEAR_HIGH:
        return "few short disturbances"
    if frac_u >= _NEAR_HIGH and frac_l >= _NEAR_HIGH:
        return "near next grade"
    return "mixed"
