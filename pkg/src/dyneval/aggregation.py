"""Weighted rollups of local evaluations.

Two hierarchies are computed from the same dense score tensor.  The
element-first chain averages parameters, then criteria, then characteristics,
then modes, ending in one score per element.  The mode-first chain averages
elements, then parameters, then criteria, then characteristics, ending in one
score per mode.  Because every stage is a weighted mean with weights shared
across cells, both chains collapse to the same global score; global_eval
asserts that identity.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import AggregationError

IDENTITY_TOL = 1e-9


@dataclass(frozen=True)
class WeightProfile:
    """Priority weights for parameters, criteria, characteristics, modes, elements."""

    param_uniform: float
    param_l2: float
    criteria: tuple[float, ...]
    characteristics: tuple[float, ...]
    modes: tuple[float, ...]
    elements: tuple[float, ...]

    def __post_init__(self) -> None:
        for name in ("param_uniform", "param_l2"):
            w = getattr(self, name)
            if not (math.isfinite(w) and w > 0):
                raise ValueError(f"weight {name} must be positive and finite, got {w}")
        for name in ("criteria", "characteristics", "modes", "elements"):
            vec = tuple(float(w) for w in getattr(self, name))
            if not vec:
                raise ValueError(f"weight vector {name} must not be empty")
            if any(not (math.isfinite(w) and w > 0) for w in vec):
                raise ValueError(f"weight vector {name} must be positive and finite")
            object.__setattr__(self, name, vec)

    @classmethod
    def uniform(cls, n_elements: int, n_modes: int, n_characteristics: int, n_criteria: int) -> "WeightProfile":
        """All-ones profile for a given tensor shape."""
        return cls(
            param_uniform=1.0,
            param_l2=1.0,
            criteria=(1.0,) * n_criteria,
            characteristics=(1.0,) * n_characteristics,
            modes=(1.0,) * n_modes,
            elements=(1.0,) * n_elements,
        )


@dataclass(frozen=True, eq=False)
class EvaluationTensor:
    """Dense local-evaluation scores indexed [element, mode, characteristic, criterion]."""

    e_uniform: np.ndarray
    e_l2: np.ndarray
    grades: np.ndarray

    def __post_init__(self) -> None:
        e_u = np.asarray(self.e_uniform, dtype=float)
        e_l = np.asarray(self.e_l2, dtype=float)
        g = np.asarray(self.grades, dtype=int)
        if e_u.ndim != 4:
            raise ValueError(f"score tensor must be 4-dimensional, got shape {e_u.shape}")
        if e_l.shape != e_u.shape or g.shape != e_u.shape:
            raise ValueError(
                f"tensor components disagree on shape: {e_u.shape}, {e_l.shape}, {g.shape}"
            )
        if not (np.all(np.isfinite(e_u)) and np.all(np.isfinite(e_l))):
            raise ValueError("score tensor contains non-finite values")
        for arr in (e_u, e_l, g):
            arr.setflags(write=False)
        object.__setattr__(self, "e_uniform", e_u)
        object.__setattr__(self, "e_l2", e_l)
        object.__setattr__(self, "grades", g)

    @property
    def shape(self) -> tuple[int, int, int, int]:
        return self.e_uniform.shape


@dataclass(frozen=True, eq=False)
class ElementRollup:
    """Element-first hierarchy: parameters -> criteria -> characteristics -> modes."""

    per_parameter: np.ndarray  # (N, L, M, K)
    per_criterion: np.ndarray  # (N, L, M)
    per_characteristic: np.ndarray  # (N, L)
    per_element: np.ndarray  # (N,)


@dataclass(frozen=True, eq=False)
class ModeRollup:
    """Mode-first hierarchy: elements -> parameters -> criteria -> characteristics."""

    uniform_by_element: np.ndarray  # (L, M, K)
    l2_by_element: np.ndarray  # (L, M, K)
    per_parameter: np.ndarray  # (L, M, K)
    per_criterion: np.ndarray  # (L, M)
    per_mode: np.ndarray  # (L,)


def weighted_mean(values, weights) -> float:
    """Weighted arithmetic mean with strictly positive weights."""
    v = np.asarray(values, dtype=float)
    w = np.asarray(weights, dtype=float)
    if v.size == 0:
        raise ValueError("cannot average an empty sequence")
    if v.shape != w.shape:
        raise ValueError(f"values and weights disagree on length: {v.shape} vs {w.shape}")
    if np.any(w <= 0) or not np.all(np.isfinite(w)):
        raise ValueError("weights must be positive and finite")
    return float(np.dot(w, v) / np.sum(w))


def _wmean_axis(arr: np.ndarray, weights: tuple[float, ...], axis: int, what: str) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    if arr.shape[axis] != w.shape[0]:
        raise ValueError(
            f"{what}: {w.shape[0]} weights for {arr.shape[axis]} entries along axis {axis}"
        )
    shape = [1] * arr.ndim
    shape[axis] = w.shape[0]
    return np.sum(arr * w.reshape(shape), axis=axis) / np.sum(w)


def _warn_if_raw(tensor: EvaluationTensor) -> None:
    low = min(float(np.min(tensor.e_uniform)), float(np.min(tensor.e_l2)))
    if low < 2.0 - 1e-12:
        warnings.warn(
            "tensor contains values below the precise-rating range [2, 5]; "
            "product-based selection on these aggregates is unsafe",
            RuntimeWarning,
            stacklevel=3,
        )


def element_rollup(tensor: EvaluationTensor, weights: WeightProfile) -> ElementRollup:
    """Roll the tensor up to one score per element."""
    _warn_if_raw(tensor)
    wc, wl = weights.param_uniform, weights.param_l2
    per_parameter = (wc * tensor.e_uniform + wl * tensor.e_l2) / (wc + wl)
    per_criterion = _wmean_axis(per_parameter, weights.criteria, 3, "criteria weights")
    per_characteristic = _wmean_axis(
        per_criterion, weights.characteristics, 2, "characteristic weights"
    )
    per_element = _wmean_axis(per_characteristic, weights.modes, 1, "mode weights")
    return ElementRollup(
        per_parameter=per_parameter,
        per_criterion=per_criterion,
        per_characteristic=per_characteristic,
        per_element=per_element,
    )


def mode_rollup(tensor: EvaluationTensor, weights: WeightProfile) -> ModeRollup:
    """Roll the tensor up to one score per operating mode."""
    _warn_if_raw(tensor)
    uniform_by_element = _wmean_axis(tensor.e_uniform, weights.elements, 0, "element weights")
    l2_by_element = _wmean_axis(tensor.e_l2, weights.elements, 0, "element weights")
    wc, wl = weights.param_uniform, weights.param_l2
    per_parameter = (wc * uniform_by_element + wl * l2_by_element) / (wc + wl)
    per_criterion = _wmean_axis(per_parameter, weights.criteria, 2, "criteria weights")
    per_mode = _wmean_axis(per_criterion, weights.characteristics, 1, "characteristic weights")
    return ModeRollup(
        uniform_by_element=uniform_by_element,
        l2_by_element=l2_by_element,
        per_parameter=per_parameter,
        per_criterion=per_criterion,
        per_mode=per_mode,
    )


def global_eval(
    element: ElementRollup,
    mode: ModeRollup,
    weights: WeightProfile,
    tol: float = IDENTITY_TOL,
) -> float:
    """Global score; asserts the element-first and mode-first results agree."""
    h = weighted_mean(element.per_element, weights.elements)
    v = weighted_mean(mode.per_mode, weights.modes)
    if abs(h - v) > tol:
        raise AggregationError(
            f"element-first and mode-first global scores disagree: {h!r} vs {v!r}; "
            "weight shapes are inconsistent across cells"
        )
    return h


def count_local_evals(shape: tuple[int, int, int, int, int]) -> tuple[tuple[int, ...], int]:
    """Number of local evaluations per element and in total.

    shape is (elements, modes, characteristics, criteria, parameters-per-cell).
    """
    n, l, m, k, p = shape
    if min(n, l, m, k, p) <= 0:
        raise ValueError(f"all dimensions must be positive, got {shape}")
    per_element = l * m * k * p
    return (per_element,) * n, n * per_element
