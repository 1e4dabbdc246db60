"""Sampled characteristics, corridors, and deviation norms.

A characteristic is one recorded signal of one system element under one
operating mode.  A corridor defines the reference band (ideal values) and the
wider permissible band for one criterion.  The deviation signal is the
pointwise distance from the characteristic to the reference band; the norms
here turn it into the scalars the rating scales consume.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateCorridorError, GridMismatchError

_trapezoid = getattr(np, "trapezoid", None)
if _trapezoid is None:  # numpy < 2.0
    _trapezoid = np.trapz


class Metric(Enum):
    """Norm family used when collapsing a deviation signal to a scalar."""

    UNIFORM = "uniform"
    MEAN_SQUARED = "mean_squared"


@dataclass(frozen=True)
class SamplingGrid:
    """Uniform time grid: samples at t_start + i*dt for i in 0..count-1."""

    dt: float
    count: int
    t_start: float = 0.0

    def __post_init__(self) -> None:
        if not isinstance(self.count, int) or self.count < 2:
            raise ValueError(f"grid needs at least 2 samples, got count={self.count}")
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ValueError(f"grid step must be finite and positive, got dt={self.dt}")
        if not math.isfinite(self.t_start):
            raise ValueError("grid start time must be finite")

    @property
    def duration(self) -> float:
        """Length of the observation window."""
        return self.dt * (self.count - 1)

    def times(self) -> np.ndarray:
        return self.t_start + self.dt * np.arange(self.count, dtype=float)


def _as_signal_array(values, count: int, what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{what} must be one-dimensional, got shape {arr.shape}")
    if arr.shape[0] != count:
        raise GridMismatchError(
            f"{what} has {arr.shape[0]} samples but the grid declares {count}"
        )
    if not np.all(np.isfinite(arr)):
        bad = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise ValueError(f"{what} contains a non-finite value at sample {bad}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Characteristic:
    """One sampled signal for an (element, mode, characteristic) triple."""

    element: int
    mode: int
    char_index: int
    grid: SamplingGrid
    values: np.ndarray
    label: str = ""

    def __post_init__(self) -> None:
        where = (
            f"signal (element {self.element}, mode {self.mode}, "
            f"characteristic {self.char_index})"
        )
        object.__setattr__(
            self, "values", _as_signal_array(self.values, self.grid.count, where)
        )


def _as_bound(value, name: str):
    """Normalize a corridor bound to a float or a read-only 1-D array."""
    if np.isscalar(value) or isinstance(value, (int, float)):
        out = float(value)
        if not math.isfinite(out):
            raise ValueError(f"corridor bound {name} must be finite")
        return out
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 0:
        out = float(arr)
        if not math.isfinite(out):
            raise ValueError(f"corridor bound {name} must be finite")
        return out
    if arr.ndim != 1:
        raise ValueError(f"corridor bound {name} must be scalar or one-dimensional")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"corridor bound {name} contains a non-finite value")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Corridor:
    """Reference and permissible bands for one criterion.

    Bounds may be constants (broadcast over the grid) or per-sample series.
    The reference band must sit inside the permissible band pointwise.
    """

    criterion: int
    ref_lo: float | np.ndarray
    ref_hi: float | np.ndarray
    perm_lo: float | np.ndarray
    perm_hi: float | np.ndarray

    def __post_init__(self) -> None:
        for name in ("ref_lo", "ref_hi", "perm_lo", "perm_hi"):
            object.__setattr__(self, name, _as_bound(getattr(self, name), name))
        lengths = {
            b.shape[0]
            for b in (self.ref_lo, self.ref_hi, self.perm_lo, self.perm_hi)
            if isinstance(b, np.ndarray)
        }
        if len(lengths) > 1:
            raise GridMismatchError(
                f"corridor (criterion {self.criterion}) mixes series of lengths {sorted(lengths)}"
            )
        lo, hi, plo, phi = np.broadcast_arrays(
            self.ref_lo, self.ref_hi, self.perm_lo, self.perm_hi
        )
        if np.any(lo > hi):
            raise ValueError(
                f"corridor (criterion {self.criterion}): ref_lo exceeds ref_hi"
            )
        if np.any(plo > lo) or np.any(hi > phi):
            raise ValueError(
                f"corridor (criterion {self.criterion}): reference band leaves the permissible band"
            )

    def bounds_on(self, grid: SamplingGrid) -> tuple[np.ndarray, ...]:
        """Broadcast all four bounds onto the grid, validating series lengths."""
        out = []
        for name in ("ref_lo", "ref_hi", "perm_lo", "perm_hi"):
            bound = getattr(self, name)
            if isinstance(bound, np.ndarray):
                if bound.shape[0] != grid.count:
                    raise GridMismatchError(
                        f"corridor (criterion {self.criterion}) bound {name} has "
                        f"{bound.shape[0]} samples but the grid declares {grid.count}"
                    )
                out.append(bound)
            else:
                out.append(np.full(grid.count, bound))
        return tuple(out)


@dataclass(frozen=True, eq=False)
class DeviationSignal:
    """Pointwise distance from a characteristic to its reference band."""

    grid: SamplingGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        arr = _as_signal_array(self.values, self.grid.count, "deviation signal")
        if np.any(arr < 0):
            bad = int(np.flatnonzero(arr < 0)[0])
            raise ValueError(f"deviation signal is negative at sample {bad}")
        object.__setattr__(self, "values", arr)


def distance_to_domain(char: Characteristic, corridor: Corridor) -> DeviationSignal:
    """Per-sample distance from the signal to the reference band.

    Zero where the value lies inside [ref_lo, ref_hi]; otherwise the distance
    to the nearest reference bound.
    """
    lo, hi, _, _ = corridor.bounds_on(char.grid)
    v = char.values
    dev = np.where(v < lo, lo - v, np.where(v > hi, v - hi, 0.0))
    return DeviationSignal(grid=char.grid, values=dev)


def norm_uniform(dev: DeviationSignal) -> float:
    """Largest sampled deviation (discrete sup norm)."""
    return float(np.max(dev.values))


def _l2_of(values: np.ndarray, dt: float) -> float:
    return math.sqrt(max(float(_trapezoid(values * values, dx=dt)), 0.0))


def norm_l2(dev: DeviationSignal) -> float:
    """Mean-squared-metric norm: sqrt of the trapezoidal integral of the square."""
    return _l2_of(dev.values, dev.grid.dt)


def _derivative_stack(dev: DeviationSignal, order: int) -> list[np.ndarray]:
    """Signal plus finite-difference derivatives up to order-1.

    Central differences inside, second-order one-sided stencils at the ends.
    """
    stack = [np.asarray(dev.values, dtype=float)]
    for _ in range(order - 1):
        stack.append(np.gradient(stack[-1], dev.grid.dt, edge_order=2))
    return stack


def norm_with_derivatives(dev: DeviationSignal, order: int, metric: Metric) -> float:
    """Norm including derivatives up to order-1.

    Uniform: max over derivative orders of the sup norm.  Mean-squared: sqrt of
    the summed squared L2 norms.  order=1 reduces exactly to norm_uniform /
    norm_l2.
    """
    if not isinstance(order, int) or not 1 <= order <= 3:
        raise ValueError(f"derivative order must be an integer in 1..3, got {order}")
    if dev.grid.count < order + 1:
        raise ValueError(
            f"order {order} needs at least {order + 1} samples, grid has {dev.grid.count}"
        )
    if order == 1:
        return norm_uniform(dev) if metric is Metric.UNIFORM else norm_l2(dev)
    stack = _derivative_stack(dev, order)
    if metric is Metric.UNIFORM:
        return max(float(np.max(np.abs(a))) for a in stack)
    return math.sqrt(sum(_l2_of(a, dev.grid.dt) ** 2 for a in stack))


def deviation_envelope(corridor: Corridor, grid: SamplingGrid) -> np.ndarray:
    """Pointwise largest deviation a signal confined to the permissible band can show."""
    lo, hi, plo, phi = corridor.bounds_on(grid)
    return np.maximum(lo - plo, phi - hi)


def h_max_for(corridor: Corridor, metric: Metric, grid: SamplingGrid) -> float:
    """Largest deviation norm attainable inside the permissible band.

    Raises DegenerateCorridorError when the reference and permissible bands
    coincide (the scales would divide by zero).
    """
    envelope = deviation_envelope(corridor, grid)
    if metric is Metric.UNIFORM:
        h = float(np.max(envelope))
    else:
        h = _l2_of(envelope, grid.dt)
    if h <= 0.0:
        raise DegenerateCorridorError(
            f"corridor (criterion {corridor.criterion}) tolerates no deviation; "
            "widen the permissible band or drop the criterion"
        )
    return h
