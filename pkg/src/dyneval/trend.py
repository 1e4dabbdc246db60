"""History classification, forecast fitting, and examination scheduling.

A history is the sequence of global scores from past evaluations.  The
forecast model is a linear combination of basis functions fitted through (or
least-squares close to) the history; the default basis is monomials of time
rescaled to [0, 1], which keeps the fit well conditioned.  The crossing search
finds when the forecast first drops to a grade threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np

DEFAULT_TREND_TOL = 1e-9
MAX_DEFAULT_BASIS = 7
INTERPOLATION_RESIDUAL_TOL = 1e-8
DEFAULT_SCAN_STEPS = 4096


class Trend(Enum):
    IMPROVING = "improving"
    DEGRADING = "degrading"
    STABLE = "stable"
    MIXED = "mixed"


@dataclass(frozen=True)
class History:
    """Past global scores at strictly increasing examination times."""

    times: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        times = tuple(float(t) for t in self.times)
        values = tuple(float(v) for v in self.values)
        if len(times) != len(values):
            raise ValueError("times and values disagree on length")
        if len(times) < 2:
            raise ValueError("a history needs at least 2 examinations")
        if any(not math.isfinite(x) for x in times + values):
            raise ValueError("history contains a non-finite entry")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("examination times must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_samples(cls, samples: Sequence[tuple[float, float]]) -> "History":
        return cls(times=tuple(t for t, _ in samples), values=tuple(v for _, v in samples))

    def __len__(self) -> int:
        return len(self.times)


def classify_trend(history: History, tol: float = DEFAULT_TREND_TOL) -> Trend:
    """Improving, degrading, stable (near the mean), or mixed."""
    v = history.values
    diffs = [b - a for a, b in zip(v, v[1:])]
    if all(d > tol for d in diffs):
        return Trend.IMPROVING
    if all(d < -tol for d in diffs):
        return Trend.DEGRADING
    mean = sum(v) / len(v)
    if max(abs(x - mean) for x in v) <= tol:
        return Trend.STABLE
    return Trend.MIXED


@dataclass(frozen=True, eq=False)
class ForecastModel:
    """Fitted score-versus-time model.

    With basis_functions None the basis is 1, s, s^2, ... of the rescaled time
    s = (t - t_start) / (t_end - t_start).
    """

    coefficients: np.ndarray
    t_start: float
    t_end: float
    basis_functions: tuple[Callable[[float], float], ...] | None = None

    def design(self, times: np.ndarray) -> np.ndarray:
        times = np.asarray(times, dtype=float)
        if self.basis_functions is not None:
            return np.column_stack([[f(t) for t in times] for f in self.basis_functions])
        s = (times - self.t_start) / (self.t_end - self.t_start)
        return np.vander(s, N=len(self.coefficients), increasing=True)

    def in_window(self, t: float) -> bool:
        return self.t_start <= t <= self.t_end


def fit_forecast(
    history: History,
    basis_size: int | None = None,
    basis_functions: Sequence[Callable[[float], float]] | None = None,
) -> ForecastModel:
    """Fit a model through the history.

    basis_size equal to the history length interpolates exactly; smaller sizes
    give the least-squares fit.  The default size is min(J, 7): raw high-degree
    interpolation is ill-conditioned, so long histories fall back to
    least squares.
    """
    j = len(history)
    if basis_functions is not None:
        basis_functions = tuple(basis_functions)
        size = len(basis_functions)
    else:
        size = basis_size if basis_size is not None else min(j, MAX_DEFAULT_BASIS)
    if not 1 <= size <= j:
        raise ValueError(f"basis size must lie in 1..{j}, got {size}")

    t = np.asarray(history.times, dtype=float)
    v = np.asarray(history.values, dtype=float)
    model = ForecastModel(
        coefficients=np.zeros(size),
        t_start=float(t[0]),
        t_end=float(t[-1]),
        basis_functions=basis_functions,
    )
    design = model.design(t)

    if size == j:
        try:
            coeffs = np.linalg.solve(design, v)
        except np.linalg.LinAlgError:
            raise ValueError("basis functions are collinear on the sample times") from None
    else:
        coeffs, _, rank, _ = np.linalg.lstsq(design, v, rcond=None)
        if rank < size:
            raise ValueError("basis functions are collinear on the sample times")

    model = ForecastModel(
        coefficients=coeffs,
        t_start=float(t[0]),
        t_end=float(t[-1]),
        basis_functions=basis_functions,
    )
    if size == j:
        residual = float(np.max(np.abs(model.design(t) @ coeffs - v)))
        if residual > INTERPOLATION_RESIDUAL_TOL * max(1.0, float(np.max(np.abs(v)))):
            raise ValueError(
                f"interpolation is numerically rank-deficient (residual {residual:.3e})"
            )
    return model


def forecast_at(model: ForecastModel, t: float) -> float:
    """Model value at time t; extrapolation beyond the window is allowed."""
    if t < model.t_start:
        raise ValueError(f"cannot evaluate before the history window, {t} < {model.t_start}")
    row = model.design(np.array([t]))
    return float(row @ model.coefficients)


def next_examination_time(
    model: ForecastModel,
    v_star: float,
    horizon: float,
    scan_steps: int = DEFAULT_SCAN_STEPS,
) -> float | None:
    """Earliest time within the horizon at which the forecast drops to v_star.

    Scans (t_end, t_end + horizon] for the first step at or below v_star, then
    bisects the bracket.  Returns None when the forecast stays above v_star on
    the whole horizon.
    """
    if horizon <= 0:
        raise ValueError(f"horizon must be positive, got {horizon}")
    if scan_steps < 2:
        raise ValueError(f"scan_steps must be at least 2, got {scan_steps}")
    t0 = model.t_end
    if forecast_at(model, t0) < v_star:
        raise ValueError("forecast is already below the threshold at the last examination")

    below = lambda t: forecast_at(model, t) <= v_star
    lo = t0
    hit = None
    for k in range(1, scan_steps + 1):
        t = t0 + horizon * k / scan_steps
        if below(t):
            hit = t
            break
        lo = t
    if hit is None:
        return None

    hi = hit
    # Bisect essentially to machine precision; an affine forecast then lands
    # on the exact root.
    for _ in range(200):
        if hi - lo <= abs(hi) * 1e-16 + 1e-300:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if below(mid):
            hi = mid
        else:
            lo = mid
    return hi
