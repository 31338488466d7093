"""Classical additive seasonal adjustment for daily series.

trend      = centered moving average of one period (7 days by default)
seasonal   = per-position mean of (value - trend), re-centered to zero
adjusted   = value - seasonal[position]

Positions are weekdays for the weekly period, day offsets modulo the period
otherwise. Interior gaps in the input are linearly interpolated before
decomposition and reported back as fills.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date, timedelta

import numpy as np

from ..errors import DataError
from ..records import Series

DEFAULT_PERIOD = 7


@dataclass(frozen=True)
class DeseasonalizeResult:
    series: Series
    seasonal_indices: tuple[float, ...]
    filled_dates: tuple[date, ...]


def fill_daily(series: Series) -> tuple[Series, tuple[date, ...]]:
    """Interpolate the series onto a contiguous daily grid."""
    if len(series) == 0:
        return series, ()
    first, last = series.dates[0], series.dates[-1]
    grid = [first + timedelta(days=i) for i in range((last - first).days + 1)]
    have = dict(zip(series.dates, series.values))
    xs = np.array([(d - first).days for d in series.dates], dtype=float)
    ys = np.array(series.values, dtype=float)
    filled = []
    points = []
    for d in grid:
        if d in have:
            points.append((d, have[d]))
        else:
            points.append((d, float(np.interp((d - first).days, xs, ys))))
            filled.append(d)
    return Series(series.name, points), tuple(filled)


def _positions(dates, period: int) -> np.ndarray:
    if period == DEFAULT_PERIOD:
        return np.array([d.weekday() for d in dates], dtype=int)
    first = dates[0]
    return np.array([(d - first).days % period for d in dates], dtype=int)


def estimate_seasonal_indices(series: Series, period: int = DEFAULT_PERIOD) -> np.ndarray:
    """Zero-mean seasonal index per position, from a contiguous daily series."""
    values = np.array(series.values, dtype=float)
    n = len(values)
    if n < 2 * period:
        raise DataError(f"series {series.name!r} too short for period {period} ({n} < {2 * period})")

    if period % 2 == 1:
        half = period // 2
        kernel = np.full(period, 1.0 / period)
    else:
        # even period: 2 x m moving average (half weights at both ends)
        half = period // 2
        kernel = np.full(period + 1, 1.0 / period)
        kernel[0] = kernel[-1] = 0.5 / period
    trend = np.convolve(values, kernel, mode="valid")  # defined for positions half..n-1-half

    detrended = values[half : n - half] - trend
    positions = _positions(series.dates, period)[half : n - half]
    raw = np.zeros(period)
    for k in range(period):
        members = detrended[positions == k]
        if len(members) == 0:
            raise DataError(f"series {series.name!r}: no trend-covered sample at position {k}")
        raw[k] = members.mean()
    return raw - raw.mean()


def deseasonalize(series: Series, period: int = DEFAULT_PERIOD) -> DeseasonalizeResult:
    """Remove the additive seasonal component; output covers the same
    (gap-filled) daily grid as the input."""
    filled, fills = fill_daily(series)
    indices = estimate_seasonal_indices(filled, period)
    positions = _positions(filled.dates, period)
    adjusted = np.array(filled.values, dtype=float) - indices[positions]
    out = Series(series.name, list(zip(filled.dates, (float(v) for v in adjusted))))
    return DeseasonalizeResult(out, tuple(float(s) for s in indices), fills)
