"""Spearman rank correlation and the per-platform correlation matrix.

spearman() is the Pearson correlation of average-ranked values over the two
series' common dates. Constant inputs have no rank variance; those pairs
are reported as undefined (None) rather than forced to a number.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .. import profiles
from ..dataset import PlatformDataset
from ..errors import DataError
from ..records import Platform, Series, SignalSource, Trade
from .aggregation import ZERO
from .seasonal import DEFAULT_PERIOD, deseasonalize

MIN_COMMON_POINTS = 3


def average_ranks(values: np.ndarray) -> np.ndarray:
    """1-based ranks, ties sharing the average of their rank block."""
    n = len(values)
    order = np.argsort(values, kind="stable")
    sorted_values = values[order]
    is_boundary = np.empty(n, dtype=bool)
    is_boundary[0] = True
    is_boundary[1:] = sorted_values[1:] != sorted_values[:-1]
    starts = np.flatnonzero(is_boundary)
    counts = np.diff(np.append(starts, n))
    block_rank = starts + (counts + 1) / 2.0  # 1-based average rank per tie block
    ranks = np.empty(n, dtype=float)
    ranks[order] = np.repeat(block_rank, counts)
    return ranks


def _pearson(a: np.ndarray, b: np.ndarray) -> Optional[float]:
    da = a - a.mean()
    db = b - b.mean()
    denom = np.sqrt((da * da).sum() * (db * db).sum())
    if denom == 0:
        return None
    return float((da * db).sum() / denom)


def common_dates(a: Series, b: Series) -> list:
    shared = set(a.dates) & set(b.dates)
    return sorted(shared)


def spearman(a: Series, b: Series) -> Optional[float]:
    """Spearman coefficient over common dates; None when a side is constant
    there (undefined). Raises DataError below 3 common points."""
    dates = common_dates(a, b)
    if len(dates) < MIN_COMMON_POINTS:
        raise DataError(
            f"spearman({a.name!r}, {b.name!r}): {len(dates)} common dates, need >= {MIN_COMMON_POINTS}"
        )
    va = dict(zip(a.dates, a.values))
    vb = dict(zip(b.dates, b.values))
    xa = np.array([va[d] for d in dates], dtype=float)
    xb = np.array([vb[d] for d in dates], dtype=float)
    return _pearson(average_ranks(xa), average_ranks(xb))


@dataclass(frozen=True)
class CorrelationMatrix:
    platform: Optional[Platform]
    names: tuple[str, ...]
    matrix: tuple[tuple[Optional[float], ...], ...]
    undefined: tuple[str, ...]
    """Series whose whole row/column is undefined (constant or too short)."""

    def entry(self, a: str, b: str) -> Optional[float]:
        return self.matrix[self.names.index(a)][self.names.index(b)]

    def to_document(self) -> dict:
        return {
            "platform": self.platform.value if self.platform else None,
            "names": list(self.names),
            "matrix": [list(row) for row in self.matrix],
            "undefined": list(self.undefined),
        }


def matrix_from_series(series_list: Sequence[Series], platform: Optional[Platform] = None) -> CorrelationMatrix:
    """Pairwise Spearman over an arbitrary series set."""
    names = tuple(s.name for s in series_list)
    if len(set(names)) != len(names):
        raise DataError("series names must be unique")
    n = len(series_list)
    cells: list[list[Optional[float]]] = [[None] * n for _ in range(n)]
    defined = [len(set(s.values)) > 1 and len(s) >= MIN_COMMON_POINTS for s in series_list]
    for i in range(n):
        if defined[i]:
            cells[i][i] = 1.0
        for j in range(i + 1, n):
            if not (defined[i] and defined[j]):
                continue
            try:
                value = spearman(series_list[i], series_list[j])
            except DataError:
                value = None
            cells[i][j] = cells[j][i] = value
    undefined = tuple(name for name, ok in zip(names, defined) if not ok)
    return CorrelationMatrix(platform, names, tuple(tuple(row) for row in cells), undefined)


def build_series_set(
    platform: Platform, ds: PlatformDataset, kept_trades: Optional[Sequence[Trade]] = None
) -> list[Series]:
    """The correlation inputs: daily market aggregates, social signals, and
    FX quotes for the platform."""
    trades = list(kept_trades) if kept_trades is not None else ds.economic_trades()
    by_day: dict = {}
    for t in trades:
        by_day.setdefault(t.day, []).append(t)
    days = sorted(by_day)
    avg_points = []
    vol_points = []
    count_points = []
    for d in days:
        members = by_day[d]
        volume = sum((t.amount_usd for t in members), ZERO)
        avg_points.append((d, float(volume / len(members))))
        vol_points.append((d, float(volume)))
        count_points.append((d, float(len(members))))

    series = [
        Series("avg_price_usd", avg_points),
        Series("volume_usd", vol_points),
        Series("tx_count", count_points),
        _signal_series(ds, SignalSource.TWITTER_PLATFORM, platform, "platform_tweets"),
        _signal_series(ds, SignalSource.TWITTER_METAVERSE_HASHTAG, None, "metaverse_tweets"),
        _signal_series(ds, SignalSource.GOOGLE_TREND_METAVERSE, None, "google_trend_metaverse"),
        _quote_series(ds, "ETH", "eth_usd"),
    ]
    token = profiles.profile(platform).token_currency
    if token:
        series.append(_quote_series(ds, token, "token_usd"))
    return series


def correlation_matrix(
    platform: Platform,
    ds: PlatformDataset,
    kept_trades: Optional[Sequence[Trade]] = None,
    period: int = DEFAULT_PERIOD,
) -> CorrelationMatrix:
    """Deseasonalize each input series, then correlate pairwise.

    Series too short to decompose enter as-is; constant or near-empty series
    end up in the matrix's undefined list.
    """
    adjusted = []
    for s in build_series_set(platform, ds, kept_trades):
        try:
            adjusted.append(deseasonalize(s, period).series)
        except DataError:
            adjusted.append(s)
    return matrix_from_series(adjusted, platform)


def _signal_series(ds: PlatformDataset, source: SignalSource, platform, name: str) -> Series:
    points = sorted(
        (s.date, s.value) for s in ds.signals if s.source is source and s.platform == platform
    )
    return Series(name, points)


def _quote_series(ds: PlatformDataset, currency: str, name: str) -> Series:
    points = sorted((q.date, float(q.usd_rate)) for q in ds.quotes if q.currency == currency)
    return Series(name, points)
