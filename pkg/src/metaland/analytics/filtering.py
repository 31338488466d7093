"""Outlier cut: drop trades above the per-platform 99th percentile.

The threshold is the nearest-rank empirical percentile (the ceil(q*n)-th
order statistic), so on n distinct prices exactly n - ceil(q*n) trades are
discarded and the cut is reproducible from the data alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal
from typing import Optional, Sequence

from ..errors import DataError
from ..records import Platform, Trade

ZERO = Decimal("0.00")


@dataclass(frozen=True)
class FilterReport:
    platform: Optional[Platform]
    considered_volume_usd: Decimal
    discarded_volume_usd: Decimal
    considered_count: int
    discarded_count: int
    threshold_usd: Decimal

    @property
    def total_count(self) -> int:
        return self.considered_count + self.discarded_count

    @property
    def discarded_count_share(self) -> float:
        return self.discarded_count / self.total_count if self.total_count else 0.0

    def to_document(self) -> dict:
        return {
            "platform": self.platform.value if self.platform else None,
            "considered_volume_usd": self.considered_volume_usd,
            "discarded_volume_usd": self.discarded_volume_usd,
            "considered_count": self.considered_count,
            "discarded_count": self.discarded_count,
            "threshold_usd": self.threshold_usd,
        }


def nearest_rank(sorted_values: Sequence, q: float):
    """The ceil(q*n)-th order statistic (1-indexed) of an ascending sequence."""
    n = len(sorted_values)
    if n == 0:
        raise DataError("percentile of empty sequence")
    # round before ceil so 0.99*200 = 198.00000000000003 still ranks as 198
    rank = math.ceil(round(q * n, 9))
    rank = max(1, min(n, rank))
    return sorted_values[rank - 1]


def filter_trades(trades: Sequence[Trade], percentile: float = 0.99) -> tuple[list[Trade], FilterReport]:
    """Split one platform's economic trades into (kept, report).

    Kept trades are those with amount_usd <= threshold; input order is
    preserved. Inputs must be economic trades of a single platform.
    """
    if not 0 < percentile <= 1:
        raise DataError(f"percentile must be in (0, 1], got {percentile}")
    platforms = {t.platform for t in trades}
    if len(platforms) > 1:
        raise DataError(f"filter_trades expects a single platform, got {sorted(p.value for p in platforms)}")
    if not trades:
        return [], FilterReport(None, ZERO, ZERO, 0, 0, ZERO)
    if any(not t.economic for t in trades):
        raise DataError("filter_trades expects economic trades only")

    threshold = nearest_rank(sorted(t.amount_usd for t in trades), percentile)
    kept: list[Trade] = []
    discarded: list[Trade] = []
    for t in trades:
        (kept if t.amount_usd <= threshold else discarded).append(t)
    report = FilterReport(
        platform=next(iter(platforms)),
        considered_volume_usd=sum((t.amount_usd for t in kept), ZERO),
        discarded_volume_usd=sum((t.amount_usd for t in discarded), ZERO),
        considered_count=len(kept),
        discarded_count=len(discarded),
        threshold_usd=threshold,
    )
    return kept, report
