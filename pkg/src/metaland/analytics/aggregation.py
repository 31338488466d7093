"""Calendar aggregates over trades: average price, volume, transaction
counts, plus exchange/currency breakdowns and the WETH ratio series.

Sums are Decimal, so aggregate totals equal raw totals exactly at any
granularity (conservation is testable with ==, not a tolerance).
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date
from decimal import Decimal
from typing import Optional, Sequence

from ..errors import DataError
from ..records import Platform, Series, Trade

ZERO = Decimal("0.00")

GRANULARITIES = ("day", "week", "month")
GROUP_KEYS = ("none", "exchange", "currency")


def period_key(day: date, granularity: str) -> str:
    if granularity == "day":
        return day.isoformat()
    if granularity == "week":
        iso = day.isocalendar()
        return f"{iso[0]}-W{iso[1]:02d}"
    if granularity == "month":
        return f"{day.year:04d}-{day.month:02d}"
    raise DataError(f"unknown granularity {granularity!r}")


def period_start(day: date, granularity: str) -> date:
    if granularity == "day":
        return day
    if granularity == "week":
        iso = day.isocalendar()
        return date.fromisocalendar(iso[0], iso[1], 1)
    if granularity == "month":
        return day.replace(day=1)
    raise DataError(f"unknown granularity {granularity!r}")


@dataclass(frozen=True)
class AggregateRow:
    platform: Platform
    granularity: str
    period: str
    period_start: date
    group: Optional[str]
    avg_price_usd: Decimal
    volume_usd: Decimal
    tx_count: int

    def to_document(self) -> dict:
        return {
            "platform": self.platform.value,
            "granularity": self.granularity,
            "period": self.period,
            "period_start": self.period_start,
            "group": self.group,
            "avg_price_usd": self.avg_price_usd,
            "volume_usd": self.volume_usd,
            "tx_count": self.tx_count,
        }


def aggregate(trades: Sequence[Trade], granularity: str, group_by: str = "none") -> list[AggregateRow]:
    """One row per (period, group) with at least one trade, ordered by
    (period start, group)."""
    if granularity not in GRANULARITIES:
        raise DataError(f"granularity must be one of {GRANULARITIES}")
    if group_by not in GROUP_KEYS:
        raise DataError(f"group_by must be one of {GROUP_KEYS}")

    buckets: dict[tuple[date, Optional[str]], list[Trade]] = {}
    for t in trades:
        group = None
        if group_by == "exchange":
            group = t.exchange
        elif group_by == "currency":
            group = t.currency
        buckets.setdefault((period_start(t.day, granularity), group), []).append(t)

    rows = []
    for (start, group), members in sorted(buckets.items(), key=lambda kv: (kv[0][0], kv[0][1] or "")):
        volume = sum((t.amount_usd for t in members), ZERO)
        count = len(members)
        rows.append(
            AggregateRow(
                platform=members[0].platform,
                granularity=granularity,
                period=period_key(members[0].day, granularity),
                period_start=start,
                group=group,
                avg_price_usd=volume / count,
                volume_usd=volume,
                tx_count=count,
            )
        )
    return rows


def share_breakdown(trades: Sequence[Trade], key: str) -> dict[str, float]:
    """Fraction of USD volume per exchange or currency; fractions sum to 1."""
    if key not in ("exchange", "currency"):
        raise DataError("key must be 'exchange' or 'currency'")
    volumes: dict[str, Decimal] = {}
    for t in trades:
        k = t.exchange if key == "exchange" else t.currency
        volumes[k] = volumes.get(k, ZERO) + t.amount_usd
    total = sum(volumes.values(), ZERO)
    if total == 0:
        return {}
    return {k: float(v / total) for k, v in sorted(volumes.items())}


@dataclass(frozen=True)
class WethRatioResult:
    series: Series
    gaps: tuple[str, ...]
    """Periods where no non-WETH volume exists (ratio undefined)."""


def weth_ratio(trades: Sequence[Trade], granularity: str = "month") -> WethRatioResult:
    """USD volume in WETH over USD volume in everything else, per period.
    Periods with zero other-currency volume are excluded and reported as gaps."""
    weth: dict[date, Decimal] = {}
    other: dict[date, Decimal] = {}
    for t in trades:
        start = period_start(t.day, granularity)
        side = weth if t.currency == "WETH" else other
        side[start] = side.get(start, ZERO) + t.amount_usd
    points = []
    gaps = []
    for start in sorted(set(weth) | set(other)):
        denominator = other.get(start, ZERO)
        if denominator == 0:
            gaps.append(period_key(start, granularity))
            continue
        points.append((start, float(weth.get(start, ZERO) / denominator)))
    return WethRatioResult(Series(f"weth_ratio_{granularity}", points), tuple(gaps))


def flip_counts(trades: Sequence[Trade], include_non_economic: bool = False) -> dict[int, int]:
    """Trades per token; tokens never traded are absent."""
    out: dict[int, int] = {}
    for t in trades:
        if not include_non_economic and not t.economic:
            continue
        out[t.token_id] = out.get(t.token_id, 0) + 1
    return out
