"""In-memory dataset for one platform, with the lookup indexes the
analytics and valuation stages need."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date
from decimal import Decimal
from typing import Optional

from .records import (
    Estate,
    FxQuote,
    Listing,
    Parcel,
    Platform,
    SocialSignal,
    Trade,
    TrafficSample,
)


@dataclass
class PlatformDataset:
    platform: Platform
    parcels: list[Parcel] = field(default_factory=list)
    estates: list[Estate] = field(default_factory=list)
    trades: list[Trade] = field(default_factory=list)
    listings: list[Listing] = field(default_factory=list)
    traffic: list[TrafficSample] = field(default_factory=list)
    signals: list[SocialSignal] = field(default_factory=list)
    quotes: list[FxQuote] = field(default_factory=list)

    def __post_init__(self):
        self._parcel_by_token: Optional[dict[int, Parcel]] = None
        self._estate_by_id: Optional[dict[str, Estate]] = None
        self._quote_by_key: Optional[dict[tuple[date, str], Decimal]] = None

    # indexes are built lazily and cached; the record lists are treated as
    # frozen once the dataset is handed to analytics
    def parcel(self, token_id: int) -> Optional[Parcel]:
        if self._parcel_by_token is None:
            self._parcel_by_token = {p.token_id: p for p in self.parcels}
        return self._parcel_by_token.get(token_id)

    def estate(self, estate_id: str) -> Optional[Estate]:
        if self._estate_by_id is None:
            self._estate_by_id = {e.estate_id: e for e in self.estates}
        return self._estate_by_id.get(estate_id)

    def quote(self, day: date, currency: str) -> Optional[Decimal]:
        if self._quote_by_key is None:
            self._quote_by_key = {(q.date, q.currency): q.usd_rate for q in self.quotes}
        return self._quote_by_key.get((day, currency))

    def economic_trades(self) -> list[Trade]:
        return [t for t in self.trades if t.economic]

    def date_range(self) -> Optional[tuple[date, date]]:
        """Min and max date over every dated record in the dataset."""
        days: list[date] = [t.day for t in self.trades]
        days += [l.observed_date for l in self.listings]
        days += [s.day for s in self.traffic]
        days += [s.date for s in self.signals]
        days += [q.date for q in self.quotes]
        if not days:
            return None
        return min(days), max(days)

    def end_date(self) -> Optional[date]:
        rng = self.date_range()
        return rng[1] if rng else None
