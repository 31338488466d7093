"""Domain records shared by every stage of the pipeline.

All types are immutable value records: once ingested they are safe to share
across threads without coordination. Money fields (USD amounts, crypto
amounts, FX rates) are ``Decimal`` so that aggregation is exact; everything
that feeds the numeric stack (series values, model features) is ``float``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date, datetime, timezone
from decimal import Decimal
from enum import Enum
from typing import Iterable, Mapping, Optional, Union


class Platform(str, Enum):
    """The five supported land platforms."""

    SANDBOX = "sandbox"
    DECENTRALAND = "decentraland"
    VOXELS = "voxels"
    SOMNIUM = "somnium"
    OTHERSIDE = "otherside"


class Chain(str, Enum):
    ETHEREUM = "ethereum"
    POLYGON = "polygon"


class TrafficMetric(str, Enum):
    HOURLY_MAX_CONCURRENT = "hourly_max_concurrent"
    DAILY_CUMULATIVE_UNIQUE = "daily_cumulative_unique"


class TrafficAudience(str, Enum):
    ALL = "all"
    SPECTATORS = "spectators"
    PLAYERS = "players"


class SignalSource(str, Enum):
    TWITTER_PLATFORM = "twitter_platform"
    TWITTER_METAVERSE_HASHTAG = "twitter_metaverse_hashtag"
    GOOGLE_TREND_METAVERSE = "google_trend_metaverse"


CENTS = Decimal("0.01")
RATE_PLACES = Decimal("0.00000001")


def as_money(value) -> Decimal:
    """Coerce a parsed number to a cent-quantized Decimal."""
    return Decimal(value).quantize(CENTS)


def as_rate(value) -> Decimal:
    return Decimal(value).quantize(RATE_PLACES)


# ---------------------------------------------------------------------------
# parcel geometry variants


@dataclass(frozen=True)
class FixedSquareGeometry:
    """Uniform square parcel; side length in meters."""

    side_m: int

    kind = "fixed_square"

    @property
    def scalar(self) -> float:
        return float(self.side_m * self.side_m)


@dataclass(frozen=True)
class BoxGeometry:
    """Voxels-style parcel with a build area (m^2) and height limit (m)."""

    area_m2: float
    height_m: float

    kind = "box"

    @property
    def scalar(self) -> float:
        return float(self.area_m2)


@dataclass(frozen=True)
class VolumeClassGeometry:
    """Somnium-style parcel: a size class that fixes the build volume (m^3)."""

    size_class: str
    volume_m3: int

    kind = "volume_class"

    @property
    def scalar(self) -> float:
        return float(self.volume_m3)


@dataclass(frozen=True)
class TraitGeometry:
    """Otherside-style parcel described by resource traits."""

    sediment: Optional[str]
    artifact: Optional[str]
    has_koda: bool

    kind = "traits"

    @property
    def scalar(self) -> float:
        # trait richness: how many resource slots are filled
        return float((self.sediment is not None) + (self.artifact is not None))


ParcelGeometry = Union[FixedSquareGeometry, BoxGeometry, VolumeClassGeometry, TraitGeometry]


@dataclass(frozen=True)
class Parcel:
    platform: Platform
    token_id: int
    x: int
    y: int
    geometry: ParcelGeometry
    estate_id: Optional[str] = None
    distance_to_nearest_poi: Optional[float] = None
    extra_attributes: Mapping[str, object] = field(default_factory=dict)
    """Attributes the metadata parser did not recognize, kept verbatim."""


@dataclass(frozen=True)
class Estate:
    """A group of adjacent parcels managed as one unit (derived from parcels)."""

    platform: Platform
    estate_id: str
    member_tokens: frozenset[int]

    @property
    def size(self) -> int:
        return len(self.member_tokens)


@dataclass(frozen=True)
class Trade:
    platform: Platform
    token_id: int
    timestamp: datetime
    chain: Chain
    exchange: str
    currency: str
    amount_crypto: Decimal
    amount_usd: Decimal
    buyer: str
    seller: str
    economic: bool

    def __post_init__(self):
        if self.timestamp.tzinfo is None:
            object.__setattr__(self, "timestamp", self.timestamp.replace(tzinfo=timezone.utc))

    @property
    def day(self) -> date:
        return self.timestamp.astimezone(timezone.utc).date()


@dataclass(frozen=True)
class Listing:
    platform: Platform
    token_id: int
    exchange: str
    price_currency: str
    price_amount: Decimal
    price_usd: Decimal
    observed_date: date


@dataclass(frozen=True)
class TrafficSample:
    platform: Platform
    token_id: int
    period_start: datetime
    metric: TrafficMetric
    audience: TrafficAudience
    count: int

    @property
    def day(self) -> date:
        return self.period_start.astimezone(timezone.utc).date()


@dataclass(frozen=True)
class SocialSignal:
    date: date
    source: SignalSource
    platform: Optional[Platform]
    value: float


@dataclass(frozen=True)
class FxQuote:
    date: date
    currency: str
    usd_rate: Decimal


class Series:
    """A named daily time series with strictly increasing dates."""

    __slots__ = ("name", "dates", "values")

    def __init__(self, name: str, points: Iterable[tuple[date, float]]):
        pts = list(points)
        for (a, _), (b, _) in zip(pts, pts[1:]):
            if b <= a:
                raise ValueError(f"series {name!r}: dates must be strictly increasing ({a} -> {b})")
        self.name = name
        self.dates: tuple[date, ...] = tuple(d for d, _ in pts)
        self.values: tuple[float, ...] = tuple(float(v) for _, v in pts)

    def __len__(self) -> int:
        return len(self.dates)

    def __iter__(self):
        return iter(zip(self.dates, self.values))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Series)
            and self.name == other.name
            and self.dates == other.dates
            and self.values == other.values
        )

    def __repr__(self) -> str:
        return f"Series({self.name!r}, {len(self)} points)"

    def value_on(self, d: date) -> Optional[float]:
        try:
            return self.values[self.dates.index(d)]
        except ValueError:
            return None
