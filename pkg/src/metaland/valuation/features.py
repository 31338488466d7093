"""Feature assembly: join one trade (or one parcel as of a date) against
parcel metadata, market aggregates, FX quotes, social signals, and trailing
traffic windows.

Joins that find nothing yield the sentinel -1; traffic is the exception
(sum 0 with a companion presence flag, both in the schema).
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date, timedelta
from typing import Optional, Sequence

import numpy as np

from .. import profiles
from ..dataset import PlatformDataset
from ..errors import DataError
from ..records import (
    BoxGeometry,
    Parcel,
    Platform,
    SignalSource,
    Trade,
    TraitGeometry,
    VolumeClassGeometry,
)

MISSING = -1.0
TRAFFIC_WINDOW_DAYS = 7

NUMERIC = "numeric"
CATEGORICAL = "categorical-encoded"

_SERIES_FEATURES = {
    "prev_day_avg_price_usd",
    "eth_usd",
    "token_usd",
    "platform_tweets",
    "metaverse_tweets",
    "google_trend_metaverse",
}


@dataclass(frozen=True)
class FeatureSchema:
    platform: Platform
    names: tuple[str, ...]
    kinds: tuple[str, ...]
    sources: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise DataError("feature names must be unique")
        if not (len(self.names) == len(self.kinds) == len(self.sources)):
            raise DataError("names, kinds and sources must align")

    def __len__(self) -> int:
        return len(self.names)

    def to_document(self) -> dict:
        return {
            "platform": self.platform.value,
            "names": list(self.names),
            "kinds": list(self.kinds),
            "sources": list(self.sources),
        }

    @classmethod
    def from_document(cls, doc: dict) -> "FeatureSchema":
        return cls(
            platform=Platform(doc["platform"]),
            names=tuple(doc["names"]),
            kinds=tuple(doc["kinds"]),
            sources=tuple(doc["sources"]),
        )


def default_schema(platform: Platform, names: Optional[Sequence[str]] = None) -> FeatureSchema:
    """The profile's feature list (Table-style per-platform counts), or a
    caller override using the same resolvers."""
    prof = profiles.profile(platform)
    names = tuple(names) if names is not None else prof.feature_names
    kinds = tuple(CATEGORICAL if n in prof.categorical_features else NUMERIC for n in names)
    sources = tuple(_source_of(n) for n in names)
    return FeatureSchema(platform=platform, names=names, kinds=kinds, sources=sources)


def _source_of(name: str) -> str:
    if name in _SERIES_FEATURES:
        return "series"
    if name.endswith("_7d_sum") or name.endswith("_present"):
        return "traffic"
    return "parcel"


@dataclass(frozen=True)
class TrainingExample:
    token_id: int
    day: date
    features: tuple[float, ...]
    target: float
    weight: float = 1.0


class FeatureContext:
    """Precomputed join tables for one platform dataset."""

    def __init__(self, ds: PlatformDataset, kept_trades: Optional[Sequence[Trade]] = None):
        self.platform = ds.platform
        self.profile = profiles.profile(ds.platform)
        self.parcels = {p.token_id: p for p in ds.parcels}
        self.estate_sizes = {e.estate_id: e.size for e in ds.estates}

        trades = list(kept_trades) if kept_trades is not None else ds.economic_trades()
        totals: dict[date, list] = {}
        for t in trades:
            bucket = totals.setdefault(t.day, [0, 0.0])
            bucket[0] += 1
            bucket[1] += float(t.amount_usd)
        self.avg_price_by_day = {d: v / c for d, (c, v) in totals.items()}

        self.quotes = {(q.date, q.currency): float(q.usd_rate) for q in ds.quotes}
        self.signals = {(s.date, s.source, s.platform): s.value for s in ds.signals}

        self.traffic: dict[str, dict[int, dict[date, int]]] = {
            stream.feature_tag: {} for stream in self.profile.traffic_streams
        }
        tag_of = {(s.metric, s.audience): s.feature_tag for s in self.profile.traffic_streams}
        for sample in ds.traffic:
            tag = tag_of.get((sample.metric, sample.audience))
            if tag is None:
                continue
            per_day = self.traffic[tag].setdefault(sample.token_id, {})
            per_day[sample.day] = per_day.get(sample.day, 0) + sample.count

    def traffic_window(self, tag: str, token_id: int, end_day: date, days: int) -> tuple[float, bool]:
        per_day = self.traffic.get(tag, {}).get(token_id)
        if not per_day:
            return 0.0, False
        total = 0
        present = False
        for offset in range(days):
            d = end_day - timedelta(days=offset)
            if d in per_day:
                total += per_day[d]
                present = True
        return float(total), present


def assemble_features(trade: Trade, ctx: FeatureContext, schema: FeatureSchema) -> TrainingExample:
    parcel = ctx.parcels.get(trade.token_id)
    if parcel is None:
        raise DataError(f"trade references unknown parcel token={trade.token_id}")
    return TrainingExample(
        token_id=trade.token_id,
        day=trade.day,
        features=tuple(feature_vector(parcel, trade.day, ctx, schema)),
        target=float(trade.amount_usd),
    )


def assemble_matrix(
    trades: Sequence[Trade], ctx: FeatureContext, schema: FeatureSchema
) -> tuple[np.ndarray, np.ndarray]:
    examples = [assemble_features(t, ctx, schema) for t in trades]
    X = np.array([e.features for e in examples], dtype=np.float64)
    y = np.array([e.target for e in examples], dtype=np.float64)
    return X, y


def feature_vector(parcel: Parcel, day: date, ctx: FeatureContext, schema: FeatureSchema) -> list[float]:
    return [_resolve(name, parcel, day, ctx) for name in schema.names]


def _resolve(name: str, parcel: Parcel, day: date, ctx: FeatureContext) -> float:
    if name == "x":
        return float(parcel.x)
    if name == "y":
        return float(parcel.y)
    if name == "distance_to_nearest_poi":
        return MISSING if parcel.distance_to_nearest_poi is None else float(parcel.distance_to_nearest_poi)
    if name == "estate_size":
        if parcel.estate_id is None:
            return 1.0
        return float(ctx.estate_sizes.get(parcel.estate_id, 1))
    if name == "area_m2":
        return float(parcel.geometry.area_m2) if isinstance(parcel.geometry, BoxGeometry) else MISSING
    if name == "height_m":
        return float(parcel.geometry.height_m) if isinstance(parcel.geometry, BoxGeometry) else MISSING
    if name == "volume_m3":
        g = parcel.geometry
        return float(g.volume_m3) if isinstance(g, VolumeClassGeometry) else MISSING
    if name == "sediment_code":
        return _trait_code(parcel, "sediment", profiles.OTHERSIDE_SEDIMENTS)
    if name == "artifact_code":
        return _trait_code(parcel, "artifact", profiles.OTHERSIDE_ARTIFACTS)
    if name == "has_koda":
        g = parcel.geometry
        return float(g.has_koda) if isinstance(g, TraitGeometry) else MISSING
    if name.startswith("distance_to_poi_"):
        raw = parcel.extra_attributes.get(f"Distance to POI {name.rsplit('_', 1)[1]}")
        try:
            return MISSING if raw is None else float(raw)
        except (TypeError, ValueError):
            return MISSING
    if name == "prev_day_avg_price_usd":
        return ctx.avg_price_by_day.get(day - timedelta(days=1), MISSING)
    if name == "eth_usd":
        return ctx.quotes.get((day, "ETH"), MISSING)
    if name == "token_usd":
        token = ctx.profile.token_currency
        return MISSING if token is None else ctx.quotes.get((day, token), MISSING)
    if name == "platform_tweets":
        return ctx.signals.get((day, SignalSource.TWITTER_PLATFORM, ctx.platform), MISSING)
    if name == "metaverse_tweets":
        return ctx.signals.get((day, SignalSource.TWITTER_METAVERSE_HASHTAG, None), MISSING)
    if name == "google_trend_metaverse":
        return ctx.signals.get((day, SignalSource.GOOGLE_TREND_METAVERSE, None), MISSING)
    if name.endswith("_7d_sum"):
        total, _ = ctx.traffic_window(name[: -len("_7d_sum")], parcel.token_id, day, TRAFFIC_WINDOW_DAYS)
        return total
    if name.endswith("_present"):
        _, present = ctx.traffic_window(name[: -len("_present")], parcel.token_id, day, TRAFFIC_WINDOW_DAYS)
        return 1.0 if present else 0.0
    raise DataError(f"unknown feature {name!r}")


def _trait_code(parcel: Parcel, attr: str, vocabulary: tuple[str, ...]) -> float:
    g = parcel.geometry
    if not isinstance(g, TraitGeometry):
        return MISSING
    label = getattr(g, attr)
    if label is None:
        return 0.0
    try:
        return float(vocabulary.index(label) + 1)
    except ValueError:
        return float(len(vocabulary) + 1)
