"""The eight map view layers: deterministic per-parcel metric + color
assignments, serialized for the explorer UI.

Colors are deciles of the layer's non-null metric distribution (10 bins,
nearest-rank boundaries). Regenerating a layer from identical inputs gives
identical bytes; generated_at is the dataset's latest data date, not wall
clock, for exactly that reason.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from datetime import date
from decimal import Decimal
from math import ceil
from typing import Optional

import numpy as np

from . import profiles
from .analytics.aggregation import flip_counts
from .dataset import PlatformDataset
from .errors import DataError
from .records import FixedSquareGeometry, Platform, TraitGeometry
from .valuation.boosting import GbtModel
from .valuation.features import FeatureContext, FeatureSchema, feature_vector

VIEW_IDS = ("land", "trading", "last_price", "value", "fair_value", "flip", "traffic", "resources")
MODEL_VIEWS = ("value", "fair_value")
TRAFFIC_VIEW_WINDOW_DAYS = 30
N_BINS = 10
KODA_WEIGHT = 10.0


@dataclass(frozen=True)
class ViewEntry:
    token_id: int
    x: int
    y: int
    metric: Optional[float]
    color: Optional[int]


@dataclass(frozen=True)
class ViewLayer:
    platform: Platform
    view_id: str
    generated_at: date
    legend: tuple[float, ...]
    entries: tuple[ViewEntry, ...]

    def to_document(self) -> dict:
        return {
            "platform": self.platform.value,
            "view_id": self.view_id,
            "generated_at": self.generated_at,
            "legend": list(self.legend),
            "entries": [
                {"token_id": e.token_id, "x": e.x, "y": e.y, "metric": e.metric, "color": e.color}
                for e in self.entries
            ],
        }

    @classmethod
    def from_document(cls, doc: dict) -> "ViewLayer":
        return cls(
            platform=Platform(doc["platform"]),
            view_id=doc["view_id"],
            generated_at=date.fromisoformat(doc["generated_at"]),
            legend=tuple(float(v) for v in doc["legend"]),
            entries=tuple(
                ViewEntry(
                    token_id=e["token_id"],
                    x=e["x"],
                    y=e["y"],
                    metric=None if e["metric"] is None else float(e["metric"]),
                    color=None if e["color"] is None else int(e["color"]),
                )
                for e in doc["entries"]
            ),
        )


def decile_legend(values: list[float]) -> tuple[float, ...]:
    """Upper bin boundaries at the 10%..100% nearest-rank quantiles."""
    if not values:
        return ()
    sv = sorted(values)
    n = len(sv)
    bounds = [sv[min(n, ceil(round((i + 1) / N_BINS * n, 9))) - 1] for i in range(N_BINS)]
    bounds[-1] = sv[-1]
    return tuple(bounds)


def color_for(metric: float, legend: tuple[float, ...]) -> int:
    return min(bisect_left(legend, metric), N_BINS - 1)


def generate_view(
    platform: Platform,
    view_id: str,
    ds: PlatformDataset,
    model: Optional[GbtModel] = None,
    ctx: Optional[FeatureContext] = None,
) -> ViewLayer:
    """Compute one layer. Model-backed views (value, fair_value) need the
    trained model; its feature context defaults to the dataset itself."""
    if platform is not ds.platform:
        raise DataError(f"dataset is for {ds.platform.value}, not {platform.value}")
    if view_id not in VIEW_IDS:
        raise DataError(f"unknown view {view_id!r}")
    if view_id == "resources" and platform is not Platform.OTHERSIDE:
        raise DataError("resources view is defined for otherside only")
    if view_id == "traffic" and not profiles.profile(platform).traffic_streams:
        raise DataError(f"{platform.value} has no traffic data")
    if view_id in MODEL_VIEWS and model is None:
        raise DataError(f"{view_id} view needs a trained model")

    as_of = ds.end_date() or date(1970, 1, 1)
    metric_of = _metrics(view_id, ds, model, ctx, as_of)

    values = [m for m in metric_of.values() if m is not None]
    legend = decile_legend(values)
    entries = []
    for p in sorted(ds.parcels, key=lambda p: p.token_id):
        metric = metric_of.get(p.token_id)
        color = None if metric is None else color_for(metric, legend)
        entries.append(ViewEntry(token_id=p.token_id, x=p.x, y=p.y, metric=metric, color=color))
    return ViewLayer(
        platform=platform,
        view_id=view_id,
        generated_at=as_of,
        legend=legend,
        entries=tuple(entries),
    )


def generate_all_views(platform, ds, model=None, ctx=None) -> dict[str, ViewLayer]:
    """Every view that applies to the platform."""
    out = {}
    for view_id in VIEW_IDS:
        if view_id == "resources" and platform is not Platform.OTHERSIDE:
            continue
        if view_id == "traffic" and not profiles.profile(platform).traffic_streams:
            continue
        if view_id in MODEL_VIEWS and model is None:
            continue
        out[view_id] = generate_view(platform, view_id, ds, model=model, ctx=ctx)
    return out


def _metrics(view_id, ds, model, ctx, as_of) -> dict[int, Optional[float]]:
    if view_id == "land":
        return {p.token_id: _land_metric(p, ds) for p in ds.parcels}
    if view_id == "trading":
        return _current_listing_metric(ds)
    if view_id == "last_price":
        return _last_price_metric(ds)
    if view_id == "flip":
        counts = flip_counts(ds.trades)
        return {p.token_id: float(counts.get(p.token_id, 0)) for p in ds.parcels}
    if view_id == "traffic":
        return _traffic_metric(ds, ctx, as_of)
    if view_id == "resources":
        return {p.token_id: _resources_metric(p) for p in ds.parcels}
    if view_id == "fair_value":
        return _fair_value_metric(ds, model, ctx, as_of)
    if view_id == "value":
        fair = _fair_value_metric(ds, model, ctx, as_of)
        last = _last_price_metric(ds)
        out = {}
        for token, price in last.items():
            prediction = fair.get(token)
            out[token] = None if price is None or not prediction else price / prediction
        return out
    raise DataError(f"unknown view {view_id!r}")


def _land_metric(parcel, ds) -> float:
    if isinstance(parcel.geometry, FixedSquareGeometry):
        if parcel.estate_id is None:
            return 1.0
        estate = ds.estate(parcel.estate_id)
        return float(estate.size) if estate else 1.0
    return parcel.geometry.scalar


def _resources_metric(parcel) -> Optional[float]:
    g = parcel.geometry
    if not isinstance(g, TraitGeometry):
        return None
    return g.scalar + (KODA_WEIGHT if g.has_koda else 0.0)


def _current_listing_metric(ds) -> dict[int, Optional[float]]:
    latest = max((l.observed_date for l in ds.listings), default=None)
    best: dict[int, Decimal] = {}
    for l in ds.listings:
        if l.observed_date != latest:
            continue
        cur = best.get(l.token_id)
        if cur is None or l.price_usd < cur:
            best[l.token_id] = l.price_usd
    return {p.token_id: (float(best[p.token_id]) if p.token_id in best else None) for p in ds.parcels}


def _last_price_metric(ds) -> dict[int, Optional[float]]:
    last: dict[int, tuple] = {}
    for t in ds.trades:
        if not t.economic:
            continue
        cur = last.get(t.token_id)
        if cur is None or t.timestamp > cur[0]:
            last[t.token_id] = (t.timestamp, float(t.amount_usd))
    return {p.token_id: (last[p.token_id][1] if p.token_id in last else None) for p in ds.parcels}


def _traffic_metric(ds, ctx, as_of) -> dict[int, Optional[float]]:
    ctx = ctx or FeatureContext(ds)
    tags = [s.feature_tag for s in ctx.profile.traffic_streams]
    out: dict[int, Optional[float]] = {}
    for p in ds.parcels:
        total = 0.0
        seen = False
        for tag in tags:
            amount, present = ctx.traffic_window(tag, p.token_id, as_of, TRAFFIC_VIEW_WINDOW_DAYS)
            total += amount
            seen = seen or present
        out[p.token_id] = total if seen else 0.0
    return out


def _fair_value_metric(ds, model, ctx, as_of) -> dict[int, float]:
    ctx = ctx or FeatureContext(ds)
    if model.schema is None:
        raise DataError("model has no feature schema; cannot assemble current features")
    schema: FeatureSchema = model.schema
    parcels = sorted(ds.parcels, key=lambda p: p.token_id)
    X = np.array([feature_vector(p, as_of, ctx, schema) for p in parcels], dtype=np.float64)
    preds = model.predict(X)
    return {p.token_id: float(v) for p, v in zip(parcels, preds)}
