"""Snapshot: the immutable artifact the read API serves.

build_snapshot runs the full pipeline per platform (ingest -> validate ->
filter -> aggregate -> correlate -> search+train -> evaluate -> views) and
fails atomically with a stage-tagged error. A snapshot saves to a directory
of canonical JSON files; its digest is a SHA-256 over every stored byte, so
"load then save" reproduces the digest exactly.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass, field
from datetime import date
from typing import Optional, Sequence

import numpy as np

from . import jsonio
from .analytics.aggregation import GRANULARITIES, GROUP_KEYS, AggregateRow, aggregate
from .analytics.correlation import CorrelationMatrix, correlation_matrix
from .analytics.filtering import FilterReport, filter_trades
from .dataset import PlatformDataset
from .errors import DataError, StageError
from .ingest.fixtures import (
    FixtureManifest,
    dedupe_listings,
    derive_estates,
    ingest_manifest,
    listings_documents,
    load_manifest,
    parse_listings,
    parse_quotes,
    parse_signals,
    parse_trades,
    parse_traffic,
    quote_record,
    signal_record,
    trade_record,
    traffic_record,
)
from .ingest.metadata import parse_parcel_metadata, serialize_parcel_metadata
from .records import Platform
from .validation import validate_dataset
from .valuation.boosting import GbtModel, train_gbt
from .valuation.features import FeatureContext, assemble_matrix, default_schema
from .valuation.modelio import document_to_model, model_to_document
from .valuation.search import (
    EvalReport,
    SearchSpace,
    evaluate,
    random_search,
    split_indices,
)
from .views import ViewLayer, generate_all_views

SNAPSHOT_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class BuildConfig:
    percentile: float = 0.99
    split_ratio: float = 0.8
    search_trials: int = 30
    search_space: SearchSpace = SearchSpace()
    deseason_period: int = 7
    min_train_examples: int = 20
    """Platforms with fewer filtered trades than this get no model (and no
    model-backed views) instead of a meaningless fit."""

    def to_document(self) -> dict:
        return {
            "percentile": self.percentile,
            "split_ratio": self.split_ratio,
            "search_trials": self.search_trials,
            "search_space": {
                "n_trees": list(self.search_space.n_trees),
                "max_depth": list(self.search_space.max_depth),
                "learning_rate": list(self.search_space.learning_rate),
                "min_leaf": list(self.search_space.min_leaf),
                "subsample": list(self.search_space.subsample),
                "colsample": list(self.search_space.colsample),
                "lam": list(self.search_space.lam),
            },
            "deseason_period": self.deseason_period,
            "min_train_examples": self.min_train_examples,
        }

    @classmethod
    def from_document(cls, doc: dict) -> "BuildConfig":
        space = doc["search_space"]
        return cls(
            percentile=float(doc["percentile"]),
            split_ratio=float(doc["split_ratio"]),
            search_trials=int(doc["search_trials"]),
            search_space=SearchSpace(
                n_trees=tuple(int(v) for v in space["n_trees"]),
                max_depth=tuple(int(v) for v in space["max_depth"]),
                learning_rate=tuple(float(v) for v in space["learning_rate"]),
                min_leaf=tuple(int(v) for v in space["min_leaf"]),
                subsample=tuple(float(v) for v in space["subsample"]),
                colsample=tuple(float(v) for v in space["colsample"]),
                lam=tuple(float(v) for v in space["lam"]),
            ),
            deseason_period=int(doc["deseason_period"]),
            min_train_examples=int(doc["min_train_examples"]),
        )


@dataclass
class PlatformBundle:
    dataset: PlatformDataset
    kept_trades: list
    filter_report: FilterReport
    aggregates: dict[tuple[str, str], list[AggregateRow]]
    correlations: CorrelationMatrix
    model: Optional[GbtModel]
    eval_report: Optional[EvalReport]
    views: dict[str, ViewLayer]
    view_bytes: dict[str, bytes] = field(default_factory=dict)

    def __post_init__(self):
        if not self.view_bytes:
            self.view_bytes = {
                vid: (jsonio.canonical_dumps(layer.to_document()) + "\n").encode("utf-8")
                for vid, layer in self.views.items()
            }
        self.last_trade_by_token = {}
        for t in self.dataset.trades:
            if not t.economic:
                continue
            cur = self.last_trade_by_token.get(t.token_id)
            if cur is None or t.timestamp > cur.timestamp:
                self.last_trade_by_token[t.token_id] = t
        latest = max((l.observed_date for l in self.dataset.listings), default=None)
        self.current_listing_by_token = {}
        for l in self.dataset.listings:
            if l.observed_date != latest:
                continue
            cur = self.current_listing_by_token.get(l.token_id)
            if cur is None or l.price_usd < cur.price_usd:
                self.current_listing_by_token[l.token_id] = l
        self.flip_by_token = {}
        for t in self.dataset.trades:
            if t.economic:
                self.flip_by_token[t.token_id] = self.flip_by_token.get(t.token_id, 0) + 1
        self.traffic_daily_by_token: dict[int, dict] = {}
        for s in self.dataset.traffic:
            per_day = self.traffic_daily_by_token.setdefault(s.token_id, {})
            per_day[s.day] = per_day.get(s.day, 0) + s.count
        fair = self.views.get("fair_value")
        self.fair_value_by_token = (
            {e.token_id: e.metric for e in fair.entries} if fair is not None else {}
        )


@dataclass
class Snapshot:
    schema_version: int
    seed: int
    config: BuildConfig
    bundles: dict[Platform, PlatformBundle]

    @property
    def platforms(self) -> list[Platform]:
        return sorted(self.bundles, key=lambda p: p.value)

    def bundle(self, platform: Platform) -> PlatformBundle:
        return self.bundles[platform]

    # ---------------------------------------------------------------- save

    def file_map(self) -> dict[str, bytes]:
        """Every artifact as (relative path -> canonical bytes); the digest
        and meta.json are derived from this map, never stored in it."""
        out: dict[str, bytes] = {}

        def put_doc(rel: str, doc) -> None:
            out[rel] = (jsonio.canonical_dumps(doc) + "\n").encode("utf-8")

        def put_ndjson(rel: str, docs) -> None:
            out[rel] = "".join(jsonio.canonical_dumps(d) + "\n" for d in docs).encode("utf-8")

        for platform in self.platforms:
            b = self.bundles[platform]
            ds = b.dataset
            root = platform.value
            put_ndjson(f"{root}/dataset/parcels.ndjson", (serialize_parcel_metadata(p) for p in ds.parcels))
            put_ndjson(f"{root}/dataset/trades.ndjson", (trade_record(t) for t in ds.trades))
            put_ndjson(f"{root}/dataset/listings.ndjson", listings_documents(ds.listings))
            if ds.traffic:
                put_ndjson(f"{root}/dataset/traffic.ndjson", (traffic_record(s) for s in ds.traffic))
            put_ndjson(f"{root}/dataset/signals.ndjson", (signal_record(s) for s in ds.signals))
            put_ndjson(f"{root}/dataset/quotes.ndjson", (quote_record(q) for q in ds.quotes))
            put_doc(f"{root}/analytics/filter_report.json", b.filter_report.to_document())
            for (granularity, group_by), rows in sorted(b.aggregates.items()):
                put_ndjson(
                    f"{root}/analytics/aggregates_{granularity}_{group_by}.ndjson",
                    (r.to_document() for r in rows),
                )
            put_doc(f"{root}/analytics/correlations.json", b.correlations.to_document())
            if b.model is not None:
                put_doc(f"{root}/model/model.json", model_to_document(b.model))
                put_doc(f"{root}/model/eval.json", b.eval_report.to_document())
            for view_id in sorted(b.views):
                out[f"{root}/views/{view_id}.json"] = b.view_bytes[view_id]
        return out

    def digest(self) -> str:
        return digest_file_map(self.file_map())

    def save(self, directory: str) -> str:
        files = self.file_map()
        digest = digest_file_map(files)
        os.makedirs(directory, exist_ok=True)
        for rel, data in files.items():
            path = os.path.join(directory, rel)
            os.makedirs(os.path.dirname(path), exist_ok=True)
            with open(path, "wb") as fh:
                fh.write(data)
        meta = {
            "schema_version": self.schema_version,
            "seed": self.seed,
            "config": self.config.to_document(),
            "platforms": [p.value for p in self.platforms],
            "digest": digest,
        }
        with open(os.path.join(directory, "meta.json"), "wb") as fh:
            fh.write((jsonio.canonical_dumps(meta) + "\n").encode("utf-8"))
        return digest


def digest_file_map(files: dict[str, bytes]) -> str:
    h = hashlib.sha256()
    for rel in sorted(files):
        h.update(rel.encode("utf-8"))
        h.update(b"\x00")
        h.update(hashlib.sha256(files[rel]).digest())
    return h.hexdigest()


def tree_digest(directory: str) -> str:
    """Digest of an arbitrary directory tree (same scheme as snapshots)."""
    files: dict[str, bytes] = {}
    for root, _, names in os.walk(directory):
        for name in names:
            path = os.path.join(root, name)
            rel = os.path.relpath(path, directory).replace(os.sep, "/")
            with open(path, "rb") as fh:
                files[rel] = fh.read()
    return digest_file_map(files)


# --------------------------------------------------------------------- build


def build_snapshot(
    manifests: Sequence[FixtureManifest | str],
    config: BuildConfig = BuildConfig(),
    seed: int = 0,
) -> Snapshot:
    loaded: list[FixtureManifest] = []
    for m in manifests:
        loaded.append(load_manifest(m) if isinstance(m, str) else m)
    loaded.sort(key=lambda m: m.platform.value)
    if len({m.platform for m in loaded}) != len(loaded):
        raise StageError("ingest", DataError("duplicate platform manifests"))

    bundles: dict[Platform, PlatformBundle] = {}
    for index, manifest in enumerate(loaded):
        bundles[manifest.platform] = _build_platform(manifest, config, seed, index)
    return Snapshot(
        schema_version=SNAPSHOT_SCHEMA_VERSION, seed=seed, config=config, bundles=bundles
    )


def _build_platform(manifest: FixtureManifest, config: BuildConfig, seed: int, index: int) -> PlatformBundle:
    platform = manifest.platform

    try:
        ds = ingest_manifest(manifest)
    except Exception as exc:
        raise StageError("ingest", exc) from exc

    report = validate_dataset(ds)
    if not report.ok:
        raise StageError(platform.value + ":validate", DataError(report.summary()))

    try:
        kept, filter_report = filter_trades(ds.economic_trades(), config.percentile)
    except Exception as exc:
        raise StageError("filter", exc) from exc

    try:
        aggregates = {
            (granularity, group_by): aggregate(kept, granularity, group_by)
            for granularity in GRANULARITIES
            for group_by in GROUP_KEYS
        }
    except Exception as exc:
        raise StageError("aggregate", exc) from exc

    try:
        correlations = correlation_matrix(platform, ds, kept, config.deseason_period)
    except Exception as exc:
        raise StageError("correlate", exc) from exc

    model = None
    eval_report = None
    ctx = FeatureContext(ds, kept)
    if len(kept) >= config.min_train_examples:
        try:
            schema = default_schema(platform)
            X, y = assemble_matrix(kept, ctx, schema)
            split_seed = _derive(seed, index, 0)
            train_idx, test_idx = split_indices(len(y), config.split_ratio, split_seed)
            X_train, y_train = X[train_idx], y[train_idx]
            X_test, y_test = X[test_idx], y[test_idx]
            result = random_search(
                X_train, y_train, config.search_space, config.search_trials, _derive(seed, index, 1)
            )
            model = train_gbt(X_train, y_train, result.best, _derive(seed, index, 2), schema=schema)
            eval_report = evaluate(model, X_train, y_train, X_test, y_test)
        except Exception as exc:
            raise StageError("train", exc) from exc

    try:
        views = generate_all_views(platform, ds, model=model, ctx=ctx)
    except Exception as exc:
        raise StageError("viewgen", exc) from exc

    return PlatformBundle(
        dataset=ds,
        kept_trades=kept,
        filter_report=filter_report,
        aggregates=aggregates,
        correlations=correlations,
        model=model,
        eval_report=eval_report,
        views=views,
    )


def _derive(seed: int, index: int, key: int) -> int:
    return int(np.random.SeedSequence(seed, spawn_key=(index, key)).generate_state(1)[0])


# ---------------------------------------------------------------------- load


def load_snapshot(directory: str) -> Snapshot:
    meta_path = os.path.join(directory, "meta.json")
    with open(meta_path, "r", encoding="utf-8") as fh:
        meta = jsonio.loads(fh.read())
    if meta.get("schema_version") != SNAPSHOT_SCHEMA_VERSION:
        raise DataError(f"unsupported snapshot schema_version {meta.get('schema_version')!r}")
    config = BuildConfig.from_document(meta["config"])

    bundles = {}
    for name in meta["platforms"]:
        platform = Platform(name)
        bundles[platform] = _load_platform(directory, platform, config)
    snap = Snapshot(
        schema_version=meta["schema_version"], seed=meta["seed"], config=config, bundles=bundles
    )
    actual = snap.digest()
    if actual != meta["digest"]:
        raise DataError(f"snapshot digest mismatch: meta says {meta['digest']}, files give {actual}")
    return snap


def _load_platform(directory: str, platform: Platform, config: BuildConfig) -> PlatformBundle:
    root = os.path.join(directory, platform.value)

    def read_doc(rel: str, exact: bool = False):
        with open(os.path.join(root, rel), "r", encoding="utf-8") as fh:
            text = fh.read()
        return jsonio.loads_exact(text) if exact else jsonio.loads(text)

    parcels = [
        parse_parcel_metadata(platform, doc, locator=f"{platform.value}/dataset/parcels.ndjson:{n}")
        for n, doc in jsonio.iter_ndjson(os.path.join(root, "dataset/parcels.ndjson"), exact=False)
    ]
    quotes = parse_quotes(jsonio.iter_ndjson(os.path.join(root, "dataset/quotes.ndjson")))
    trades = parse_trades(platform, jsonio.iter_ndjson(os.path.join(root, "dataset/trades.ndjson")), quotes)
    listings = []
    for n, doc in jsonio.iter_ndjson(os.path.join(root, "dataset/listings.ndjson")):
        listings.extend(parse_listings(doc, locator=f"listings:{n}"))
    listings = dedupe_listings(listings)
    traffic = []
    traffic_path = os.path.join(root, "dataset/traffic.ndjson")
    if os.path.exists(traffic_path):
        traffic = parse_traffic(platform, jsonio.iter_ndjson(traffic_path))
    signals = parse_signals(jsonio.iter_ndjson(os.path.join(root, "dataset/signals.ndjson")))
    ds = PlatformDataset(
        platform=platform,
        parcels=parcels,
        estates=derive_estates(platform, parcels),
        trades=trades,
        listings=listings,
        traffic=traffic,
        signals=signals,
        quotes=quotes,
    )

    kept, _ = filter_trades(ds.economic_trades(), config.percentile)
    report_doc = read_doc("analytics/filter_report.json", exact=True)
    filter_report = FilterReport(
        platform=platform,
        considered_volume_usd=report_doc["considered_volume_usd"],
        discarded_volume_usd=report_doc["discarded_volume_usd"],
        considered_count=int(report_doc["considered_count"]),
        discarded_count=int(report_doc["discarded_count"]),
        threshold_usd=report_doc["threshold_usd"],
    )

    aggregates = {}
    for granularity in GRANULARITIES:
        for group_by in GROUP_KEYS:
            rel = os.path.join(root, f"analytics/aggregates_{granularity}_{group_by}.ndjson")
            rows = []
            if os.path.exists(rel):
                for _, doc in jsonio.iter_ndjson(rel):
                    rows.append(
                        AggregateRow(
                            platform=platform,
                            granularity=doc["granularity"],
                            period=doc["period"],
                            period_start=date.fromisoformat(doc["period_start"]),
                            group=doc["group"],
                            avg_price_usd=doc["avg_price_usd"],
                            volume_usd=doc["volume_usd"],
                            tx_count=int(doc["tx_count"]),
                        )
                    )
            aggregates[(granularity, group_by)] = rows

    corr_doc = read_doc("analytics/correlations.json")
    correlations = CorrelationMatrix(
        platform=platform,
        names=tuple(corr_doc["names"]),
        matrix=tuple(tuple(row) for row in corr_doc["matrix"]),
        undefined=tuple(corr_doc["undefined"]),
    )

    model = None
    eval_report = None
    model_path = os.path.join(root, "model/model.json")
    if os.path.exists(model_path):
        model = document_to_model(read_doc("model/model.json"))
        eval_report = EvalReport.from_document(read_doc("model/eval.json"))

    views = {}
    view_bytes = {}
    views_dir = os.path.join(root, "views")
    if os.path.isdir(views_dir):
        for name in sorted(os.listdir(views_dir)):
            if not name.endswith(".json"):
                continue
            view_id = name[: -len(".json")]
            with open(os.path.join(views_dir, name), "rb") as fh:
                raw = fh.read()
            view_bytes[view_id] = raw
            views[view_id] = ViewLayer.from_document(jsonio.loads(raw.decode("utf-8")))

    return PlatformBundle(
        dataset=ds,
        kept_trades=kept,
        filter_report=filter_report,
        aggregates=aggregates,
        correlations=correlations,
        model=model,
        eval_report=eval_report,
        views=views,
        view_bytes=view_bytes,
    )
