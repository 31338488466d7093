"""Operator CLI: synth | build | serve | export | predict | view.

Exit codes: 0 success, 1 data error, 2 usage error.
"""

from __future__ import annotations

import csv
import sys
from datetime import date

import click

from . import jsonio
from .errors import MetalandError
from .ingest.synth import SynthConfig, generate_synthetic, write_fixtures
from .records import Platform
from .snapshot import BuildConfig, SearchSpace, Snapshot, build_snapshot, load_snapshot, tree_digest
from .valuation.features import FeatureContext, feature_vector
from .valuation.search import feature_importance


@click.group()
def main() -> None:
    """Metaverse land-market analytics: build snapshots from fixture data,
    inspect them, and serve the read API."""


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _load(snapshot_dir: str) -> Snapshot:
    try:
        return load_snapshot(snapshot_dir)
    except (MetalandError, OSError, ValueError) as exc:
        _fail(str(exc))


def _platform(name: str) -> Platform:
    try:
        return Platform(name)
    except ValueError:
        raise click.UsageError(f"unknown platform {name!r} (use one of: {', '.join(p.value for p in Platform)})")


@main.command()
@click.option("--seed", type=int, required=True)
@click.option("--out", "out_dir", type=click.Path(), required=True)
@click.option("--grid", "grid_size", type=int, default=SynthConfig.grid_size, show_default=True)
@click.option("--pois", "n_pois", type=int, default=SynthConfig.n_pois, show_default=True)
@click.option("--days", "n_days", type=int, default=SynthConfig.n_days, show_default=True)
@click.option("--trades", "n_trades", type=int, default=SynthConfig.n_trades, show_default=True)
@click.option("--noise", type=float, default=SynthConfig.noise, show_default=True)
@click.option("--start", type=str, default=SynthConfig.start.isoformat(), show_default=True)
@click.option("--platform", "platform_names", multiple=True, help="Restrict to platform(s); default all five.")
def synth(seed, out_dir, grid_size, n_pois, n_days, n_trades, noise, start, platform_names):
    """Generate a deterministic synthetic fixture tree."""
    platforms = tuple(_platform(n) for n in platform_names) or tuple(Platform)
    try:
        config = SynthConfig(
            grid_size=grid_size,
            n_pois=n_pois,
            n_days=n_days,
            n_trades=n_trades,
            noise=noise,
            start=date.fromisoformat(start),
            platforms=platforms,
        )
        result = generate_synthetic(seed, config)
        write_fixtures(result, out_dir)
    except (MetalandError, ValueError, OSError) as exc:
        _fail(str(exc))
    click.echo(f"wrote fixtures for {len(platforms)} platform(s) to {out_dir}")
    click.echo(f"digest {tree_digest(out_dir)}")


@main.command()
@click.option("--manifest", "manifest_paths", type=click.Path(exists=True), multiple=True, required=True,
              help="Platform manifest, or an index manifest with a 'manifests' list; repeatable.")
@click.option("--out", "out_dir", type=click.Path(), required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--trials", type=int, default=BuildConfig.search_trials, show_default=True,
              help="Randomized-search trials per platform model.")
@click.option("--max-trees", type=int, default=SearchSpace.n_trees[1], show_default=True,
              help="Upper bound of the searched tree-count range.")
def build(manifest_paths, out_dir, seed, trials, max_trees):
    """Run the full pipeline over fixture manifests and save a snapshot."""
    import os

    expanded: list[str] = []
    try:
        for path in manifest_paths:
            with open(path, "r", encoding="utf-8") as fh:
                doc = jsonio.loads(fh.read())
            if isinstance(doc, dict) and "manifests" in doc:
                base = os.path.dirname(os.path.abspath(path))
                expanded.extend(os.path.join(base, rel) for rel in doc["manifests"])
            else:
                expanded.append(path)
        space = SearchSpace(n_trees=(min(SearchSpace.n_trees[0], max_trees), max_trees))
        config = BuildConfig(search_trials=trials, search_space=space)
        snap = build_snapshot(expanded, config, seed)
        digest = snap.save(out_dir)
    except MetalandError as exc:
        _fail(str(exc))
    except (ValueError, OSError) as exc:
        _fail(str(exc))
    click.echo(f"snapshot saved to {out_dir} ({len(snap.bundles)} platform(s))")
    click.echo(f"digest {digest}")


@main.command()
@click.option("--snapshot", "snapshot_dir", type=click.Path(exists=True), required=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--cors-origin", default=None, help="Allow this origin on every endpoint (for the explorer UI).")
def serve(snapshot_dir, host, port, cors_origin):
    """Serve the read-only API over a snapshot."""
    from .service import serve as run_service

    snap = _load(snapshot_dir)
    click.echo(f"serving {len(snap.bundles)} platform(s) on http://{host}:{port}")
    run_service(snap, host=host, port=port, cors_origin=cors_origin)


_EXPORT_TABLES = ("aggregates", "filter-report", "correlations", "importance", "trades", "series")
_SERIES_METRICS = ("avg_price", "volume", "tx_count", "weth_ratio")


@main.command()
@click.argument("table", type=click.Choice(_EXPORT_TABLES))
@click.option("--snapshot", "snapshot_dir", type=click.Path(exists=True), required=True)
@click.option("--platform", "platform_name", required=True)
@click.option("--granularity", default="day", show_default=True)
@click.option("--group-by", default="none", show_default=True)
@click.option("--metric", type=click.Choice(_SERIES_METRICS), default="avg_price",
              show_default=True, help="Which series to dump (table=series only).")
@click.option("--out", "out_path", type=click.Path(), default="-", show_default=True)
def export(table, snapshot_dir, platform_name, granularity, group_by, metric, out_path):
    """Dump one analytics table as CSV (series gives plot-ready period,value)."""
    platform = _platform(platform_name)
    snap = _load(snapshot_dir)
    bundle = snap.bundles.get(platform)
    if bundle is None:
        _fail(f"snapshot has no platform {platform.value!r}")

    if table == "aggregates":
        rows = bundle.aggregates.get((granularity, group_by))
        if rows is None:
            raise click.UsageError(f"no aggregate table ({granularity}, {group_by})")
        header = ["period", "period_start", "group", "avg_price_usd", "volume_usd", "tx_count"]
        data = [
            [r.period, r.period_start.isoformat(), r.group or "", str(r.avg_price_usd), str(r.volume_usd), r.tx_count]
            for r in rows
        ]
    elif table == "filter-report":
        r = bundle.filter_report
        header = ["platform", "considered_volume_usd", "discarded_volume_usd", "considered_count",
                  "discarded_count", "threshold_usd"]
        data = [[platform.value, str(r.considered_volume_usd), str(r.discarded_volume_usd),
                 r.considered_count, r.discarded_count, str(r.threshold_usd)]]
    elif table == "correlations":
        m = bundle.correlations
        header = ["series", *m.names]
        data = [[name, *["" if v is None else repr(v) for v in row]] for name, row in zip(m.names, m.matrix)]
    elif table == "importance":
        if bundle.model is None:
            _fail(f"no model for {platform.value}")
        header = ["feature", "splits", "share"]
        data = [[r.feature, r.splits, repr(r.share)] for r in feature_importance(bundle.model)]
    elif table == "series":
        header = ["period", "value"]
        if metric == "weth_ratio":
            from .analytics.aggregation import period_key, weth_ratio

            result = weth_ratio(bundle.kept_trades, granularity)
            data = [[period_key(d, granularity), repr(v)] for d, v in result.series]
        else:
            rows = bundle.aggregates.get((granularity, "none"))
            if rows is None:
                raise click.UsageError(f"no aggregate table for granularity {granularity!r}")
            field = {"avg_price": "avg_price_usd", "volume": "volume_usd", "tx_count": "tx_count"}[metric]
            data = [[r.period, str(getattr(r, field))] for r in rows]
    else:  # trades
        header = ["timestamp", "token_id", "exchange", "currency", "amount_crypto", "amount_usd"]
        data = [
            [t.timestamp.isoformat().replace("+00:00", "Z"), t.token_id, t.exchange, t.currency,
             str(t.amount_crypto), str(t.amount_usd)]
            for t in bundle.kept_trades
        ]

    out = sys.stdout if out_path == "-" else open(out_path, "w", encoding="utf-8", newline="")
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(data)
    finally:
        if out is not sys.stdout:
            out.close()


@main.command()
@click.option("--snapshot", "snapshot_dir", type=click.Path(exists=True), required=True)
@click.option("--platform", "platform_name", required=True)
@click.option("--token-id", type=int, default=None)
@click.option("--features", "features_path", type=click.Path(exists=True), default=None,
              help="JSON file with a feature vector (list) or {name: value} object.")
def predict(snapshot_dir, platform_name, token_id, features_path):
    """One-off valuation for a parcel or an explicit feature vector."""
    if (token_id is None) == (features_path is None):
        raise click.UsageError("provide exactly one of --token-id or --features")
    platform = _platform(platform_name)
    snap = _load(snapshot_dir)
    bundle = snap.bundles.get(platform)
    if bundle is None:
        _fail(f"snapshot has no platform {platform.value!r}")
    if bundle.model is None:
        _fail(f"no model for {platform.value}")
    model = bundle.model

    if token_id is not None:
        parcel = bundle.dataset.parcel(token_id)
        if parcel is None:
            _fail(f"unknown parcel {token_id}")
        ctx = FeatureContext(bundle.dataset, bundle.kept_trades)
        as_of = bundle.dataset.end_date()
        vector = feature_vector(parcel, as_of, ctx, model.schema)
    else:
        with open(features_path, "r", encoding="utf-8") as fh:
            doc = jsonio.loads(fh.read())
        if isinstance(doc, dict):
            try:
                vector = [float(doc[name]) for name in model.schema.names]
            except KeyError as exc:
                _fail(f"feature file missing {exc}")
        elif isinstance(doc, list) and len(doc) == len(model.schema.names):
            vector = [float(v) for v in doc]
        else:
            _fail(f"feature file must hold {len(model.schema.names)} values")

    import numpy as np

    price = float(model.predict(np.array(vector, dtype=float)))
    click.echo(f"{price:.2f}")


@main.command("view")
@click.option("--snapshot", "snapshot_dir", type=click.Path(exists=True), required=True)
@click.option("--platform", "platform_name", required=True)
@click.option("--view-id", required=True)
@click.option("--out", "out_path", type=click.Path(), required=True)
def view_cmd(snapshot_dir, platform_name, view_id, out_path):
    """Write one view layer document to a file."""
    platform = _platform(platform_name)
    snap = _load(snapshot_dir)
    bundle = snap.bundles.get(platform)
    if bundle is None:
        _fail(f"snapshot has no platform {platform.value!r}")
    raw = bundle.view_bytes.get(view_id)
    if raw is None:
        _fail(f"no {view_id!r} view for {platform.value}")
    with open(out_path, "wb") as fh:
        fh.write(raw)
    click.echo(f"wrote {out_path} ({len(raw)} bytes)")


if __name__ == "__main__":
    main()
