import csv
import io
import os
from decimal import Decimal

import pytest
from click.testing import CliRunner

from metaland.cli import main
from metaland.records import Platform


@pytest.fixture
def runner():
    return CliRunner()


def test_synth_is_deterministic(runner, tmp_path):
    args = ["synth", "--seed", "42", "--grid", "6", "--days", "21", "--trades", "40",
            "--platform", "voxels"]
    r1 = runner.invoke(main, args + ["--out", str(tmp_path / "a")])
    r2 = runner.invoke(main, args + ["--out", str(tmp_path / "b")])
    assert r1.exit_code == 0, r1.output
    assert r2.exit_code == 0
    digest1 = [l for l in r1.output.splitlines() if l.startswith("digest")]
    digest2 = [l for l in r2.output.splitlines() if l.startswith("digest")]
    assert digest1 == digest2


def test_build_without_manifest_is_usage_error(runner):
    result = runner.invoke(main, ["build", "--out", "/tmp/nope"])
    assert result.exit_code == 2
    assert "manifest" in result.output.lower()


def test_unknown_platform_is_usage_error(runner, snapshot_dir):
    result = runner.invoke(
        main, ["export", "aggregates", "--snapshot", str(snapshot_dir), "--platform", "narnia"]
    )
    assert result.exit_code == 2


def test_missing_snapshot_path_is_usage_error(runner):
    result = runner.invoke(
        main, ["export", "aggregates", "--snapshot", "/definitely/not/here", "--platform", "voxels"]
    )
    assert result.exit_code == 2


def test_export_aggregates_totals_match_snapshot(runner, snapshot_dir, small_snapshot):
    result = runner.invoke(
        main,
        ["export", "aggregates", "--snapshot", str(snapshot_dir), "--platform", "voxels",
         "--granularity", "month", "--group-by", "none"],
    )
    assert result.exit_code == 0, result.output
    rows = list(csv.DictReader(io.StringIO(result.output)))
    csv_volume = sum(Decimal(r["volume_usd"]) for r in rows)
    csv_count = sum(int(r["tx_count"]) for r in rows)
    snap_rows = small_snapshot.bundle(Platform.VOXELS).aggregates[("month", "none")]
    assert csv_volume == sum((r.volume_usd for r in snap_rows), Decimal("0"))
    assert csv_count == sum(r.tx_count for r in snap_rows)


def test_export_importance_and_filter_report(runner, snapshot_dir):
    for table in ("importance", "filter-report", "correlations", "trades"):
        result = runner.invoke(
            main, ["export", table, "--snapshot", str(snapshot_dir), "--platform", "sandbox"]
        )
        assert result.exit_code == 0, f"{table}: {result.output}"
        assert result.output.count("\n") >= 1


def test_export_series_is_plot_ready(runner, snapshot_dir, small_snapshot):
    result = runner.invoke(
        main,
        ["export", "series", "--snapshot", str(snapshot_dir), "--platform", "voxels",
         "--metric", "avg_price", "--granularity", "week"],
    )
    assert result.exit_code == 0, result.output
    rows = list(csv.DictReader(io.StringIO(result.output)))
    assert list(rows[0].keys()) == ["period", "value"]
    snap_rows = small_snapshot.bundle(Platform.VOXELS).aggregates[("week", "none")]
    assert [r["period"] for r in rows] == [r.period for r in snap_rows]
    assert [Decimal(r["value"]) for r in rows] == [r.avg_price_usd for r in snap_rows]

    ratio = runner.invoke(
        main,
        ["export", "series", "--snapshot", str(snapshot_dir), "--platform", "voxels",
         "--metric", "weth_ratio", "--granularity", "month"],
    )
    assert ratio.exit_code == 0, ratio.output
    ratio_rows = list(csv.DictReader(io.StringIO(ratio.output)))
    assert all(float(r["value"]) >= 0 for r in ratio_rows)


def test_predict_by_token(runner, snapshot_dir, small_snapshot):
    bundle = small_snapshot.bundle(Platform.DECENTRALAND)
    token = bundle.dataset.parcels[0].token_id
    result = runner.invoke(
        main,
        ["predict", "--snapshot", str(snapshot_dir), "--platform", "decentraland",
         "--token-id", str(token)],
    )
    assert result.exit_code == 0, result.output
    assert float(result.output.strip()) == pytest.approx(
        bundle.fair_value_by_token[token], abs=0.01
    )


def test_predict_needs_exactly_one_input(runner, snapshot_dir):
    result = runner.invoke(
        main, ["predict", "--snapshot", str(snapshot_dir), "--platform", "decentraland"]
    )
    assert result.exit_code == 2


def test_predict_unknown_token_is_data_error(runner, snapshot_dir):
    result = runner.invoke(
        main,
        ["predict", "--snapshot", str(snapshot_dir), "--platform", "decentraland",
         "--token-id", "999999"],
    )
    assert result.exit_code == 1


def test_view_writes_stored_bytes(runner, snapshot_dir, small_snapshot, tmp_path):
    out = tmp_path / "layer.json"
    result = runner.invoke(
        main,
        ["view", "--snapshot", str(snapshot_dir), "--platform", "voxels",
         "--view-id", "land", "--out", str(out)],
    )
    assert result.exit_code == 0, result.output
    assert out.read_bytes() == small_snapshot.bundle(Platform.VOXELS).view_bytes["land"]


def test_build_and_serve_cycle(runner, fixture_dir, tmp_path):
    """build over an index manifest, then load what it wrote."""
    out = tmp_path / "snap"
    result = runner.invoke(
        main,
        ["build", "--manifest", str(fixture_dir / "manifest.json"), "--out", str(out),
         "--seed", "5", "--trials", "1", "--max-trees", "15"],
    )
    assert result.exit_code == 0, result.output
    from metaland.snapshot import load_snapshot

    snap = load_snapshot(str(out))
    assert len(snap.bundles) == 5
