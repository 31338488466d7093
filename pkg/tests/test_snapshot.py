import os

import pytest

from metaland.errors import StageError
from metaland.records import Platform
from metaland.snapshot import build_snapshot, load_snapshot
from tests.conftest import SMALL_BUILD


def test_snapshot_has_one_model_per_platform(small_snapshot):
    assert len(small_snapshot.bundles) == 5
    for bundle in small_snapshot.bundles.values():
        assert bundle.model is not None
        assert bundle.eval_report is not None
        assert bundle.correlations.names
        assert bundle.aggregates[("day", "none")]


def test_save_load_reproduces_digest(small_snapshot, snapshot_dir, loaded_snapshot):
    assert loaded_snapshot.digest() == small_snapshot.digest()
    # and the saved meta records the same digest
    import json

    with open(os.path.join(snapshot_dir, "meta.json")) as fh:
        meta = json.load(fh)
    assert meta["digest"] == small_snapshot.digest()


def test_loaded_bundles_match_members(small_snapshot, loaded_snapshot):
    for platform, bundle in small_snapshot.bundles.items():
        other = loaded_snapshot.bundle(platform)
        assert other.dataset.trades == bundle.dataset.trades
        assert other.filter_report == bundle.filter_report
        assert other.view_bytes == bundle.view_bytes
        assert other.kept_trades == bundle.kept_trades
        assert other.eval_report == bundle.eval_report


def test_invalid_parcel_aborts_at_validate_with_locator(fixture_dir, tmp_path):
    import shutil

    broken = tmp_path / "broken"
    shutil.copytree(fixture_dir / "somnium", broken)
    parcels = broken / "parcels.ndjson"
    lines = parcels.read_text().splitlines()
    # corrupt one parcel into a coordinate collision with the next one
    import json as _json

    first = _json.loads(lines[0])
    second = _json.loads(lines[1])
    for attr in first["attributes"]:
        if attr["trait_type"] == "X":
            x0 = attr["value"]
    for attr in second["attributes"]:
        if attr["trait_type"] == "X":
            attr["value"] = x0
    lines[1] = _json.dumps(second)
    parcels.write_text("\n".join(lines) + "\n")

    with pytest.raises(StageError) as err:
        build_snapshot([str(broken / "manifest.json")], SMALL_BUILD, seed=1)
    assert "validate" in str(err.value)
    assert "coord" in str(err.value)


def test_unparseable_file_aborts_at_ingest(fixture_dir, tmp_path):
    import shutil

    broken = tmp_path / "broken2"
    shutil.copytree(fixture_dir / "voxels", broken)
    (broken / "trades.ndjson").write_text('{"not": "a trade"}\n')
    with pytest.raises(StageError) as err:
        build_snapshot([str(broken / "manifest.json")], SMALL_BUILD, seed=1)
    assert err.value.stage == "ingest"


def test_duplicate_platform_manifests_rejected(fixture_dir):
    path = str(fixture_dir / "voxels" / "manifest.json")
    with pytest.raises(StageError, match="duplicate platform"):
        build_snapshot([path, path], SMALL_BUILD, seed=1)


def test_digest_mismatch_detected(snapshot_dir, tmp_path):
    import shutil

    tampered = tmp_path / "tampered"
    shutil.copytree(snapshot_dir, tampered)
    victim = tampered / "voxels" / "analytics" / "filter_report.json"
    victim.write_text(victim.read_text().replace("1", "2", 1))
    from metaland.errors import DataError

    with pytest.raises(DataError, match="digest mismatch"):
        load_snapshot(str(tampered))
