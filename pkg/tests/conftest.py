from __future__ import annotations

import pytest

from metaland.ingest.synth import SynthConfig, generate_synthetic, write_fixtures
from metaland.records import Platform
from metaland.snapshot import BuildConfig, SearchSpace, build_snapshot, load_snapshot

SMALL_SEED = 11
SMALL_CONFIG = SynthConfig(grid_size=10, n_pois=2, n_days=42, n_trades=160)

SMALL_BUILD = BuildConfig(
    search_trials=2,
    search_space=SearchSpace(n_trees=(10, 40), max_depth=(2, 4)),
    min_train_examples=20,
)


@pytest.fixture(scope="session")
def synth_small():
    """Five-platform synthetic dataset, desk scale."""
    return generate_synthetic(SMALL_SEED, SMALL_CONFIG)


@pytest.fixture(scope="session")
def fixture_dir(tmp_path_factory, synth_small):
    out = tmp_path_factory.mktemp("fixtures")
    write_fixtures(synth_small, str(out))
    return out


@pytest.fixture(scope="session")
def small_snapshot(fixture_dir):
    manifests = [str(fixture_dir / p.value / "manifest.json") for p in Platform]
    return build_snapshot(manifests, SMALL_BUILD, seed=5)


@pytest.fixture(scope="session")
def snapshot_dir(tmp_path_factory, small_snapshot):
    out = tmp_path_factory.mktemp("snapshot")
    small_snapshot.save(str(out))
    return out


@pytest.fixture(scope="session")
def loaded_snapshot(snapshot_dir):
    return load_snapshot(str(snapshot_dir))
