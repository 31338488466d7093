"""Record real API responses from a seed-42 snapshot into tests/fixtures/.

The explorer's unit tests replay these exact bodies, so what the tests see
is byte-for-byte what the service returns.

Usage: python frontend/scripts/record_fixtures.py
"""

import json
import os
import sys
import tempfile

from fastapi.testclient import TestClient

from metaland.ingest.synth import SynthConfig, generate_synthetic, write_fixtures
from metaland.records import Platform
from metaland.service import create_app
from metaland.snapshot import BuildConfig, SearchSpace, build_snapshot

OUT_DIR = os.path.join(os.path.dirname(__file__), "..", "tests", "fixtures")

CONFIG = SynthConfig(grid_size=8, n_pois=2, n_days=30, n_trades=80)
BUILD = BuildConfig(search_trials=2, search_space=SearchSpace(n_trees=(8, 20), max_depth=(2, 3)))


def main() -> None:
    with tempfile.TemporaryDirectory() as tmp:
        write_fixtures(generate_synthetic(42, CONFIG), tmp)
        manifests = [os.path.join(tmp, p.value, "manifest.json") for p in Platform]
        snapshot = build_snapshot(manifests, BUILD, seed=42)
    client = TestClient(create_app(snapshot))
    os.makedirs(OUT_DIR, exist_ok=True)

    def record(name: str, url: str) -> dict:
        response = client.get(url)
        assert response.status_code == 200, f"{url} -> {response.status_code}"
        path = os.path.join(OUT_DIR, name)
        with open(path, "wb") as fh:
            fh.write(response.content)
        return response.json()

    record("platforms.json", "/v1/platforms")
    record("layer_decentraland_land.json", "/v1/decentraland/views/land")
    record("layer_decentraland_flip.json", "/v1/decentraland/views/flip")
    record("layer_decentraland_fair_value.json", "/v1/decentraland/views/fair_value")

    bundle = snapshot.bundle(Platform.DECENTRALAND)
    below = above = unlisted = None
    for token, listing in bundle.current_listing_by_token.items():
        fair = bundle.fair_value_by_token.get(token)
        if fair is None:
            continue
        if float(listing.price_usd) < fair and below is None:
            below = token
        if float(listing.price_usd) >= fair and above is None:
            above = token
    for parcel in bundle.dataset.parcels:
        if parcel.token_id not in bundle.current_listing_by_token:
            unlisted = parcel.token_id
            break
    assert below is not None and above is not None and unlisted is not None

    record("detail_below_fair.json", f"/v1/decentraland/parcels/{below}")
    record("detail_above_fair.json", f"/v1/decentraland/parcels/{above}")
    record("detail_unlisted.json", f"/v1/decentraland/parcels/{unlisted}")

    missing = client.get("/v1/decentraland/parcels/999999")
    assert missing.status_code == 404
    with open(os.path.join(OUT_DIR, "detail_404.json"), "wb") as fh:
        fh.write(missing.content)

    print(f"fixtures written to {os.path.abspath(OUT_DIR)}")
    print(f"  below-fair token {below}, above-fair token {above}, unlisted token {unlisted}")


if __name__ == "__main__":
    sys.exit(main())
