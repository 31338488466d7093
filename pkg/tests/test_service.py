import pytest
from fastapi.testclient import TestClient

from metaland.service import create_app


@pytest.fixture(scope="module")
def client(small_snapshot):
    return TestClient(create_app(small_snapshot))


def test_platforms_lists_all_five(client):
    body = client.get("/v1/platforms").json()
    assert len(body["platforms"]) == 5
    names = {row["platform"] for row in body["platforms"]}
    assert names == {"sandbox", "decentraland", "voxels", "somnium", "otherside"}
    for row in body["platforms"]:
        assert row["date_range"]["start"] <= row["date_range"]["end"]


def test_bbox_returns_exactly_the_parcels_inside(client, small_snapshot):
    from metaland.records import Platform

    ds = small_snapshot.bundle(Platform.VOXELS).dataset
    target = next(p for p in ds.parcels if p.x == 0 and p.y == 0)  # interior cell
    one = client.get(f"/v1/voxels/parcels?bbox={target.x},{target.y},{target.x},{target.y}").json()
    assert len(one["parcels"]) == 1
    assert one["parcels"][0]["token_id"] == target.token_id

    swapped = client.get(f"/v1/voxels/parcels?bbox={target.x},{target.y},{target.x - 2},{target.y - 2}")
    inside = swapped.json()["parcels"]
    assert len(inside) == 9  # corners normalized, 3x3 box


def test_parcel_detail_fields(client, small_snapshot):
    from metaland.records import Platform

    bundle = small_snapshot.bundle(Platform.DECENTRALAND)
    token, trade = next(iter(bundle.last_trade_by_token.items()))
    body = client.get(f"/v1/decentraland/parcels/{token}").json()
    assert body["parcel"]["token_id"] == token
    assert body["last_trade"]["amount_usd"] == float(trade.amount_usd)
    assert body["flip_count"] == bundle.flip_by_token[token]
    assert body["fair_value_usd"] == bundle.fair_value_by_token[token]
    assert len(body["traffic_30d"]) == 30
    end = bundle.dataset.end_date().isoformat()
    assert body["traffic_30d"][-1]["date"] == end
    want = {d.isoformat(): c for d, c in bundle.traffic_daily_by_token.get(token, {}).items()}
    for row in body["traffic_30d"]:
        assert row["count"] == want.get(row["date"], 0)


def test_trades_date_range_filter(client, small_snapshot):
    from metaland.records import Platform

    kept = small_snapshot.bundle(Platform.SANDBOX).kept_trades
    mid = kept[len(kept) // 2].day.isoformat()
    body = client.get(f"/v1/sandbox/trades?from={mid}&to={mid}").json()
    want = [t for t in kept if t.day.isoformat() == mid]
    assert len(body["trades"]) == len(want)
    everything = client.get("/v1/sandbox/trades").json()
    assert len(everything["trades"]) == len(kept)


def test_aggregates_endpoint_matches_snapshot(client, small_snapshot):
    from metaland.records import Platform

    rows = small_snapshot.bundle(Platform.VOXELS).aggregates[("month", "exchange")]
    body = client.get("/v1/voxels/aggregates?granularity=month&group_by=exchange").json()
    assert len(body["rows"]) == len(rows)
    assert body["rows"][0]["period"] == rows[0].period


def test_correlations_endpoint(client):
    body = client.get("/v1/decentraland/correlations").json()
    assert "avg_price_usd" in body["names"]
    n = len(body["names"])
    assert len(body["matrix"]) == n
    assert all(len(row) == n for row in body["matrix"])


def test_view_bodies_byte_equal_to_stored_layers(client, small_snapshot):
    for platform in small_snapshot.platforms:
        bundle = small_snapshot.bundle(platform)
        for view_id, raw in bundle.view_bytes.items():
            response = client.get(f"/v1/{platform.value}/views/{view_id}")
            assert response.status_code == 200
            assert response.content == raw


def test_model_report_endpoint(client, small_snapshot):
    from metaland.records import Platform

    body = client.get("/v1/somnium/model/report").json()
    report = small_snapshot.bundle(Platform.SOMNIUM).eval_report
    assert body["eval"]["test_accuracy_pct"] == report.test_accuracy_pct
    shares = [row["share"] for row in body["importance"]]
    assert abs(sum(shares) - 1.0) < 1e-9


def test_unknown_platform_token_view_are_404(client):
    assert client.get("/v1/atlantis/parcels/1").status_code == 404
    assert client.get("/v1/voxels/parcels/999999999").status_code == 404
    assert client.get("/v1/voxels/views/bogus").status_code == 404
    assert client.get("/v1/atlantis/views/land").status_code == 404


def test_malformed_queries_are_400(client):
    assert client.get("/v1/voxels/parcels?bbox=1,2,3").status_code == 400
    assert client.get("/v1/voxels/parcels?bbox=a,b,c,d").status_code == 400
    assert client.get("/v1/voxels/parcels/notanint").status_code == 400
    assert client.get("/v1/voxels/trades?from=yesterday").status_code == 400
    assert client.get("/v1/voxels/aggregates?granularity=decade").status_code == 400


def test_concurrent_identical_gets_identical_bodies(client):
    bodies = {client.get("/v1/voxels/views/land").content for _ in range(5)}
    assert len(bodies) == 1


def test_no_endpoint_mutates_snapshot(client, small_snapshot):
    before = small_snapshot.digest()
    for url in (
        "/v1/platforms",
        "/v1/voxels/parcels?bbox=-5,-5,5,5",
        "/v1/voxels/trades",
        "/v1/voxels/aggregates",
        "/v1/voxels/correlations",
        "/v1/voxels/views/land",
        "/v1/voxels/model/report",
    ):
        client.get(url)
    assert small_snapshot.digest() == before
