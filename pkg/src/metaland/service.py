"""Read-only HTTP API over an immutable snapshot.

Every endpoint is a pure lookup into prebuilt state: no locks, no writes,
no recomputation beyond per-request filtering. View documents are served as
the exact bytes stored in the snapshot.
"""

from __future__ import annotations

from datetime import date, timedelta
from typing import Optional

from fastapi import FastAPI, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware

from . import jsonio
from .ingest.fixtures import listing_order_record, trade_record
from .ingest.metadata import serialize_parcel_metadata
from .records import Platform
from .snapshot import PlatformBundle, Snapshot
from .valuation.search import feature_importance


def _json(payload, status_code: int = 200) -> Response:
    return Response(
        content=jsonio.canonical_dumps(payload),
        status_code=status_code,
        media_type="application/json",
    )


def _error(status_code: int, message: str) -> Response:
    return _json({"error": message}, status_code=status_code)


def create_app(snapshot: Snapshot, cors_origin: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="metaland", docs_url=None, redoc_url=None)
    if cors_origin:
        app.add_middleware(
            CORSMiddleware, allow_origins=[cors_origin], allow_methods=["GET"], allow_headers=["*"]
        )

    @app.exception_handler(RequestValidationError)
    async def malformed_query(request: Request, exc: RequestValidationError) -> Response:
        return _error(400, "malformed query")

    def bundle_of(platform: str) -> Optional[PlatformBundle]:
        try:
            return snapshot.bundles.get(Platform(platform))
        except ValueError:
            return None

    @app.get("/v1/platforms")
    def platforms() -> Response:
        rows = []
        for platform in snapshot.platforms:
            b = snapshot.bundle(platform)
            rng = b.dataset.date_range()
            rows.append(
                {
                    "platform": platform.value,
                    "n_parcels": len(b.dataset.parcels),
                    "n_trades": len(b.dataset.trades),
                    "date_range": None if rng is None else {"start": rng[0], "end": rng[1]},
                    "views": sorted(b.views),
                    "has_model": b.model is not None,
                }
            )
        return _json({"platforms": rows})

    @app.get("/v1/{platform}/parcels")
    def parcels(platform: str, bbox: str = "") -> Response:
        b = bundle_of(platform)
        if b is None:
            return _error(404, f"unknown platform {platform!r}")
        box = _parse_bbox(bbox)
        if box is None:
            return _error(400, "bbox must be x1,y1,x2,y2")
        x1, y1, x2, y2 = box
        rows = [
            _parcel_summary(p)
            for p in b.dataset.parcels
            if x1 <= p.x <= x2 and y1 <= p.y <= y2
        ]
        return _json({"platform": platform, "bbox": [x1, y1, x2, y2], "parcels": rows})

    @app.get("/v1/{platform}/parcels/{token_id}")
    def parcel_detail(platform: str, token_id: str) -> Response:
        b = bundle_of(platform)
        if b is None:
            return _error(404, f"unknown platform {platform!r}")
        try:
            token = int(token_id)
        except ValueError:
            return _error(400, "token_id must be an integer")
        parcel = b.dataset.parcel(token)
        if parcel is None:
            return _error(404, f"unknown parcel {token}")
        last = b.last_trade_by_token.get(token)
        listing = b.current_listing_by_token.get(token)
        end = b.dataset.end_date()
        per_day = b.traffic_daily_by_token.get(token, {})
        traffic = []
        if end is not None:
            for offset in range(29, -1, -1):
                day = end - timedelta(days=offset)
                traffic.append({"date": day, "count": per_day.get(day, 0)})
        return _json(
            {
                "parcel": _parcel_summary(parcel),
                "metadata": serialize_parcel_metadata(parcel),
                "last_trade": None if last is None else trade_record(last),
                "current_listing": None if listing is None else {
                    **listing_order_record(listing), "exchange": listing.exchange
                },
                "flip_count": b.flip_by_token.get(token, 0),
                "fair_value_usd": b.fair_value_by_token.get(token),
                "traffic_30d": traffic,
            }
        )

    @app.get("/v1/{platform}/trades")
    def trades_range(
        platform: str,
        from_: Optional[str] = Query(None, alias="from"),
        to: Optional[str] = None,
    ) -> Response:
        b = bundle_of(platform)
        if b is None:
            return _error(404, f"unknown platform {platform!r}")
        try:
            since = date.fromisoformat(from_) if from_ else None
            until = date.fromisoformat(to) if to else None
        except ValueError:
            return _error(400, "from/to must be YYYY-MM-DD")
        rows = [
            trade_record(t)
            for t in b.kept_trades
            if (since is None or t.day >= since) and (until is None or t.day <= until)
        ]
        return _json({"platform": platform, "trades": rows})

    @app.get("/v1/{platform}/aggregates")
    def aggregates(platform: str, granularity: str = "day", group_by: str = "none") -> Response:
        b = bundle_of(platform)
        if b is None:
            return _error(404, f"unknown platform {platform!r}")
        rows = b.aggregates.get((granularity, group_by))
        if rows is None:
            return _error(400, f"no aggregate table for granularity={granularity!r} group_by={group_by!r}")
        return _json(
            {
                "platform": platform,
                "granularity": granularity,
                "group_by": group_by,
                "rows": [r.to_document() for r in rows],
            }
        )

    @app.get("/v1/{platform}/correlations")
    def correlations(platform: str) -> Response:
        b = bundle_of(platform)
        if b is None:
            return _error(404, f"unknown platform {platform!r}")
        return _json(b.correlations.to_document())

    @app.get("/v1/{platform}/views/{view_id}")
    def view(platform: str, view_id: str) -> Response:
        b = bundle_of(platform)
        if b is None:
            return _error(404, f"unknown platform {platform!r}")
        raw = b.view_bytes.get(view_id)
        if raw is None:
            return _error(404, f"no {view_id!r} view for {platform}")
        return Response(content=raw, media_type="application/json")

    @app.get("/v1/{platform}/model/report")
    def model_report(platform: str) -> Response:
        b = bundle_of(platform)
        if b is None:
            return _error(404, f"unknown platform {platform!r}")
        if b.model is None or b.eval_report is None:
            return _error(404, f"no model for {platform}")
        return _json(
            {
                "platform": platform,
                "eval": b.eval_report.to_document(),
                "params": b.model.params.to_document(),
                "importance": [
                    {"feature": r.feature, "splits": r.splits, "share": r.share}
                    for r in feature_importance(b.model)
                ],
            }
        )

    return app


def _parcel_summary(p) -> dict:
    g = p.geometry
    geometry: dict[str, object] = {"kind": g.kind}
    if g.kind == "fixed_square":
        geometry["side_m"] = g.side_m
    elif g.kind == "box":
        geometry["area_m2"] = g.area_m2
        geometry["height_m"] = g.height_m
    elif g.kind == "volume_class":
        geometry["size_class"] = g.size_class
        geometry["volume_m3"] = g.volume_m3
    else:
        geometry["sediment"] = g.sediment
        geometry["artifact"] = g.artifact
        geometry["has_koda"] = g.has_koda
    return {
        "platform": p.platform.value,
        "token_id": p.token_id,
        "x": p.x,
        "y": p.y,
        "geometry": geometry,
        "estate_id": p.estate_id,
        "distance_to_nearest_poi": p.distance_to_nearest_poi,
    }


def _parse_bbox(raw: str):
    if not raw:
        return None
    parts = raw.split(",")
    if len(parts) != 4:
        return None
    try:
        x1, y1, x2, y2 = (int(v) for v in parts)
    except ValueError:
        return None
    return min(x1, x2), min(y1, y2), max(x1, x2), max(y1, y2)


def serve(snapshot: Snapshot, host: str = "127.0.0.1", port: int = 8000, cors_origin=None) -> None:
    import uvicorn

    uvicorn.run(create_app(snapshot, cors_origin), host=host, port=port, log_level="warning")
