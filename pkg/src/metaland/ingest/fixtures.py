"""Wire formats: newline-delimited record streams, exchange response
documents, and the fixture manifest that ties one platform's files together.

All parsers are pure and total over the documented formats: well-formed
input never crashes, malformed input raises ParseError with a locator.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from datetime import date, datetime, timezone
from decimal import Decimal, InvalidOperation
from typing import Iterable, Optional

from .. import jsonio, profiles
from ..dataset import PlatformDataset
from ..errors import ParseError
from ..records import (
    Chain,
    Estate,
    FxQuote,
    Listing,
    Platform,
    SignalSource,
    SocialSignal,
    Trade,
    TrafficAudience,
    TrafficMetric,
    TrafficSample,
    as_money,
    as_rate,
)
from .metadata import parse_parcel_metadata

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class FixtureManifest:
    platform: Platform
    schema_version: int
    parcels: str
    trades: str
    listings: str
    signals: str
    quotes: str
    traffic: Optional[str] = None
    base_dir: str = "."

    def path(self, rel: Optional[str]) -> Optional[str]:
        return None if rel is None else os.path.join(self.base_dir, rel)


def load_manifest(path: str) -> FixtureManifest:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = jsonio.loads(fh.read())
    except OSError as exc:
        raise ParseError(f"cannot read manifest: {exc}", path) from None
    except ValueError as exc:
        raise ParseError(f"manifest is not valid JSON: {exc}", path) from None

    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema_version {version!r}", path)
    platform = _platform(doc.get("platform"), path)
    base = os.path.dirname(os.path.abspath(path))

    def rel(key: str, required: bool = True) -> Optional[str]:
        value = doc.get(key)
        if value is None:
            if required:
                raise ParseError(f"manifest missing {key!r}", path)
            return None
        target = os.path.join(base, value)
        if not os.path.isfile(target):
            raise ParseError(f"{key} file {value!r} does not exist", path)
        return value

    return FixtureManifest(
        platform=platform,
        schema_version=version,
        parcels=rel("parcels"),
        trades=rel("trades"),
        listings=rel("listings"),
        signals=rel("signals"),
        quotes=rel("quotes"),
        traffic=rel("traffic", required=False),
        base_dir=base,
    )


def ingest_manifest(manifest: FixtureManifest) -> PlatformDataset:
    """Parse every file a manifest references into one platform dataset."""
    platform = manifest.platform
    # metadata documents carry no money fields; plain floats keep the
    # unknown-attribute bag round-trippable
    parcels = [
        parse_parcel_metadata(platform, doc, locator=f"{manifest.parcels}:{n}")
        for n, doc in jsonio.iter_ndjson(manifest.path(manifest.parcels), exact=False)
    ]
    quotes = parse_quotes(jsonio.iter_ndjson(manifest.path(manifest.quotes)), source=manifest.quotes)
    trades = parse_trades(
        platform,
        jsonio.iter_ndjson(manifest.path(manifest.trades)),
        quotes,
        source=manifest.trades,
    )
    listings: list[Listing] = []
    for n, doc in jsonio.iter_ndjson(manifest.path(manifest.listings)):
        listings.extend(parse_listings(doc, locator=f"{manifest.listings}:{n}"))
    listings = dedupe_listings(listings)
    traffic: list[TrafficSample] = []
    if manifest.traffic is not None:
        traffic = parse_traffic(
            platform,
            jsonio.iter_ndjson(manifest.path(manifest.traffic)),
            source=manifest.traffic,
        )
    signals = parse_signals(jsonio.iter_ndjson(manifest.path(manifest.signals)), source=manifest.signals)
    return PlatformDataset(
        platform=platform,
        parcels=parcels,
        estates=derive_estates(platform, parcels),
        trades=trades,
        listings=listings,
        traffic=traffic,
        signals=signals,
        quotes=quotes,
    )


def derive_estates(platform: Platform, parcels) -> list[Estate]:
    groups: dict[str, set[int]] = {}
    for p in parcels:
        if p.estate_id is not None:
            groups.setdefault(p.estate_id, set()).add(p.token_id)
    return [
        Estate(platform=platform, estate_id=eid, member_tokens=frozenset(tokens))
        for eid, tokens in sorted(groups.items())
    ]


# ---------------------------------------------------------------------------
# record streams


def parse_trades(platform: Platform, rows, quotes: Iterable[FxQuote], source: str = "<trades>") -> list[Trade]:
    """Missing USD amounts are completed from the same-day FX quote; the
    economic flag is derived from the USD amount."""
    rates = {(q.date, q.currency): q.usd_rate for q in quotes}
    out: list[Trade] = []
    for locator, rec in _numbered(rows, source):
        ts = _parse_timestamp(_get(rec, "timestamp", locator), locator)
        currency = str(_get(rec, "currency", locator))
        amount_crypto = _decimal(_get(rec, "amount_crypto", locator), "amount_crypto", locator)
        if amount_crypto < 0:
            raise ParseError(f"amount_crypto {amount_crypto} is negative", locator)
        raw_usd = rec.get("amount_usd")
        if raw_usd is None:
            rate = rates.get((ts.date(), currency))
            if rate is None:
                raise ParseError(
                    f"no {currency}/USD quote for {ts.date()}; cannot complete amount_usd", locator
                )
            amount_usd = as_money(amount_crypto * rate)
        else:
            amount_usd = as_money(_decimal(raw_usd, "amount_usd", locator))
        if amount_usd < 0:
            raise ParseError(f"amount_usd {amount_usd} is negative", locator)
        rec_platform = _platform(_get(rec, "platform", locator), locator)
        if rec_platform is not platform:
            raise ParseError(f"record platform {rec_platform.value!r} does not match stream", locator)
        out.append(
            Trade(
                platform=platform,
                token_id=_int(_get(rec, "token_id", locator), "token_id", locator),
                timestamp=ts,
                chain=_enum(Chain, _get(rec, "chain", locator), locator),
                exchange=str(_get(rec, "exchange", locator)),
                currency=currency,
                amount_crypto=amount_crypto,
                amount_usd=amount_usd,
                buyer=str(_get(rec, "buyer", locator)),
                seller=str(_get(rec, "seller", locator)),
                economic=amount_usd > 0,
            )
        )
    out.sort(key=lambda t: (t.timestamp, t.token_id))
    return out


def parse_listings(doc: dict, locator: str = "<listings>") -> list[Listing]:
    """One exchange response document -> listings, keeping the cheapest
    order per (token, exchange, observed_date)."""
    if not isinstance(doc, dict) or not isinstance(doc.get("orders"), list):
        raise ParseError("listings document needs an 'orders' array", locator)
    exchange = str(_get(doc, "exchange", locator))
    out: list[Listing] = []
    for i, order in enumerate(doc["orders"]):
        oloc = f"{locator} order[{i}]"
        if not isinstance(order, dict):
            raise ParseError("order must be an object", oloc)
        price_usd = as_money(_decimal(_get(order, "price_usd", oloc), "price_usd", oloc))
        price_amount = _decimal(_get(order, "price_amount", oloc), "price_amount", oloc)
        if price_usd <= 0 or price_amount <= 0:
            raise ParseError("listing prices must be positive", oloc)
        out.append(
            Listing(
                platform=_platform(_get(order, "platform", oloc), oloc),
                token_id=_int(_get(order, "token_id", oloc), "token_id", oloc),
                exchange=exchange,
                price_currency=str(_get(order, "price_currency", oloc)),
                price_amount=price_amount,
                price_usd=price_usd,
                observed_date=_parse_date(_get(order, "observed_date", oloc), oloc),
            )
        )
    return dedupe_listings(out)


def dedupe_listings(listings: list[Listing]) -> list[Listing]:
    best: dict[tuple[int, str, date], Listing] = {}
    for l in listings:
        key = (l.token_id, l.exchange, l.observed_date)
        cur = best.get(key)
        if cur is None or l.price_usd < cur.price_usd:
            best[key] = l
    return sorted(best.values(), key=lambda l: (l.observed_date, l.exchange, l.token_id))


def parse_traffic(platform: Platform, rows, source: str = "<traffic>") -> list[TrafficSample]:
    allowed = profiles.allowed_traffic_tags(platform)
    out: list[TrafficSample] = []
    for locator, rec in _numbered(rows, source):
        metric = _enum(TrafficMetric, _get(rec, "metric", locator), locator)
        audience = _enum(TrafficAudience, _get(rec, "audience", locator), locator)
        if (metric, audience) not in allowed:
            raise ParseError(
                f"({metric.value}, {audience.value}) is not a {platform.value} traffic stream",
                locator,
            )
        count = _int(_get(rec, "count", locator), "count", locator)
        if count < 0:
            raise ParseError("count must be >= 0", locator)
        out.append(
            TrafficSample(
                platform=platform,
                token_id=_int(_get(rec, "token_id", locator), "token_id", locator),
                period_start=_parse_timestamp(_get(rec, "period_start", locator), locator),
                metric=metric,
                audience=audience,
                count=count,
            )
        )
    out.sort(key=lambda s: (s.token_id, s.period_start, s.audience.value))
    return out


def parse_signals(rows, source: str = "<signals>") -> list[SocialSignal]:
    out = []
    for locator, rec in _numbered(rows, source):
        src = _enum(SignalSource, _get(rec, "source", locator), locator)
        raw_platform = rec.get("platform")
        out.append(
            SocialSignal(
                date=_parse_date(_get(rec, "date", locator), locator),
                source=src,
                platform=None if raw_platform is None else _platform(raw_platform, locator),
                value=_float(_get(rec, "value", locator), "value", locator),
            )
        )
    return out


def parse_quotes(rows, source: str = "<quotes>") -> list[FxQuote]:
    out = []
    for locator, rec in _numbered(rows, source):
        rate = as_rate(_decimal(_get(rec, "usd_rate", locator), "usd_rate", locator))
        if rate <= 0:
            raise ParseError("usd_rate must be positive", locator)
        out.append(
            FxQuote(
                date=_parse_date(_get(rec, "date", locator), locator),
                currency=str(_get(rec, "currency", locator)),
                usd_rate=rate,
            )
        )
    return out


# ---------------------------------------------------------------------------
# record encoders (inverse of the parsers; used by export and the snapshot)


def trade_record(t: Trade) -> dict:
    return {
        "platform": t.platform.value,
        "token_id": t.token_id,
        "timestamp": t.timestamp,
        "chain": t.chain.value,
        "exchange": t.exchange,
        "currency": t.currency,
        "amount_crypto": t.amount_crypto,
        "amount_usd": t.amount_usd,
        "buyer": t.buyer,
        "seller": t.seller,
        "economic": t.economic,
    }


def listing_order_record(l: Listing) -> dict:
    return {
        "platform": l.platform.value,
        "token_id": l.token_id,
        "price_currency": l.price_currency,
        "price_amount": l.price_amount,
        "price_usd": l.price_usd,
        "observed_date": l.observed_date,
    }


def listings_documents(listings: list[Listing]) -> list[dict]:
    """Group listings back into per-(exchange, date) response documents."""
    grouped: dict[tuple[date, str], list[Listing]] = {}
    for l in listings:
        grouped.setdefault((l.observed_date, l.exchange), []).append(l)
    docs = []
    for (day, exchange), members in sorted(grouped.items()):
        docs.append(
            {
                "exchange": exchange,
                "observed_date": day,
                "orders": [listing_order_record(l) for l in sorted(members, key=lambda x: x.token_id)],
            }
        )
    return docs


def traffic_record(s: TrafficSample) -> dict:
    return {
        "platform": s.platform.value,
        "token_id": s.token_id,
        "period_start": s.period_start,
        "metric": s.metric.value,
        "audience": s.audience.value,
        "count": s.count,
    }


def signal_record(s: SocialSignal) -> dict:
    return {
        "date": s.date,
        "source": s.source.value,
        "platform": None if s.platform is None else s.platform.value,
        "value": s.value,
    }


def quote_record(q: FxQuote) -> dict:
    return {"date": q.date, "currency": q.currency, "usd_rate": q.usd_rate}


# ---------------------------------------------------------------------------
# field helpers


def _numbered(rows, source: str):
    for item in rows:
        if isinstance(item, tuple):
            lineno, rec = item
            locator = f"{source}:{lineno}"
        else:
            rec, locator = item, source
        if not isinstance(rec, dict):
            raise ParseError("record must be a JSON object", locator)
        yield locator, rec


def _get(rec: dict, key: str, locator: str):
    if key not in rec or rec[key] is None:
        raise ParseError(f"missing field {key!r}", locator)
    return rec[key]


def _platform(value, locator: str) -> Platform:
    try:
        return Platform(value)
    except ValueError:
        raise ParseError(f"unknown platform {value!r}", locator) from None


def _enum(cls, value, locator: str):
    try:
        return cls(value)
    except ValueError:
        raise ParseError(f"invalid {cls.__name__} value {value!r}", locator) from None


def _int(value, what: str, locator: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{what} must be an integer (got {value!r})", locator)
    return value


def _float(value, what: str, locator: str) -> float:
    if isinstance(value, (int, float, Decimal)) and not isinstance(value, bool):
        return float(value)
    raise ParseError(f"{what} must be numeric (got {value!r})", locator)


def _decimal(value, what: str, locator: str) -> Decimal:
    if isinstance(value, bool):
        raise ParseError(f"{what} must be numeric (got {value!r})", locator)
    if isinstance(value, Decimal):
        return value
    if isinstance(value, int):
        return Decimal(value)
    if isinstance(value, float):
        return Decimal(repr(value))
    if isinstance(value, str):
        try:
            return Decimal(value)
        except InvalidOperation:
            pass
    raise ParseError(f"{what} must be numeric (got {value!r})", locator)


def _parse_timestamp(value, locator: str) -> datetime:
    if not isinstance(value, str):
        raise ParseError(f"timestamp must be an ISO-8601 string (got {value!r})", locator)
    text = value.replace("Z", "+00:00")
    try:
        ts = datetime.fromisoformat(text)
    except ValueError:
        raise ParseError(f"bad timestamp {value!r}", locator) from None
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def _parse_date(value, locator: str) -> date:
    if not isinstance(value, str):
        raise ParseError(f"date must be a YYYY-MM-DD string (got {value!r})", locator)
    try:
        return date.fromisoformat(value)
    except ValueError:
        raise ParseError(f"bad date {value!r}", locator) from None
