"""Deterministic synthetic-metaverse generator.

Produces a full multi-platform dataset from a seed, under a known price law:

    price(parcel, day) = market(day) * loc_factor(parcel) * size_factor(parcel) * noise

market(day) carries a trend and a weekly seasonal component; loc_factor
decays with distance to the nearest POI (location dominates by design);
size_factor depends on the platform's geometry. Every factor is recorded in
a truth object so tests can compare downstream estimates to the law itself.

Determinism contract: same (seed, config) gives byte-identical fixture
files. The generator is single-threaded and draws from per-platform child
RNGs in a fixed order.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta, timezone
from decimal import Decimal

import numpy as np

from .. import jsonio, profiles
from ..dataset import PlatformDataset
from ..records import (
    BoxGeometry,
    Chain,
    FixedSquareGeometry,
    FxQuote,
    Listing,
    Parcel,
    Platform,
    SignalSource,
    SocialSignal,
    Trade,
    TrafficSample,
    TraitGeometry,
    VolumeClassGeometry,
    as_money,
    as_rate,
)
from . import fixtures
from .metadata import serialize_parcel_metadata

ALL_PLATFORMS = tuple(Platform)

# Mon..Sun multipliers for the injected weekly component; sums to zero
WEEKLY_PATTERN = (-0.3, -0.1, 0.0, 0.1, 0.2, 0.5, -0.4)

BASE_PRICE_USD = {
    Platform.SANDBOX: 2500.0,
    Platform.DECENTRALAND: 4000.0,
    Platform.VOXELS: 1800.0,
    Platform.SOMNIUM: 3200.0,
    Platform.OTHERSIDE: 6000.0,
}

TREND_GAIN = 0.4          # market rises this fraction over the window
WEEKLY_AMPLITUDE = 0.15
LOC_AMPLITUDE = 3.0       # loc_factor ranges (1, 1 + LOC_AMPLITUDE]

_EXCHANGE_MIX = ("opensea", "x2y2", "looksrare", "rarible")
_EXCHANGE_PROBS = (0.88, 0.06, 0.036, 0.024)


@dataclass(frozen=True)
class SynthConfig:
    grid_size: int = 20
    n_pois: int = 3
    n_days: int = 90
    n_trades: int = 600
    noise: float = 0.1
    start: date = date(2021, 1, 1)
    platforms: tuple[Platform, ...] = ALL_PLATFORMS
    zero_transfer_share: float = 0.02
    listing_coverage: float = 0.2

    def validate(self) -> None:
        if min(self.grid_size, self.n_pois, self.n_days, self.n_trades) <= 0:
            raise ValueError("grid_size, n_pois, n_days and n_trades must be positive")
        if self.noise < 0:
            raise ValueError("noise must be >= 0")
        if not self.platforms:
            raise ValueError("at least one platform required")


@dataclass
class SynthTruth:
    """The generating law, recorded so tests can audit downstream results."""

    platform: Platform
    pois: list[tuple[int, int]]
    loc_len: float
    market_by_day: dict[date, float]
    loc_factor_by_token: dict[int, float]
    size_factor_by_token: dict[int, float]
    trade_rows: list[dict] = field(default_factory=list)

    def law_price(self, token_id: int, day: date) -> float:
        return (
            self.market_by_day[day]
            * self.loc_factor_by_token[token_id]
            * self.size_factor_by_token[token_id]
        )

    def to_document(self) -> dict:
        return {
            "platform": self.platform.value,
            "pois": [list(p) for p in self.pois],
            "loc_len": self.loc_len,
            "loc_amplitude": LOC_AMPLITUDE,
            "market_by_day": {d.isoformat(): v for d, v in sorted(self.market_by_day.items())},
            "loc_factor_by_token": {str(k): v for k, v in sorted(self.loc_factor_by_token.items())},
            "size_factor_by_token": {str(k): v for k, v in sorted(self.size_factor_by_token.items())},
            "trade_rows": self.trade_rows,
        }


@dataclass
class SyntheticResult:
    seed: int
    config: SynthConfig
    datasets: dict[Platform, PlatformDataset]
    truths: dict[Platform, SynthTruth]


def generate_synthetic(seed: int, config: SynthConfig | None = None) -> SyntheticResult:
    config = config or SynthConfig()
    config.validate()
    datasets: dict[Platform, PlatformDataset] = {}
    truths: dict[Platform, SynthTruth] = {}
    global_rng = _rng(seed, 999)
    shared_signals = _global_signals(global_rng, config)
    for index, platform in enumerate(config.platforms):
        ds, truth = _generate_platform(platform, _rng(seed, index), config, shared_signals)
        datasets[platform] = ds
        truths[platform] = truth
    return SyntheticResult(seed=seed, config=config, datasets=datasets, truths=truths)


def _rng(seed: int, key: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(key,))))


def _days(config: SynthConfig) -> list[date]:
    return [config.start + timedelta(days=i) for i in range(config.n_days)]


def _global_signals(rng: np.random.Generator, config: SynthConfig) -> list[SocialSignal]:
    """Metaverse-wide series shared by every platform dataset: hashtag tweet
    counts and a Google-trend style index. Pure noise, independent of the
    price law by construction."""
    out = []
    trend = 50.0
    for day in _days(config):
        tweets = float(rng.poisson(800))
        trend = float(np.clip(trend + rng.normal(0.0, 3.0), 1.0, 100.0))
        out.append(SocialSignal(day, SignalSource.TWITTER_METAVERSE_HASHTAG, None, tweets))
        out.append(SocialSignal(day, SignalSource.GOOGLE_TREND_METAVERSE, None, round(trend, 2)))
    return out


def _generate_platform(platform, rng, config, shared_signals):
    prof = profiles.profile(platform)
    days = _days(config)
    g = config.grid_size
    half = g // 2
    coords = [(x, y) for y in range(-half, g - half) for x in range(-half, g - half)]

    poi_idx = sorted(int(i) for i in rng.choice(len(coords), size=min(config.n_pois, len(coords)), replace=False))
    pois = [coords[i] for i in poi_idx]
    loc_len = max(1.0, g / 6.0)

    estate_of = _assign_estates(platform, rng, g, half)

    parcels: list[Parcel] = []
    loc_factor: dict[int, float] = {}
    size_factor: dict[int, float] = {}
    nearest: dict[int, float] = {}
    # platforms whose metadata does not publish a POI distance (per their
    # collected-feature sets) keep it out of the parcel record; the law
    # still uses the true distance via the truth object
    poi_in_metadata = "distance_to_nearest_poi" in prof.attribute_map
    for token, (x, y) in enumerate(coords, start=1):
        dists = [math.hypot(x - px, y - py) for px, py in pois]
        dist = round(min(dists), 4)
        geometry, sfactor, extra = _geometry_for(platform, rng)
        if platform is Platform.VOXELS:
            for i in range(min(len(dists), profiles.VOXELS_NAMED_POI_COUNT)):
                extra[f"Distance to POI {i}"] = round(dists[i], 4)
        parcels.append(
            Parcel(
                platform=platform,
                token_id=token,
                x=x,
                y=y,
                geometry=geometry,
                estate_id=estate_of.get((x, y)),
                distance_to_nearest_poi=dist if poi_in_metadata else None,
                extra_attributes=extra,
            )
        )
        loc_factor[token] = 1.0 + LOC_AMPLITUDE * math.exp(-dist / loc_len)
        size_factor[token] = sfactor
        nearest[token] = dist

    market = {}
    for i, day in enumerate(days):
        trend = 1.0 + TREND_GAIN * (i / (config.n_days - 1)) if config.n_days > 1 else 1.0
        weekly = 1.0 + WEEKLY_AMPLITUDE * WEEKLY_PATTERN[day.weekday()]
        market[day] = BASE_PRICE_USD[platform] * trend * weekly

    truth = SynthTruth(
        platform=platform,
        pois=pois,
        loc_len=loc_len,
        market_by_day=market,
        loc_factor_by_token=loc_factor,
        size_factor_by_token=size_factor,
    )

    quotes, rate_of = _make_quotes(platform, rng, days, prof)
    trades = _make_trades(platform, rng, config, days, truth, rate_of)
    truth.trade_rows = [
        {
            "token_id": t.token_id,
            "timestamp": t.timestamp.isoformat().replace("+00:00", "Z"),
            "market": market[t.day],
            "loc_factor": loc_factor[t.token_id],
            "size_factor": size_factor[t.token_id],
            "price_usd": float(t.amount_usd),
            "economic": t.economic,
        }
        for t in trades
    ]
    listings = _make_listings(platform, rng, config, days, truth, rate_of)
    traffic = _make_traffic(platform, rng, config, days, prof, nearest, loc_len)

    signals = [
        SocialSignal(day, SignalSource.TWITTER_PLATFORM, platform, float(rng.poisson(180)))
        for day in days
    ]
    signals += shared_signals
    signals.sort(key=lambda s: (s.date, s.source.value, s.platform.value if s.platform else ""))

    ds = PlatformDataset(
        platform=platform,
        parcels=parcels,
        estates=fixtures.derive_estates(platform, parcels),
        trades=trades,
        listings=listings,
        traffic=traffic,
        signals=signals,
        quotes=quotes,
    )
    return ds, truth


def _assign_estates(platform, rng, g: int, half: int) -> dict[tuple[int, int], str]:
    """Carve a few square estates out of the grid (platforms that allow them)."""
    if platform is Platform.SANDBOX:
        sides = [s for s in profiles.SANDBOX_ESTATE_SIDES if s <= g]
    elif platform is Platform.DECENTRALAND:
        sides = [s for s in (2, 3, 4) if s <= g]
    else:
        return {}
    if not sides:
        return {}
    out: dict[tuple[int, int], str] = {}
    n_estates = max(1, (g * g) // 150)
    placed = 0
    for attempt in range(n_estates * 4):
        if placed >= n_estates:
            break
        side = int(rng.choice(sides[:2]))  # keep estates small relative to the grid
        x0 = int(rng.integers(-half, g - half - side + 1))
        y0 = int(rng.integers(-half, g - half - side + 1))
        cells = [(x0 + dx, y0 + dy) for dy in range(side) for dx in range(side)]
        if any(c in out for c in cells):
            continue
        eid = f"est-{platform.value}-{placed}"
        for c in cells:
            out[c] = eid
        placed += 1
    return out


def _geometry_for(platform, rng):
    """Geometry record, its size factor under the price law, and any extra
    metadata attributes to attach."""
    extra: dict[str, object] = {}
    if platform is Platform.DECENTRALAND:
        return FixedSquareGeometry(profiles.DECENTRALAND_PARCEL_SIDE_M), 1.0, extra
    if platform is Platform.SANDBOX:
        return FixedSquareGeometry(profiles.SANDBOX_PARCEL_SIDE_M), 1.0, extra
    if platform is Platform.VOXELS:
        area = round(float(rng.uniform(100.0, 1000.0)), 1)
        height = round(float(rng.uniform(5.0, 20.0)), 1)
        factor = (area / 500.0) ** 0.5 * (height / 12.0) ** 0.2
        return BoxGeometry(area_m2=area, height_m=height), factor, extra
    if platform is Platform.SOMNIUM:
        classes = sorted(profiles.SOMNIUM_CLASS_VOLUMES_M3)
        cls = str(rng.choice(classes, p=[0.35, 0.5, 0.15]))  # M, S, XL alphabetical
        volume = profiles.SOMNIUM_CLASS_VOLUMES_M3[cls]
        norm = profiles.SOMNIUM_CLASS_VOLUMES_M3["M"]
        return VolumeClassGeometry(cls, volume), (volume / norm) ** 0.4, extra
    # otherside
    sediment = artifact = None
    if rng.random() < 0.8:
        sediment = profiles.OTHERSIDE_SEDIMENTS[int(rng.integers(len(profiles.OTHERSIDE_SEDIMENTS)))]
    if rng.random() < 0.5:
        artifact = profiles.OTHERSIDE_ARTIFACTS[int(rng.integers(len(profiles.OTHERSIDE_ARTIFACTS)))]
    koda = bool(rng.random() < 0.04)
    factor = 1.0
    if sediment is not None:
        factor *= 1.0 + 0.12 * (profiles.OTHERSIDE_SEDIMENTS.index(sediment) + 1)
    if artifact is not None:
        factor *= 1.0 + 0.15 * (profiles.OTHERSIDE_ARTIFACTS.index(artifact) + 1)
    if koda:
        factor *= 2.0
    return TraitGeometry(sediment, artifact, koda), factor, extra


def _make_quotes(platform, rng, days, prof):
    """Daily FX quotes: ETH (and its WETH mirror) plus the platform token."""
    eth = 1800.0
    token = 1.5
    rows: list[FxQuote] = []
    rate_of: dict[tuple[date, str], Decimal] = {}
    for day in days:
        eth = eth * math.exp(float(rng.normal(0.0, 0.01)))
        token = token * math.exp(float(rng.normal(0.0, 0.02)))
        eth_rate = as_rate(Decimal(repr(round(eth, 4))))
        rows.append(FxQuote(day, "ETH", eth_rate))
        rows.append(FxQuote(day, "WETH", eth_rate))
        rate_of[(day, "ETH")] = eth_rate
        rate_of[(day, "WETH")] = eth_rate
        if prof.token_currency:
            token_rate = as_rate(Decimal(repr(round(token, 6))))
            rows.append(FxQuote(day, prof.token_currency, token_rate))
            rate_of[(day, prof.token_currency)] = token_rate
    rows.sort(key=lambda q: (q.date, q.currency))
    return rows, rate_of


def _make_trades(platform, rng, config, days, truth, rate_of):
    prof = profiles.profile(platform)
    n_tokens = len(truth.loc_factor_by_token)
    n_zero = int(round(config.n_trades * config.zero_transfer_share))
    currencies = ["ETH", "WETH"] + ([prof.token_currency] if prof.token_currency else [])
    cur_probs = [0.6, 0.25, 0.15] if prof.token_currency else [0.7, 0.3]
    exchanges = list(_EXCHANGE_MIX)
    if prof.marketplace:
        exchanges[3] = prof.marketplace

    trades: list[Trade] = []
    for i in range(config.n_trades):
        token = int(rng.integers(1, n_tokens + 1))
        day = days[int(rng.integers(len(days)))]
        ts = datetime(
            day.year,
            day.month,
            day.day,
            int(rng.integers(24)),
            int(rng.integers(60)),
            int(rng.integers(60)),
            tzinfo=timezone.utc,
        )
        currency = str(rng.choice(currencies, p=cur_probs))
        exchange = str(rng.choice(exchanges, p=list(_EXCHANGE_PROBS)))
        chain = Chain.POLYGON if rng.random() < 0.05 else Chain.ETHEREUM
        buyer = f"0x{int(rng.integers(2**62)):040x}"
        seller = f"0x{int(rng.integers(2**62)):040x}"
        if seller == buyer:
            seller = f"0x{int(rng.integers(2**62)) ^ 1:040x}"
        noise_mult = math.exp(config.noise * float(rng.standard_normal()))
        if i < n_zero:
            usd = Decimal("0.00")
            crypto = Decimal("0")
        else:
            usd = as_money(Decimal(repr(truth.law_price(token, day) * noise_mult)))
            crypto = (usd / rate_of[(day, currency)]).quantize(Decimal("0.00000001"))
        trades.append(
            Trade(
                platform=platform,
                token_id=token,
                timestamp=ts,
                chain=chain,
                exchange=exchange,
                currency=currency,
                amount_crypto=crypto,
                amount_usd=usd,
                buyer=buyer,
                seller=seller,
                economic=usd > 0,
            )
        )
    trades.sort(key=lambda t: (t.timestamp, t.token_id))
    return trades


def _make_listings(platform, rng, config, days, truth, rate_of):
    snapshot_days = [days[-1]]
    if config.n_days > 14:
        snapshot_days.insert(0, days[-8])
    listings: list[Listing] = []
    for day in snapshot_days:
        for token in sorted(truth.loc_factor_by_token):
            if rng.random() >= config.listing_coverage:
                continue
            usd = as_money(Decimal(repr(truth.law_price(token, day) * float(rng.uniform(0.9, 1.4)))))
            rate = rate_of[(day, "ETH")]
            listings.append(
                Listing(
                    platform=platform,
                    token_id=token,
                    exchange="opensea" if rng.random() < 0.8 else "x2y2",
                    price_currency="ETH",
                    price_amount=(usd / rate).quantize(Decimal("0.00000001")),
                    price_usd=usd,
                    observed_date=day,
                )
            )
    return fixtures.dedupe_listings(listings)


def _make_traffic(platform, rng, config, days, prof, nearest, loc_len):
    if not prof.traffic_streams:
        return []
    out: list[TrafficSample] = []
    tokens = sorted(nearest)
    for day in days:
        for stream in prof.traffic_streams:
            hour = 0 if stream.metric.value == "daily_cumulative_unique" else 12
            start = datetime(day.year, day.month, day.day, hour, tzinfo=timezone.utc)
            for token in tokens:
                attract = math.exp(-nearest[token] / loc_len)
                if rng.random() >= 0.03 + 0.4 * attract:
                    continue
                count = int(rng.poisson(1.0 + 30.0 * attract))
                out.append(
                    TrafficSample(
                        platform=platform,
                        token_id=token,
                        period_start=start,
                        metric=stream.metric,
                        audience=stream.audience,
                        count=count,
                    )
                )
    out.sort(key=lambda s: (s.token_id, s.period_start, s.audience.value))
    return out


# ---------------------------------------------------------------------------
# fixture tree


def write_fixtures(result: SyntheticResult, out_dir: str) -> list[str]:
    """Write one fixture directory per platform plus an index manifest.
    Returns the per-platform manifest paths."""
    os.makedirs(out_dir, exist_ok=True)
    manifest_paths = []
    for platform in result.config.platforms:
        ds = result.datasets[platform]
        truth = result.truths[platform]
        pdir = os.path.join(out_dir, platform.value)
        os.makedirs(pdir, exist_ok=True)

        jsonio.dump_ndjson((serialize_parcel_metadata(p) for p in ds.parcels), os.path.join(pdir, "parcels.ndjson"))
        jsonio.dump_ndjson((fixtures.trade_record(t) for t in ds.trades), os.path.join(pdir, "trades.ndjson"))
        jsonio.dump_ndjson(fixtures.listings_documents(ds.listings), os.path.join(pdir, "listings.ndjson"))
        jsonio.dump_ndjson((fixtures.signal_record(s) for s in ds.signals), os.path.join(pdir, "signals.ndjson"))
        jsonio.dump_ndjson((fixtures.quote_record(q) for q in ds.quotes), os.path.join(pdir, "quotes.ndjson"))
        manifest = {
            "platform": platform.value,
            "schema_version": fixtures.SCHEMA_VERSION,
            "parcels": "parcels.ndjson",
            "trades": "trades.ndjson",
            "listings": "listings.ndjson",
            "signals": "signals.ndjson",
            "quotes": "quotes.ndjson",
        }
        if ds.traffic or profiles.profile(platform).traffic_streams:
            jsonio.dump_ndjson((fixtures.traffic_record(s) for s in ds.traffic), os.path.join(pdir, "traffic.ndjson"))
            manifest["traffic"] = "traffic.ndjson"
        _write_doc(os.path.join(pdir, "manifest.json"), manifest)
        _write_doc(os.path.join(pdir, "truth.json"), truth.to_document())
        manifest_paths.append(os.path.join(pdir, "manifest.json"))

    _write_doc(
        os.path.join(out_dir, "manifest.json"),
        {
            "seed": result.seed,
            "manifests": [f"{p.value}/manifest.json" for p in result.config.platforms],
        },
    )
    return manifest_paths


def _write_doc(path: str, doc: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(jsonio.canonical_dumps(doc))
        fh.write("\n")
