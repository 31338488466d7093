"""Per-platform configuration.

Every platform-specific constant lives here and nowhere else: parcel
geometry parameters, estate shape rules, traffic stream definitions, the
native token symbol, metadata attribute names, POI lists, and the default
valuation feature list. Other modules import from this one; they must not
re-declare the numbers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .records import Platform, TrafficAudience, TrafficMetric

# parcel geometry
DECENTRALAND_PARCEL_SIDE_M = 16
SANDBOX_PARCEL_SIDE_M = 96
SOMNIUM_CLASS_VOLUMES_M3 = {"S": 2000, "M": 15000, "XL": 75000}

# estates: sandbox estates are square with one of these side lengths
SANDBOX_ESTATE_SIDES = (3, 6, 12, 24)

# otherside trait vocabularies (used for categorical encoding and synthesis)
OTHERSIDE_SEDIMENTS = ("biogenic_swamp", "chemical_goo", "rainbow_atmos", "cosmic_dream")
OTHERSIDE_ARTIFACTS = ("obelisk_piece", "bone_fragment", "crystal_shard", "ancient_core")

# number of per-POI distance features the voxels profile exposes
VOXELS_NAMED_POI_COUNT = 10


@dataclass(frozen=True)
class TrafficStream:
    metric: TrafficMetric
    audience: TrafficAudience
    feature_tag: str


@dataclass(frozen=True)
class PlatformProfile:
    platform: Platform
    geometry_kind: str
    token_currency: Optional[str]
    marketplace: Optional[str]
    traffic_streams: tuple[TrafficStream, ...]
    attribute_map: dict[str, str]
    """Maps parcel fields to the trait_type names used in metadata documents."""
    has_estates: bool = False
    pois: tuple[tuple[float, float], ...] = ()
    """POI coordinates in map units; ships with the profile, override per deploy."""
    feature_names: tuple[str, ...] = ()
    categorical_features: frozenset[str] = field(default_factory=frozenset)


def _attrs(**kwargs) -> dict[str, str]:
    base = {"x": "X", "y": "Y"}
    base.update(kwargs)
    return base


_MARKET = ("prev_day_avg_price_usd", "eth_usd")
_TRAFFIC = ("traffic_7d_sum", "traffic_present")


PROFILES: dict[Platform, PlatformProfile] = {
    Platform.SANDBOX: PlatformProfile(
        platform=Platform.SANDBOX,
        geometry_kind="fixed_square",
        token_currency="SAND",
        marketplace=None,
        traffic_streams=(),
        attribute_map=_attrs(estate_id="Estate", distance_to_nearest_poi="Distance to POI"),
        has_estates=True,
        feature_names=(
            "x",
            "y",
            "distance_to_nearest_poi",
            "estate_size",
            *_MARKET,
            "token_usd",
            "google_trend_metaverse",
        ),
    ),
    Platform.DECENTRALAND: PlatformProfile(
        platform=Platform.DECENTRALAND,
        geometry_kind="fixed_square",
        token_currency="MANA",
        marketplace="dcl_marketplace",
        traffic_streams=(
            TrafficStream(TrafficMetric.HOURLY_MAX_CONCURRENT, TrafficAudience.ALL, "traffic"),
        ),
        attribute_map=_attrs(estate_id="Estate", distance_to_nearest_poi="Distance to POI"),
        has_estates=True,
        feature_names=(
            "x",
            "y",
            "distance_to_nearest_poi",
            "estate_size",
            *_MARKET,
            "token_usd",
            "platform_tweets",
            "google_trend_metaverse",
            *_TRAFFIC,
        ),
    ),
    Platform.VOXELS: PlatformProfile(
        platform=Platform.VOXELS,
        geometry_kind="box",
        token_currency=None,
        marketplace=None,
        traffic_streams=(
            TrafficStream(TrafficMetric.DAILY_CUMULATIVE_UNIQUE, TrafficAudience.ALL, "traffic"),
        ),
        attribute_map=_attrs(
            area_m2="Area", height_m="Height", distance_to_nearest_poi="Distance to POI"
        ),
        feature_names=(
            "x",
            "y",
            "area_m2",
            "height_m",
            *(f"distance_to_poi_{i}" for i in range(VOXELS_NAMED_POI_COUNT)),
            *_MARKET,
            "platform_tweets",
            "metaverse_tweets",
            "google_trend_metaverse",
            *_TRAFFIC,
        ),
    ),
    Platform.SOMNIUM: PlatformProfile(
        platform=Platform.SOMNIUM,
        geometry_kind="volume_class",
        token_currency="CUBE",
        marketplace=None,
        traffic_streams=(
            TrafficStream(TrafficMetric.HOURLY_MAX_CONCURRENT, TrafficAudience.SPECTATORS, "spectators"),
            TrafficStream(TrafficMetric.HOURLY_MAX_CONCURRENT, TrafficAudience.PLAYERS, "players"),
        ),
        attribute_map=_attrs(size_class="Parcel Size"),
        feature_names=(
            "x",
            "y",
            "volume_m3",
            *_MARKET,
            "token_usd",
            "platform_tweets",
            "google_trend_metaverse",
            "spectators_7d_sum",
            "spectators_present",
            "players_7d_sum",
            "players_present",
        ),
    ),
    Platform.OTHERSIDE: PlatformProfile(
        platform=Platform.OTHERSIDE,
        geometry_kind="traits",
        token_currency="APE",
        marketplace=None,
        traffic_streams=(),
        attribute_map=_attrs(sediment="Sediment", artifact="Artifact", has_koda="Koda"),
        feature_names=(
            "x",
            "y",
            "sediment_code",
            "artifact_code",
            "has_koda",
            *_MARKET,
            "token_usd",
            "platform_tweets",
            "metaverse_tweets",
            "google_trend_metaverse",
        ),
        categorical_features=frozenset({"sediment_code", "artifact_code", "has_koda"}),
    ),
}


def profile(platform: Platform) -> PlatformProfile:
    return PROFILES[platform]


def allowed_traffic_tags(platform: Platform) -> set[tuple[TrafficMetric, TrafficAudience]]:
    return {(s.metric, s.audience) for s in PROFILES[platform].traffic_streams}
