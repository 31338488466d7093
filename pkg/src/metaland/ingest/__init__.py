from .fixtures import (
    FixtureManifest,
    dedupe_listings,
    ingest_manifest,
    load_manifest,
    parse_listings,
    parse_quotes,
    parse_signals,
    parse_trades,
    parse_traffic,
)
from .metadata import parse_parcel_metadata, serialize_parcel_metadata
from .synth import SynthConfig, SyntheticResult, SynthTruth, generate_synthetic, write_fixtures

__all__ = [
    "FixtureManifest",
    "SynthConfig",
    "SyntheticResult",
    "SynthTruth",
    "dedupe_listings",
    "generate_synthetic",
    "ingest_manifest",
    "load_manifest",
    "parse_listings",
    "parse_parcel_metadata",
    "parse_quotes",
    "parse_signals",
    "parse_trades",
    "parse_traffic",
    "serialize_parcel_metadata",
    "write_fixtures",
]
