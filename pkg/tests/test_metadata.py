from decimal import Decimal

import pytest

from metaland.errors import ParseError
from metaland.ingest.metadata import parse_parcel_metadata, serialize_parcel_metadata
from metaland.records import (
    BoxGeometry,
    FixedSquareGeometry,
    Platform,
    TraitGeometry,
    VolumeClassGeometry,
)


def _doc(token_id=1, attrs=()):
    return {
        "token_id": token_id,
        "name": f"parcel {token_id}",
        "description": "",
        "image": "fixture://x.png",
        "attributes": [{"trait_type": t, "value": v} for t, v in attrs],
    }


def test_decentraland_doc_maps_to_profile_square():
    doc = _doc(attrs=[("X", 10), ("Y", -3)])
    parcel = parse_parcel_metadata(Platform.DECENTRALAND, doc)
    assert (parcel.x, parcel.y) == (10, -3)
    assert parcel.geometry == FixedSquareGeometry(16)


def test_somnium_class_m_fixes_volume():
    doc = _doc(attrs=[("X", 0), ("Y", 1), ("Parcel Size", "M")])
    parcel = parse_parcel_metadata(Platform.SOMNIUM, doc)
    assert parcel.geometry == VolumeClassGeometry("M", 15000)


def test_somnium_unknown_class_rejected():
    doc = _doc(attrs=[("X", 0), ("Y", 1), ("Parcel Size", "XXL")])
    with pytest.raises(ParseError, match="unknown size class"):
        parse_parcel_metadata(Platform.SOMNIUM, doc)


def test_voxels_zero_area_is_geometry_error():
    doc = _doc(attrs=[("X", 0), ("Y", 0), ("Area", 0), ("Height", 7.5)])
    with pytest.raises(ParseError, match="positive"):
        parse_parcel_metadata(Platform.VOXELS, doc)


def test_voxels_valid_box():
    doc = _doc(attrs=[("X", 2), ("Y", 3), ("Area", Decimal("350.5")), ("Height", 12)])
    parcel = parse_parcel_metadata(Platform.VOXELS, doc)
    assert parcel.geometry == BoxGeometry(area_m2=350.5, height_m=12.0)


def test_otherside_traits():
    doc = _doc(attrs=[("X", 1), ("Y", 1), ("Sediment", "chemical_goo"), ("Koda", True)])
    parcel = parse_parcel_metadata(Platform.OTHERSIDE, doc)
    assert parcel.geometry == TraitGeometry("chemical_goo", None, True)


def test_missing_coordinates_rejected():
    with pytest.raises(ParseError, match="x/y"):
        parse_parcel_metadata(Platform.DECENTRALAND, _doc(attrs=[("X", 1)]))


def test_duplicate_trait_type_rejected():
    with pytest.raises(ParseError, match="duplicate"):
        parse_parcel_metadata(Platform.DECENTRALAND, _doc(attrs=[("X", 1), ("X", 2), ("Y", 0)]))


def test_unknown_attributes_preserved():
    doc = _doc(attrs=[("X", 1), ("Y", 2), ("District", "north"), ("Rank", 4)])
    parcel = parse_parcel_metadata(Platform.DECENTRALAND, doc)
    assert parcel.extra_attributes == {"District": "north", "Rank": 4}


def test_roundtrip_is_semantically_stable():
    doc = _doc(
        token_id=42,
        attrs=[("X", -7), ("Y", 9), ("Estate", "e9"), ("Distance to POI", 3.25), ("District", "north")],
    )
    first = parse_parcel_metadata(Platform.DECENTRALAND, doc)
    again = parse_parcel_metadata(Platform.DECENTRALAND, serialize_parcel_metadata(first))
    assert first == again


def test_roundtrip_all_synthetic_parcels(synth_small):
    for platform, ds in synth_small.datasets.items():
        for parcel in ds.parcels:
            doc = serialize_parcel_metadata(parcel)
            assert parse_parcel_metadata(platform, doc) == parcel
