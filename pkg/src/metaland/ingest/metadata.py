"""Parcel metadata documents (ERC721 attribute-list shape) -> Parcel."""

from __future__ import annotations

from typing import Optional

from .. import profiles
from ..errors import ParseError
from ..records import (
    BoxGeometry,
    FixedSquareGeometry,
    Parcel,
    ParcelGeometry,
    Platform,
    TraitGeometry,
    VolumeClassGeometry,
)


def parse_parcel_metadata(platform: Platform, doc: dict, locator: str = "<doc>") -> Parcel:
    """Map a metadata document onto a Parcel.

    Attribute names are profile-configured; anything the profile does not
    claim is preserved verbatim in ``extra_attributes``.
    """
    if not isinstance(doc, dict):
        raise ParseError("metadata document must be an object", locator)
    attrs = _attribute_bag(doc, locator)
    prof = profiles.profile(platform)
    field_by_trait = {trait: fld for fld, trait in prof.attribute_map.items()}

    mapped: dict[str, object] = {}
    extras: dict[str, object] = {}
    for trait, value in attrs.items():
        fld = field_by_trait.get(trait)
        if fld is None:
            extras[trait] = value
        else:
            mapped[fld] = value

    token_id = doc.get("token_id")
    if not isinstance(token_id, int) or token_id < 0:
        raise ParseError("token_id must be a non-negative integer", locator)
    if "x" not in mapped or "y" not in mapped:
        raise ParseError("missing x/y coordinate attributes", locator)

    estate = mapped.get("estate_id")
    poi = mapped.get("distance_to_nearest_poi")
    return Parcel(
        platform=platform,
        token_id=token_id,
        x=_as_int(mapped["x"], "x", locator),
        y=_as_int(mapped["y"], "y", locator),
        geometry=_geometry(platform, prof.geometry_kind, mapped, locator),
        estate_id=None if estate in (None, "") else str(estate),
        distance_to_nearest_poi=None if poi is None else _as_float(poi, "POI distance", locator),
        extra_attributes=extras,
    )


def serialize_parcel_metadata(parcel: Parcel) -> dict:
    """Inverse of parse_parcel_metadata (up to the fields a Parcel keeps)."""
    prof = profiles.profile(parcel.platform)
    amap = prof.attribute_map
    attrs: list[dict] = [
        {"trait_type": amap["x"], "value": parcel.x},
        {"trait_type": amap["y"], "value": parcel.y},
    ]

    def put(field_name: str, value) -> None:
        if value is not None and field_name in amap:
            attrs.append({"trait_type": amap[field_name], "value": value})

    g = parcel.geometry
    if isinstance(g, BoxGeometry):
        put("area_m2", g.area_m2)
        put("height_m", g.height_m)
    elif isinstance(g, VolumeClassGeometry):
        put("size_class", g.size_class)
    elif isinstance(g, TraitGeometry):
        put("sediment", g.sediment)
        put("artifact", g.artifact)
        put("has_koda", g.has_koda)
    put("estate_id", parcel.estate_id)
    put("distance_to_nearest_poi", parcel.distance_to_nearest_poi)
    for trait, value in parcel.extra_attributes.items():
        attrs.append({"trait_type": trait, "value": value})

    return {
        "token_id": parcel.token_id,
        "name": f"{parcel.platform.value} parcel #{parcel.token_id}",
        "description": "",
        "image": f"fixture://{parcel.platform.value}/{parcel.token_id}.png",
        "attributes": attrs,
    }


def _attribute_bag(doc: dict, locator: str) -> dict[str, object]:
    raw = doc.get("attributes")
    if not isinstance(raw, list):
        raise ParseError("attributes must be a list", locator)
    bag: dict[str, object] = {}
    for entry in raw:
        if not isinstance(entry, dict) or "trait_type" not in entry:
            raise ParseError("attribute entries need a trait_type", locator)
        trait = str(entry["trait_type"])
        if trait in bag:
            raise ParseError(f"duplicate trait_type {trait!r}", locator)
        bag[trait] = entry.get("value")
    return bag


def _geometry(platform: Platform, kind: str, mapped: dict, locator: str) -> ParcelGeometry:
    if kind == "fixed_square":
        side = (
            profiles.DECENTRALAND_PARCEL_SIDE_M
            if platform is Platform.DECENTRALAND
            else profiles.SANDBOX_PARCEL_SIDE_M
        )
        return FixedSquareGeometry(side_m=side)
    if kind == "box":
        area = _as_float(_require(mapped, "area_m2", locator), "area", locator)
        height = _as_float(_require(mapped, "height_m", locator), "height", locator)
        if area <= 0 or height <= 0:
            raise ParseError(f"area/height must be positive (got {area}, {height})", locator)
        return BoxGeometry(area_m2=area, height_m=height)
    if kind == "volume_class":
        cls = str(_require(mapped, "size_class", locator))
        volume = profiles.SOMNIUM_CLASS_VOLUMES_M3.get(cls)
        if volume is None:
            raise ParseError(f"unknown size class {cls!r}", locator)
        return VolumeClassGeometry(size_class=cls, volume_m3=volume)
    if kind == "traits":
        koda = mapped.get("has_koda", False)
        if not isinstance(koda, bool):
            raise ParseError("Koda attribute must be a boolean", locator)
        return TraitGeometry(
            sediment=_opt_str(mapped.get("sediment")),
            artifact=_opt_str(mapped.get("artifact")),
            has_koda=koda,
        )
    raise ParseError(f"unsupported geometry kind {kind!r}", locator)


def _require(mapped: dict, field_name: str, locator: str):
    if field_name not in mapped or mapped[field_name] is None:
        raise ParseError(f"missing required attribute for {field_name!r}", locator)
    return mapped[field_name]


def _opt_str(value) -> Optional[str]:
    return None if value in (None, "") else str(value)


def _as_int(value, what: str, locator: str) -> int:
    try:
        out = int(value)
    except (TypeError, ValueError):
        raise ParseError(f"{what} must be an integer (got {value!r})", locator) from None
    if isinstance(value, float) and value != out:
        raise ParseError(f"{what} must be an integer (got {value!r})", locator)
    return out


def _as_float(value, what: str, locator: str) -> float:
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ParseError(f"{what} must be numeric (got {value!r})", locator) from None
