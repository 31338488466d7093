"""Dataset invariant checks.

Violations are data, not faults: ``validate_dataset`` never raises, it
reports every broken invariant with a locator string so the operator can
find the offending record. A dataset is accepted iff the report is empty.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from . import profiles
from .dataset import PlatformDataset
from .records import (
    BoxGeometry,
    FixedSquareGeometry,
    Platform,
    SignalSource,
    TraitGeometry,
    VolumeClassGeometry,
)


@dataclass(frozen=True)
class Violation:
    code: str
    locator: str
    message: str

    def __str__(self) -> str:
        return f"[{self.code}] {self.locator}: {self.message}"


@dataclass
class ValidationReport:
    violations: list[Violation]

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> list[str]:
        return [v.code for v in self.violations]

    def summary(self) -> str:
        if self.ok:
            return "dataset accepted (no violations)"
        lines = [f"{len(self.violations)} violation(s):"]
        lines += [f"  {v}" for v in self.violations]
        return "\n".join(lines)


_GEOMETRY_BY_KIND = {
    "fixed_square": FixedSquareGeometry,
    "box": BoxGeometry,
    "volume_class": VolumeClassGeometry,
    "traits": TraitGeometry,
}


def validate_dataset(ds: PlatformDataset) -> ValidationReport:
    out: list[Violation] = []
    _check_parcels(ds, out)
    _check_estates(ds, out)
    _check_trades(ds, out)
    _check_listings(ds, out)
    _check_traffic(ds, out)
    _check_signals(ds, out)
    _check_quotes(ds, out)
    return ValidationReport(out)


def _check_parcels(ds: PlatformDataset, out: list[Violation]) -> None:
    prof = profiles.profile(ds.platform)
    seen_tokens: dict[int, int] = {}
    seen_coords: dict[tuple[int, int], int] = {}
    estate_members = {e.estate_id: e.member_tokens for e in ds.estates}

    for i, p in enumerate(ds.parcels):
        loc = f"parcels[{i}] token={p.token_id}"
        if p.platform is not ds.platform:
            out.append(Violation("parcel.platform", loc, f"record tagged {p.platform.value}"))
        if p.token_id in seen_tokens:
            out.append(
                Violation(
                    "parcel.token_unique",
                    loc,
                    f"token_id duplicates parcels[{seen_tokens[p.token_id]}]",
                )
            )
        else:
            seen_tokens[p.token_id] = i
        key = (p.x, p.y)
        if key in seen_coords:
            out.append(
                Violation(
                    "parcel.coord_unique",
                    loc,
                    f"(x,y)=({p.x},{p.y}) duplicates parcels[{seen_coords[key]}]",
                )
            )
        else:
            seen_coords[key] = i
        if p.token_id < 0:
            out.append(Violation("parcel.token_id", loc, "token_id must be unsigned"))
        if p.distance_to_nearest_poi is not None and p.distance_to_nearest_poi < 0:
            out.append(Violation("parcel.poi_distance", loc, "POI distance must be >= 0"))
        _check_geometry(p, prof, loc, out)
        if p.estate_id is not None:
            members = estate_members.get(p.estate_id)
            if members is None:
                out.append(
                    Violation("parcel.estate_missing", loc, f"estate {p.estate_id!r} does not exist")
                )
            elif p.token_id not in members:
                out.append(
                    Violation(
                        "parcel.estate_membership",
                        loc,
                        f"estate {p.estate_id!r} does not list this parcel",
                    )
                )


def _check_geometry(p, prof, loc: str, out: list[Violation]) -> None:
    expected = _GEOMETRY_BY_KIND[prof.geometry_kind]
    if not isinstance(p.geometry, expected):
        out.append(
            Violation(
                "parcel.geometry_kind",
                loc,
                f"{_kind_of(p.geometry)} geometry on a {prof.geometry_kind} platform",
            )
        )
        return
    g = p.geometry
    if isinstance(g, FixedSquareGeometry):
        want = (
            profiles.DECENTRALAND_PARCEL_SIDE_M
            if p.platform is Platform.DECENTRALAND
            else profiles.SANDBOX_PARCEL_SIDE_M
        )
        if g.side_m != want:
            out.append(
                Violation("parcel.geometry_side", loc, f"side {g.side_m}m, expected {want}m")
            )
    elif isinstance(g, BoxGeometry):
        if g.area_m2 <= 0:
            out.append(Violation("parcel.geometry_area", loc, f"area {g.area_m2} must be > 0"))
        if g.height_m <= 0:
            out.append(Violation("parcel.geometry_height", loc, f"height {g.height_m} must be > 0"))
    elif isinstance(g, VolumeClassGeometry):
        want = profiles.SOMNIUM_CLASS_VOLUMES_M3.get(g.size_class)
        if want is None:
            out.append(Violation("parcel.geometry_class", loc, f"unknown class {g.size_class!r}"))
        elif g.volume_m3 != want:
            out.append(
                Violation(
                    "parcel.geometry_volume",
                    loc,
                    f"class {g.size_class} volume {g.volume_m3}, expected {want}",
                )
            )


def _kind_of(geometry) -> str:
    return getattr(geometry, "kind", type(geometry).__name__)


def _check_estates(ds: PlatformDataset, out: list[Violation]) -> None:
    coords = {p.token_id: (p.x, p.y) for p in ds.parcels}
    for i, e in enumerate(ds.estates):
        loc = f"estates[{i}] id={e.estate_id}"
        missing = [t for t in e.member_tokens if t not in coords]
        if missing:
            out.append(
                Violation("estate.unknown_member", loc, f"member token(s) {sorted(missing)} not in parcels")
            )
            continue
        cells = {coords[t] for t in e.member_tokens}
        if cells and not _is_connected(cells):
            out.append(Violation("estate.connectivity", loc, "members are not edge-connected"))
        if ds.platform is Platform.SANDBOX:
            side = _square_side(cells)
            if side is None or side not in profiles.SANDBOX_ESTATE_SIDES:
                out.append(
                    Violation(
                        "estate.sandbox_shape",
                        loc,
                        f"must be a square of side in {profiles.SANDBOX_ESTATE_SIDES}",
                    )
                )


def _is_connected(cells: set[tuple[int, int]]) -> bool:
    start = next(iter(cells))
    seen = {start}
    stack = [start]
    while stack:
        x, y = stack.pop()
        for nb in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            if nb in cells and nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(cells)


def _square_side(cells: set[tuple[int, int]]):
    """Side length if the cells tile an exact square, else None."""
    if not cells:
        return None
    xs = [c[0] for c in cells]
    ys = [c[1] for c in cells]
    w = max(xs) - min(xs) + 1
    h = max(ys) - min(ys) + 1
    if w != h or w * h != len(cells):
        return None
    return w


def _check_trades(ds: PlatformDataset, out: list[Violation]) -> None:
    tokens = {p.token_id for p in ds.parcels}
    for i, t in enumerate(ds.trades):
        loc = f"trades[{i}] token={t.token_id} @{t.timestamp.isoformat()}"
        if t.platform is not ds.platform:
            out.append(Violation("trade.platform", loc, f"record tagged {t.platform.value}"))
        if t.amount_usd < 0 or t.amount_crypto < 0:
            out.append(Violation("trade.negative_amount", loc, "amounts must be >= 0"))
        if t.economic != (t.amount_usd > 0):
            out.append(
                Violation(
                    "trade.economic_flag",
                    loc,
                    f"economic={t.economic} but amount_usd={t.amount_usd}",
                )
            )
        if t.buyer == t.seller:
            out.append(Violation("trade.self_trade", loc, "buyer and seller are the same account"))
        if tokens and t.token_id not in tokens:
            out.append(Violation("trade.unknown_token", loc, "no such parcel"))


def _check_listings(ds: PlatformDataset, out: list[Violation]) -> None:
    seen: dict[tuple[int, str, object], int] = {}
    for i, l in enumerate(ds.listings):
        loc = f"listings[{i}] token={l.token_id} {l.exchange} {l.observed_date}"
        if l.price_amount <= 0 or l.price_usd <= 0:
            out.append(Violation("listing.price_positive", loc, "listing price must be > 0"))
        key = (l.token_id, l.exchange, l.observed_date)
        if key in seen:
            out.append(
                Violation("listing.unique", loc, f"duplicates listings[{seen[key]}]")
            )
        else:
            seen[key] = i


def _check_traffic(ds: PlatformDataset, out: list[Violation]) -> None:
    allowed = profiles.allowed_traffic_tags(ds.platform)
    for i, s in enumerate(ds.traffic):
        loc = f"traffic[{i}] token={s.token_id} @{s.period_start.isoformat()}"
        if (s.metric, s.audience) not in allowed:
            out.append(
                Violation(
                    "traffic.stream",
                    loc,
                    f"({s.metric.value}, {s.audience.value}) not collected for {ds.platform.value}",
                )
            )
        if s.count < 0:
            out.append(Violation("traffic.count", loc, "count must be >= 0"))


def _check_signals(ds: PlatformDataset, out: list[Violation]) -> None:
    seen: dict[tuple, int] = {}
    for i, s in enumerate(ds.signals):
        loc = f"signals[{i}] {s.source.value} {s.date}"
        needs_platform = s.source is SignalSource.TWITTER_PLATFORM
        if needs_platform and s.platform is None:
            out.append(Violation("signal.platform_required", loc, "platform tag required"))
        if not needs_platform and s.platform is not None:
            out.append(Violation("signal.platform_forbidden", loc, "platform tag not allowed"))
        if s.value < 0:
            out.append(Violation("signal.value", loc, "value must be >= 0"))
        key = (s.date, s.source, s.platform)
        if key in seen:
            out.append(Violation("signal.unique", loc, f"duplicates signals[{seen[key]}]"))
        else:
            seen[key] = i


def _check_quotes(ds: PlatformDataset, out: list[Violation]) -> None:
    seen: dict[tuple, int] = {}
    eth_days = set()
    for i, q in enumerate(ds.quotes):
        loc = f"quotes[{i}] {q.currency} {q.date}"
        if q.usd_rate <= 0:
            out.append(Violation("quote.rate_positive", loc, "usd_rate must be > 0"))
        key = (q.date, q.currency)
        if key in seen:
            out.append(Violation("quote.unique", loc, f"duplicates quotes[{seen[key]}]"))
        else:
            seen[key] = i
        if q.currency == "ETH":
            eth_days.add(q.date)
    trade_days = defaultdict(list)
    for i, t in enumerate(ds.trades):
        trade_days[t.day].append(i)
    for day in sorted(trade_days):
        if day not in eth_days:
            out.append(
                Violation(
                    "quote.eth_missing",
                    f"trades[{trade_days[day][0]}] day={day}",
                    "no ETH/USD quote for a day with trades",
                )
            )
