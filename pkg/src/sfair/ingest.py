"""Dataset ingestion: CSV/JSON loaders, validation, and immutable snapshots.

All inputs are UTF-8, comma-delimited, RFC-4180 CSV with exact header rows
(schemas in the README). Loading is deterministic: identical input bytes
produce an identical snapshot digest.
"""

from __future__ import annotations

import csv
import datetime as dt
import hashlib
import json
import re
import zlib
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .geo import GeoPoint, great_circle_km
from .popularity import (
    PopularityComponents,
    PopularityRaw,
    normalize_components,
    ugc_proxy_check,
)
from .seasonality import (
    MONTHS,
    DailyRateSeries,
    MonthlyVisitorSeries,
    SeasonalitySet,
    adr_avc_diagnostics,
    seasonal_profile,
)
from .transport import (
    AirlineRate,
    CostTables,
    EmissionFactors,
    ModeScore,
    RouteRecord,
    TradeoffBreakdown,
    TransportMode,
    TripOption,
    emissions_tradeoff_index,
    feasible_options,
)
from .weights import WeightConfig, default_weights, load_weight_config

SNAPSHOT_VERSION = 1
SNAPSHOT_MAGIC = b"SFSNAP"

DEFAULT_CORPUS_SIZE = 200
MAX_WINDOW_DAYS = 400

CITY_HEADER = ["id", "name", "country", "lat", "lng", "population"]
AIRPORT_HEADER = ["iata", "city_id"]
ROUTE_HEADER = ["origin", "dest", "mode", "distance_km", "duration_h", "carrier", "fuel_liters", "source"]
AVC_HEADER = ["city_id"] + [f"m{i}" for i in MONTHS]
CALENDAR_HEADER = ["listing_id", "city_id", "date", "available", "price"]
POPULARITY_HEADER = ["city_id", "poi_count", "reviews_opinions", "attraction_reviews", "attraction_photos"]
GT_HEADER = ["city_id", "week", "value"]

REQUIRED_FILES = (
    "cities.csv",
    "airports.csv",
    "routes.csv",
    "avc.csv",
    "calendar.csv",
    "popularity.csv",
    "gt.csv",
    "costs.json",
)

_IATA_RE = re.compile(r"^[A-Z]{3}$")
_PRICE_STRIP_RE = re.compile(r"[^0-9.\-]")

_TRUE = {"t", "true", "1"}
_FALSE = {"f", "false", "0"}


class IngestError(Exception):
    """Ingestion could not produce a snapshot."""


@dataclass(frozen=True)
class CityRecord:
    id: str
    name: str
    country: str
    lat: float
    lon: float
    population: int
    airports: tuple[str, ...] = ()

    @property
    def point(self) -> GeoPoint:
        return GeoPoint(self.lat, self.lon)


@dataclass(frozen=True)
class ValidationIssue:
    severity: str  # "error" | "warning" | "info"
    file: str
    line: int | None
    message: str

    def format(self) -> str:
        location = f"{self.file}:{self.line}" if self.line is not None else self.file
        return f"{location}: {self.severity}: {self.message}"


@dataclass
class IngestReport:
    issues: list[ValidationIssue] = field(default_factory=list)

    def add(self, severity: str, file: str, line: int | None, message: str) -> None:
        self.issues.append(ValidationIssue(severity, file, line, message))

    def extend(self, issues: Iterable[ValidationIssue]) -> None:
        self.issues.extend(issues)

    @property
    def errors(self) -> list[ValidationIssue]:
        return [i for i in self.issues if i.severity == "error"]

    @property
    def warnings(self) -> list[ValidationIssue]:
        return [i for i in self.issues if i.severity == "warning"]

    def has_errors(self) -> bool:
        return bool(self.errors)

    def format_lines(self) -> list[str]:
        return [issue.format() for issue in self.issues]


@dataclass(frozen=True)
class DatasetSnapshot:
    """Immutable bundle of ingested data plus all computed indices."""

    corpus_size: int
    cities: tuple[CityRecord, ...]
    routes: Mapping[tuple[str, str], tuple[RouteRecord, ...]]
    avc: Mapping[str, MonthlyVisitorSeries]
    adr: Mapping[str, DailyRateSeries]
    popularity_raw: Mapping[str, PopularityRaw]
    cost_tables: CostTables
    factors: EmissionFactors
    weights: WeightConfig
    window: tuple[dt.date, dt.date] | None
    components: Mapping[str, PopularityComponents]
    seasonal: Mapping[str, SeasonalitySet]
    pair_options: Mapping[tuple[str, str], tuple[TripOption, ...]]
    pair_breakdowns: Mapping[tuple[str, str], TradeoffBreakdown]
    digest: str
    created_at: str

    @property
    def city_index(self) -> dict[str, CityRecord]:
        return {c.id: c for c in self.cities}


# ---------------------------------------------------------------------------
# CSV plumbing
# ---------------------------------------------------------------------------


def _read_rows(
    path: Path, header: Sequence[str], report: IngestReport
) -> list[tuple[int, list[str]]] | None:
    """Rows with their line numbers, or None when the file is unusable."""
    name = path.name
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        report.add("error", name, None, f"cannot read file: {exc}")
        return None
    with fh:
        reader = csv.reader(fh)
        try:
            first = next(reader)
        except StopIteration:
            report.add("error", name, 1, "missing header row")
            return None
        if first != list(header):
            report.add(
                "error", name, 1,
                f"header mismatch: expected {','.join(header)!r}, got {','.join(first)!r}",
            )
            return None
        rows = []
        for row in reader:
            if not row or all(not cell.strip() for cell in row):
                continue
            rows.append((reader.line_num, row))
        return rows


def _parse_float(cell: str) -> float | None:
    try:
        return float(cell.strip())
    except ValueError:
        return None


def parse_price(cell: str) -> float | None:
    """Parse a currency string like ``$1,234.00`` into a float, or None."""
    cleaned = _PRICE_STRIP_RE.sub("", cell.replace(",", ""))
    if not cleaned:
        return None
    try:
        return float(cleaned)
    except ValueError:
        return None


# ---------------------------------------------------------------------------
# Loaders
# ---------------------------------------------------------------------------


def load_cities(
    cities_path: Path,
    airports_path: Path,
    n: int = DEFAULT_CORPUS_SIZE,
    report: IngestReport | None = None,
) -> tuple[list[CityRecord], IngestReport]:
    """Join cities to airports, keep those with one or more, take the top n by population."""
    report = report if report is not None else IngestReport()
    city_rows = _read_rows(cities_path, CITY_HEADER, report)
    airport_rows = _read_rows(airports_path, AIRPORT_HEADER, report)
    if city_rows is None or airport_rows is None:
        return [], report

    raw: dict[str, dict] = {}
    for line, row in city_rows:
        if len(row) != len(CITY_HEADER):
            report.add("error", cities_path.name, line, f"expected {len(CITY_HEADER)} fields, got {len(row)}")
            continue
        city_id, name, country, lat_s, lng_s, pop_s = (cell.strip() for cell in row)
        if not city_id:
            report.add("error", cities_path.name, line, "empty city id")
            continue
        if city_id in raw:
            report.add("error", cities_path.name, line, f"duplicate city id {city_id!r}")
            continue
        lat = _parse_float(lat_s)
        lng = _parse_float(lng_s)
        if lat is None or lng is None or not (-90 <= lat <= 90) or not (-180 <= lng <= 180):
            report.add("error", cities_path.name, line, f"invalid coordinates ({lat_s}, {lng_s})")
            continue
        try:
            population = int(pop_s)
        except ValueError:
            report.add("error", cities_path.name, line, f"invalid population {pop_s!r}")
            continue
        if population < 0:
            report.add("error", cities_path.name, line, f"negative population {population}")
            continue
        raw[city_id] = {
            "id": city_id, "name": name, "country": country,
            "lat": lat, "lon": lng, "population": population, "airports": [],
        }

    for line, row in airport_rows:
        if len(row) != len(AIRPORT_HEADER):
            report.add("error", airports_path.name, line, f"expected 2 fields, got {len(row)}")
            continue
        iata, city_id = (cell.strip() for cell in row)
        if not _IATA_RE.match(iata):
            report.add("error", airports_path.name, line, f"invalid IATA code {iata!r}")
            continue
        entry = raw.get(city_id)
        if entry is None:
            report.add("warning", airports_path.name, line, f"airport {iata} references unknown city {city_id!r}")
            continue
        if iata not in entry["airports"]:
            entry["airports"].append(iata)

    with_airport = [e for e in raw.values() if e["airports"]]
    with_airport.sort(key=lambda e: (-e["population"], e["id"]))
    selected = with_airport[:n]
    if not selected:
        report.add("warning", cities_path.name, None, "no cities with at least one airport; corpus is empty")
    corpus = [
        CityRecord(
            id=e["id"], name=e["name"], country=e["country"],
            lat=e["lat"], lon=e["lon"], population=e["population"],
            airports=tuple(sorted(e["airports"])),
        )
        for e in selected
    ]
    corpus.sort(key=lambda c: c.id)
    return corpus, report


def load_routes(
    routes_path: Path,
    corpus: Mapping[str, CityRecord],
    report: IngestReport | None = None,
) -> tuple[dict[tuple[str, str], tuple[RouteRecord, ...]], IngestReport]:
    """Validated route records grouped per city pair, one per mode (minimum distance)."""
    report = report if report is not None else IngestReport()
    rows = _read_rows(routes_path, ROUTE_HEADER, report)
    if rows is None:
        return {}, report
    name = routes_path.name

    collected: dict[tuple[str, str, TransportMode], list[RouteRecord]] = {}
    for line, row in rows:
        if len(row) != len(ROUTE_HEADER):
            report.add("error", name, line, f"expected {len(ROUTE_HEADER)} fields, got {len(row)}")
            continue
        origin, dest, mode_s, dist_s, dur_s, carrier, fuel_s, source = (c.strip() for c in row)
        if origin not in corpus or dest not in corpus:
            unknown = origin if origin not in corpus else dest
            report.add("warning", name, line, f"route references unknown city {unknown!r}; row skipped")
            continue
        try:
            mode = TransportMode.parse(mode_s)
        except ValueError:
            report.add("error", name, line, f"unknown transport mode {mode_s!r}")
            continue
        if dist_s:
            distance = _parse_float(dist_s)
            if distance is None or distance <= 0:
                report.add("error", name, line, f"invalid distance {dist_s!r}")
                continue
        elif mode is TransportMode.FLIGHT:
            distance = great_circle_km(corpus[origin].point, corpus[dest].point)
        else:
            report.add("error", name, line, f"{mode.label} route missing distance")
            continue
        duration = _parse_float(dur_s)
        if duration is None or duration <= 0:
            report.add("error", name, line, f"invalid duration {dur_s!r}")
            continue
        if mode is TransportMode.DRIVE and distance > 1000.0:
            report.add("warning", name, line, f"drive route of {distance:g} km exceeds 1000 km; excluded")
            continue
        fuel = None
        if fuel_s:
            fuel = _parse_float(fuel_s)
            if fuel is None or fuel <= 0:
                report.add("error", name, line, f"invalid fuel volume {fuel_s!r}")
                continue
        record = RouteRecord(
            origin=origin, dest=dest, mode=mode,
            distance_km=distance, duration_h=duration,
            carrier=carrier or None, fuel_liters=fuel, source=source,
        )
        collected.setdefault((origin, dest, mode), []).append(record)

    grouped: dict[tuple[str, str], list[RouteRecord]] = {}
    for (origin, dest, mode), records in collected.items():
        best = min(records, key=lambda r: (r.distance_km, r.duration_h, r.carrier or "", r.source))
        grouped.setdefault((origin, dest), []).append(best)
    return {
        pair: tuple(sorted(records, key=lambda r: r.mode))
        for pair, records in sorted(grouped.items())
    }, report


def load_avc(
    avc_path: Path, report: IngestReport | None = None
) -> tuple[dict[str, MonthlyVisitorSeries], IngestReport]:
    """Complete, positive-total monthly visitor series; incomplete rows are flagged."""
    report = report if report is not None else IngestReport()
    rows = _read_rows(avc_path, AVC_HEADER, report)
    if rows is None:
        return {}, report
    name = avc_path.name

    series: dict[str, MonthlyVisitorSeries] = {}
    for line, row in rows:
        if len(row) != len(AVC_HEADER):
            report.add("error", name, line, f"expected {len(AVC_HEADER)} fields, got {len(row)}")
            continue
        city_id = row[0].strip()
        counts: list[float] = []
        incomplete = False
        bad = False
        for month, cell in zip(MONTHS, row[1:]):
            text = cell.strip()
            if not text:
                incomplete = True
                continue
            value = _parse_float(text)
            if value is None:
                report.add("error", name, line, f"invalid count for m{month}: {text!r}")
                bad = True
                break
            if value < 0:
                report.add("error", name, line, f"negative count for m{month}: {value:g}")
                bad = True
                break
            counts.append(value)
        if bad:
            continue
        if incomplete:
            report.add("warning", name, line, f"{city_id}: missing months; series flagged incomplete")
            continue
        if sum(counts) <= 0:
            report.add("warning", name, line, f"{city_id}: all-zero year; visitor gini undefined")
            continue
        if city_id in series:
            report.add("error", name, line, f"duplicate visitor series for {city_id!r}")
            continue
        series[city_id] = MonthlyVisitorSeries(city_id=city_id, counts=tuple(counts))
    return series, report


def load_calendar(
    calendar_path: Path, report: IngestReport | None = None
) -> tuple[dict[str, DailyRateSeries], IngestReport]:
    """City-level mean daily rates from per-listing calendar rows.

    The day's rate averages the listings marked available; when a date has
    no available listing it falls back to the mean over all listed prices.
    """
    report = report if report is not None else IngestReport()
    rows = _read_rows(calendar_path, CALENDAR_HEADER, report)
    if rows is None:
        return {}, report
    name = calendar_path.name

    # (city, date) -> listing -> (available, price); duplicates: last wins.
    per_day: dict[tuple[str, dt.date], dict[str, tuple[bool, float]]] = {}
    skipped_prices = 0
    for line, row in rows:
        if len(row) != len(CALENDAR_HEADER):
            report.add("error", name, line, f"expected {len(CALENDAR_HEADER)} fields, got {len(row)}")
            continue
        listing_id, city_id, date_s, avail_s, price_s = (c.strip() for c in row)
        try:
            day = dt.date.fromisoformat(date_s)
        except ValueError:
            report.add("error", name, line, f"invalid ISO date {date_s!r}")
            continue
        avail_l = avail_s.lower()
        if avail_l in _TRUE:
            available = True
        elif avail_l in _FALSE:
            available = False
        else:
            report.add("warning", name, line, f"unrecognized availability flag {avail_s!r}; row skipped")
            continue
        price = parse_price(price_s)
        if price is None or price <= 0:
            skipped_prices += 1
            continue
        listings = per_day.setdefault((city_id, day), {})
        if listing_id in listings:
            report.add("warning", name, line, f"duplicate row for listing {listing_id} on {date_s}; last wins")
        listings[listing_id] = (available, price)
    if skipped_prices:
        report.add("warning", name, None, f"{skipped_prices} rows with unparseable or nonpositive prices skipped")

    daily: dict[str, dict[dt.date, float]] = {}
    for (city_id, day), listings in per_day.items():
        available_prices = [p for a, p in listings.values() if a]
        prices = available_prices or [p for _, p in listings.values()]
        daily.setdefault(city_id, {})[day] = sum(prices) / len(prices)
    return {
        city_id: DailyRateSeries(city_id=city_id, rates=dict(sorted(rates.items())))
        for city_id, rates in sorted(daily.items())
    }, report


def load_popularity(
    popularity_path: Path,
    gt_path: Path,
    report: IngestReport | None = None,
) -> tuple[dict[str, PopularityRaw], IngestReport]:
    """Popularity counts joined with annualized search-trend values."""
    report = report if report is not None else IngestReport()
    pop_rows = _read_rows(popularity_path, POPULARITY_HEADER, report)
    gt_rows = _read_rows(gt_path, GT_HEADER, report)
    if pop_rows is None or gt_rows is None:
        return {}, report
    pname, gname = popularity_path.name, gt_path.name

    counts: dict[str, dict[str, int]] = {}
    for line, row in pop_rows:
        if len(row) != len(POPULARITY_HEADER):
            report.add("error", pname, line, f"expected {len(POPULARITY_HEADER)} fields, got {len(row)}")
            continue
        city_id = row[0].strip()
        if city_id in counts:
            report.add("error", pname, line, f"duplicate popularity row for {city_id!r}")
            continue
        parsed: dict[str, int] = {}
        bad = False
        for column, cell in zip(POPULARITY_HEADER[1:], row[1:]):
            try:
                value = int(cell.strip())
            except ValueError:
                report.add("error", pname, line, f"invalid {column}: {cell.strip()!r}")
                bad = True
                break
            if value < 0:
                report.add("error", pname, line, f"negative {column}: {value}")
                bad = True
                break
            parsed[column] = value
        if not bad:
            counts[city_id] = parsed

    weekly: dict[str, list[float]] = {}
    for line, row in gt_rows:
        if len(row) != len(GT_HEADER):
            report.add("error", gname, line, f"expected {len(GT_HEADER)} fields, got {len(row)}")
            continue
        city_id, _week, value_s = (c.strip() for c in row)
        value = _parse_float(value_s)
        if value is None or not 0.0 <= value <= 100.0:
            report.add("error", gname, line, f"trend value out of range [0, 100]: {value_s!r}")
            continue
        if city_id not in counts:
            report.add("warning", gname, line, f"trend rows for city {city_id!r} without popularity data; dropped")
            continue
        weekly.setdefault(city_id, []).append(value)

    out: dict[str, PopularityRaw] = {}
    for city_id, parsed in sorted(counts.items()):
        values = weekly.get(city_id)
        gt_index = sum(values) / len(values) if values else None
        out[city_id] = PopularityRaw(
            city_id=city_id,
            poi_count=parsed["poi_count"],
            ugc_count=parsed["reviews_opinions"],
            attraction_reviews=parsed["attraction_reviews"],
            attraction_photos=parsed["attraction_photos"],
            gt_index=gt_index,
        )
    return out, report


def load_cost_tables(costs_path: Path) -> CostTables:
    with open(costs_path, encoding="utf-8") as fh:
        data = json.load(fh)
    airlines = {
        code: AirlineRate(domestic=rate["domestic"], international=rate["international"])
        for code, rate in data.get("airline_eur_per_km", {}).items()
    }
    return CostTables(
        airline_eur_per_km=airlines,
        train_eur_per_km=data.get("train_eur_per_km", CostTables().train_eur_per_km),
        fuel_eur_per_km_by_country=dict(data.get("fuel_eur_per_km_by_country", {})),
    )


def load_emission_factors(factors_path: Path) -> EmissionFactors:
    """Emission factor overrides; anything absent keeps its published default."""
    from .geo import HaulCategory

    with open(factors_path, encoding="utf-8") as fh:
        data = json.load(fh)
    defaults = EmissionFactors()
    flight = dict(defaults.flight_g_per_km)
    for label, value in data.get("flight_g_per_km", {}).items():
        try:
            flight[HaulCategory[label.upper()]] = value
        except KeyError:
            raise ValueError(f"unknown haul category {label!r}") from None
    return EmissionFactors(
        flight_g_per_km=flight,
        drive_g_per_km=data.get("drive_g_per_km", defaults.drive_g_per_km),
        train_g_per_km=data.get("train_g_per_km", defaults.train_g_per_km),
        fuel_kg_per_liter=data.get("fuel_kg_per_liter", defaults.fuel_kg_per_liter),
        flight_distance_correction=data.get(
            "flight_distance_correction", defaults.flight_distance_correction
        ),
    )


# ---------------------------------------------------------------------------
# Snapshot assembly
# ---------------------------------------------------------------------------


def _filter_to_corpus(
    data: dict[str, object], corpus: Mapping[str, CityRecord], file: str, report: IngestReport
) -> dict:
    kept = {}
    for city_id, value in data.items():
        if city_id in corpus:
            kept[city_id] = value
        else:
            report.add("warning", file, None, f"data for city {city_id!r} outside the corpus; dropped")
    return kept


def build_snapshot(
    *,
    cities: Sequence[CityRecord],
    routes: Mapping[tuple[str, str], tuple[RouteRecord, ...]],
    avc: Mapping[str, MonthlyVisitorSeries],
    adr: Mapping[str, DailyRateSeries],
    popularity_raw: Mapping[str, PopularityRaw],
    cost_tables: CostTables | None = None,
    factors: EmissionFactors | None = None,
    weights: WeightConfig | None = None,
    corpus_size: int = DEFAULT_CORPUS_SIZE,
    report: IngestReport | None = None,
    created_at: str | None = None,
) -> tuple[DatasetSnapshot, IngestReport]:
    """Cross-validate loaded data, compute every index, and publish a snapshot."""
    report = report if report is not None else IngestReport()
    cost_tables = cost_tables or CostTables()
    factors = factors or EmissionFactors()
    weights = weights or default_weights()

    if not cities:
        report.add("error", "corpus", None, "snapshot refused: corpus is empty")
        raise IngestError("corpus is empty")
    corpus = {c.id: c for c in cities}

    avc = _filter_to_corpus(dict(avc), corpus, "avc.csv", report)
    adr = _filter_to_corpus(dict(adr), corpus, "calendar.csv", report)
    popularity_raw = _filter_to_corpus(dict(popularity_raw), corpus, "popularity.csv", report)

    window: tuple[dt.date, dt.date] | None = None
    all_days = [day for series in adr.values() for day in series.rates]
    if all_days:
        window = (min(all_days), max(all_days))
        span = (window[1] - window[0]).days
        if span > MAX_WINDOW_DAYS:
            report.add(
                "error", "calendar.csv", None,
                f"calendar window spans {span} days; the limit is {MAX_WINDOW_DAYS}",
            )
            raise IngestError("calendar window too wide")

    components = normalize_components(list(popularity_raw.values())) if popularity_raw else {}

    seasonal: dict[str, SeasonalitySet] = {}
    for city_id in sorted(corpus):
        avc_series = avc.get(city_id)
        adr_series = adr.get(city_id)
        if avc_series is None and adr_series is None:
            continue
        seasonal[city_id] = seasonal_profile(city_id, avc_series, adr_series, weights.seasonality)

    pair_options: dict[tuple[str, str], tuple[TripOption, ...]] = {}
    pair_breakdowns: dict[tuple[str, str], TradeoffBreakdown] = {}
    for (origin, dest), records in sorted(routes.items()):
        origin_city = corpus.get(origin)
        dest_city = corpus.get(dest)
        if origin_city is None or dest_city is None:
            report.add("warning", "routes.csv", None, f"pair ({origin}, {dest}) outside the corpus; dropped")
            continue
        options = feasible_options(
            records,
            origin_country=origin_city.country,
            dest_country=dest_city.country,
            origin_has_airport=bool(origin_city.airports),
            dest_has_airport=bool(dest_city.airports),
            tables=cost_tables,
            factors=factors,
        )
        if not options:
            report.add("warning", "routes.csv", None, f"no feasible option for ({origin}, {dest})")
            continue
        pair_options[(origin, dest)] = options
        pair_breakdowns[(origin, dest)] = emissions_tradeoff_index(options, weights.tradeoff)

    reachable = {dest for (_origin, dest) in pair_options}
    for city_id in sorted(corpus):
        if city_id not in reachable:
            report.add("info", "routes.csv", None, f"city {city_id} is unreachable; it will appear unscored")
        if city_id not in components:
            report.add("info", "popularity.csv", None, f"city {city_id} has no popularity data; unscoreable")
        if city_id not in seasonal:
            report.add("info", "avc.csv", None, f"city {city_id} has no seasonal data; unscoreable")

    _diagnostics(list(popularity_raw.values()), avc, adr, report)

    snapshot = DatasetSnapshot(
        corpus_size=corpus_size,
        cities=tuple(sorted(cities, key=lambda c: c.id)),
        routes={pair: tuple(records) for pair, records in sorted(routes.items())},
        avc=dict(sorted(avc.items())),
        adr=dict(sorted(adr.items())),
        popularity_raw=dict(sorted(popularity_raw.items())),
        cost_tables=cost_tables,
        factors=factors,
        weights=weights,
        window=window,
        components=dict(sorted(components.items())),
        seasonal=seasonal,
        pair_options=pair_options,
        pair_breakdowns=pair_breakdowns,
        digest="",
        created_at=created_at or dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds"),
    )
    digest = hashlib.sha256(canonical_payload_bytes(snapshot)).hexdigest()
    snapshot = replace(snapshot, digest=digest)
    return snapshot, report


def _diagnostics(
    popularity_raws: Sequence[PopularityRaw],
    avc: Mapping[str, MonthlyVisitorSeries],
    adr: Mapping[str, DailyRateSeries],
    report: IngestReport,
) -> None:
    """Correlation diagnostics, reported as info lines; they gate nothing."""
    ugc = ugc_proxy_check(popularity_raws)
    if ugc:
        for (a, b), result in sorted(ugc.items()):
            report.add(
                "info", "popularity.csv", None,
                f"ugc proxy {a}~{b}: r={result.r:.4f}, p={result.p_value:.4g}, "
                f"{'significant' if result.significant else 'not significant'}",
            )
    for city_id in sorted(set(avc) & set(adr)):
        monthly_means = []
        for month in MONTHS:
            values = adr[city_id].month_values(month)
            if not values:
                break
            monthly_means.append(sum(values) / len(values))
        if len(monthly_means) != 12:
            continue
        try:
            result = adr_avc_diagnostics(avc[city_id], monthly_means)
        except ValueError:
            continue
        report.add(
            "info", "calendar.csv", None,
            f"{city_id}: visitor~rate correlation r={result.r:.4f}, "
            f"{'significant' if result.significant else 'not significant'}",
        )


def ingest_directory(
    data_dir: str | Path,
    *,
    corpus_size: int = DEFAULT_CORPUS_SIZE,
) -> tuple[DatasetSnapshot | None, IngestReport]:
    """Run every loader against a data directory and build the snapshot."""
    data_dir = Path(data_dir)
    report = IngestReport()
    missing = [name for name in REQUIRED_FILES if not (data_dir / name).exists()]
    for name in missing:
        report.add("error", name, None, "required input file is missing")
    if missing:
        return None, report

    cities, _ = load_cities(data_dir / "cities.csv", data_dir / "airports.csv", corpus_size, report)
    corpus = {c.id: c for c in cities}
    routes, _ = load_routes(data_dir / "routes.csv", corpus, report)
    avc, _ = load_avc(data_dir / "avc.csv", report)
    adr, _ = load_calendar(data_dir / "calendar.csv", report)
    popularity_raw, _ = load_popularity(data_dir / "popularity.csv", data_dir / "gt.csv", report)
    try:
        cost_tables = load_cost_tables(data_dir / "costs.json")
    except (ValueError, KeyError, TypeError) as exc:
        report.add("error", "costs.json", None, f"invalid cost tables: {exc}")
        return None, report

    weights_path = data_dir / "weights.json"
    if weights_path.exists():
        try:
            weights = load_weight_config(weights_path)
        except Exception as exc:
            report.add("error", "weights.json", None, str(exc))
            return None, report
    else:
        weights = default_weights()

    factors_path = data_dir / "factors.json"
    factors = None
    if factors_path.exists():
        try:
            factors = load_emission_factors(factors_path)
        except (ValueError, KeyError, TypeError) as exc:
            report.add("error", "factors.json", None, f"invalid emission factors: {exc}")
            return None, report

    if report.has_errors():
        return None, report
    try:
        snapshot, _ = build_snapshot(
            cities=cities,
            routes=routes,
            avc=avc,
            adr=adr,
            popularity_raw=popularity_raw,
            cost_tables=cost_tables,
            factors=factors,
            weights=weights,
            corpus_size=corpus_size,
            report=report,
        )
    except IngestError:
        return None, report
    if report.has_errors():
        return None, report
    return snapshot, report


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def _pair_key(pair: tuple[str, str]) -> str:
    return f"{pair[0]}|{pair[1]}"


def _option_dict(option: TripOption) -> dict:
    return {
        "mode": option.mode.label,
        "distance_km": option.distance_km,
        "travel_time_h": option.travel_time_h,
        "emissions_kg": option.emissions_kg,
        "cost_eur": option.cost_eur,
        "carrier": option.carrier,
    }


def _breakdown_dict(breakdown: TradeoffBreakdown) -> dict:
    return {
        "scores": [
            {
                "mode": s.mode.label,
                "time_norm": s.time_norm,
                "emissions_norm": s.emissions_norm,
                "cost_norm": s.cost_norm,
                "weighted": s.weighted,
            }
            for s in breakdown.scores
        ],
        "index": breakdown.index,
        "best_mode": breakdown.best_mode.label,
    }


def snapshot_payload(snapshot: DatasetSnapshot) -> dict:
    """The digestable content of a snapshot (everything except creation time)."""
    return {
        "version": SNAPSHOT_VERSION,
        "corpus_size": snapshot.corpus_size,
        "cities": [
            {
                "id": c.id, "name": c.name, "country": c.country,
                "lat": c.lat, "lon": c.lon, "population": c.population,
                "airports": list(c.airports),
            }
            for c in snapshot.cities
        ],
        "routes": {
            _pair_key(pair): [
                {
                    "mode": r.mode.label,
                    "distance_km": r.distance_km,
                    "duration_h": r.duration_h,
                    "carrier": r.carrier,
                    "fuel_liters": r.fuel_liters,
                    "source": r.source,
                }
                for r in records
            ]
            for pair, records in snapshot.routes.items()
        },
        "avc": {city_id: list(s.counts) for city_id, s in snapshot.avc.items()},
        "adr": {
            city_id: {day.isoformat(): rate for day, rate in s.rates.items()}
            for city_id, s in snapshot.adr.items()
        },
        "popularity": {
            city_id: {
                "poi_count": raw.poi_count,
                "ugc_count": raw.ugc_count,
                "attraction_reviews": raw.attraction_reviews,
                "attraction_photos": raw.attraction_photos,
                "gt_index": raw.gt_index,
            }
            for city_id, raw in snapshot.popularity_raw.items()
        },
        "cost_tables": {
            "airline_eur_per_km": {
                code: {"domestic": rate.domestic, "international": rate.international}
                for code, rate in sorted(snapshot.cost_tables.airline_eur_per_km.items())
            },
            "train_eur_per_km": snapshot.cost_tables.train_eur_per_km,
            "fuel_eur_per_km_by_country": dict(sorted(snapshot.cost_tables.fuel_eur_per_km_by_country.items())),
        },
        "factors": snapshot.factors.to_dict(),
        "weights": snapshot.weights.to_dict(),
        "window": [snapshot.window[0].isoformat(), snapshot.window[1].isoformat()] if snapshot.window else None,
        "indices": {
            "components": {
                city_id: {"poi": c.poi, "ugc": c.ugc, "trends": c.trends}
                for city_id, c in snapshot.components.items()
            },
            "seasonal": {
                city_id: {
                    "visitor_gini": s.visitor_gini,
                    "rate_gini_by_month": list(s.rate_gini_by_month),
                    "index_by_month": list(s.index_by_month),
                }
                for city_id, s in snapshot.seasonal.items()
            },
            "tradeoffs": {
                _pair_key(pair): {
                    "options": [_option_dict(o) for o in snapshot.pair_options[pair]],
                    **_breakdown_dict(snapshot.pair_breakdowns[pair]),
                }
                for pair in snapshot.pair_options
            },
        },
    }


def canonical_payload_bytes(snapshot: DatasetSnapshot) -> bytes:
    return json.dumps(
        snapshot_payload(snapshot), sort_keys=True, separators=(",", ":"), ensure_ascii=False
    ).encode("utf-8")


def save_snapshot(snapshot: DatasetSnapshot, path: str | Path) -> None:
    """Write the versioned binary snapshot file with its embedded digest."""
    payload = canonical_payload_bytes(snapshot)
    digest = hashlib.sha256(payload).hexdigest()
    header = SNAPSHOT_MAGIC + bytes([SNAPSHOT_VERSION]) + b"\n"
    header += digest.encode("ascii") + b"\n"
    header += snapshot.created_at.encode("ascii") + b"\n"
    Path(path).write_bytes(header + zlib.compress(payload, 9))


class SnapshotFormatError(Exception):
    """The snapshot file is corrupt, truncated, or of an unsupported version."""


def load_snapshot(path: str | Path) -> DatasetSnapshot:
    blob = Path(path).read_bytes()
    if not blob.startswith(SNAPSHOT_MAGIC):
        raise SnapshotFormatError(f"{path}: not a snapshot file")
    rest = blob[len(SNAPSHOT_MAGIC) :]
    if not rest or rest[0] != SNAPSHOT_VERSION:
        found = rest[0] if rest else None
        raise SnapshotFormatError(f"{path}: unsupported snapshot version {found}")
    try:
        _nl1 = rest.index(b"\n")
        digest_end = rest.index(b"\n", _nl1 + 1)
        created_end = rest.index(b"\n", digest_end + 1)
    except ValueError:
        raise SnapshotFormatError(f"{path}: truncated header") from None
    digest = rest[_nl1 + 1 : digest_end].decode("ascii")
    created_at = rest[digest_end + 1 : created_end].decode("ascii")
    try:
        payload = zlib.decompress(rest[created_end + 1 :])
    except zlib.error as exc:
        raise SnapshotFormatError(f"{path}: corrupt payload: {exc}") from None
    if hashlib.sha256(payload).hexdigest() != digest:
        raise SnapshotFormatError(f"{path}: digest mismatch; file corrupted")
    data = json.loads(payload)
    if data.get("version") != SNAPSHOT_VERSION:
        raise SnapshotFormatError(f"{path}: payload version mismatch")
    return _snapshot_from_payload(data, digest=digest, created_at=created_at)


def _split_pair(key: str) -> tuple[str, str]:
    origin, _, dest = key.partition("|")
    return origin, dest


def _snapshot_from_payload(data: dict, *, digest: str, created_at: str) -> DatasetSnapshot:
    from .geo import HaulCategory

    cities = tuple(
        CityRecord(
            id=c["id"], name=c["name"], country=c["country"],
            lat=c["lat"], lon=c["lon"], population=c["population"],
            airports=tuple(c["airports"]),
        )
        for c in data["cities"]
    )
    routes = {
        _split_pair(key): tuple(
            RouteRecord(
                origin=_split_pair(key)[0],
                dest=_split_pair(key)[1],
                mode=TransportMode.parse(r["mode"]),
                distance_km=r["distance_km"],
                duration_h=r["duration_h"],
                carrier=r["carrier"],
                fuel_liters=r["fuel_liters"],
                source=r["source"],
            )
            for r in records
        )
        for key, records in data["routes"].items()
    }
    avc = {
        city_id: MonthlyVisitorSeries(city_id=city_id, counts=tuple(counts))
        for city_id, counts in data["avc"].items()
    }
    adr = {
        city_id: DailyRateSeries(
            city_id=city_id,
            rates={dt.date.fromisoformat(day): rate for day, rate in rates.items()},
        )
        for city_id, rates in data["adr"].items()
    }
    popularity_raw = {
        city_id: PopularityRaw(
            city_id=city_id,
            poi_count=raw["poi_count"],
            ugc_count=raw["ugc_count"],
            attraction_reviews=raw["attraction_reviews"],
            attraction_photos=raw["attraction_photos"],
            gt_index=raw["gt_index"],
        )
        for city_id, raw in data["popularity"].items()
    }
    ct = data["cost_tables"]
    cost_tables = CostTables(
        airline_eur_per_km={
            code: AirlineRate(domestic=r["domestic"], international=r["international"])
            for code, r in ct["airline_eur_per_km"].items()
        },
        train_eur_per_km=ct["train_eur_per_km"],
        fuel_eur_per_km_by_country=ct["fuel_eur_per_km_by_country"],
    )
    f = data["factors"]
    factors = EmissionFactors(
        flight_g_per_km={HaulCategory[h.upper()]: v for h, v in f["flight_g_per_km"].items()},
        drive_g_per_km=f["drive_g_per_km"],
        train_g_per_km=f["train_g_per_km"],
        fuel_kg_per_liter=f["fuel_kg_per_liter"],
        flight_distance_correction=f["flight_distance_correction"],
    )
    weights = WeightConfig(
        tradeoff=tuple(data["weights"]["tradeoff"]),
        popularity=tuple(data["weights"]["popularity"]),
        seasonality=tuple(data["weights"]["seasonality"]),
        composite=tuple(data["weights"]["composite"]),
    )
    window = None
    if data["window"]:
        window = (dt.date.fromisoformat(data["window"][0]), dt.date.fromisoformat(data["window"][1]))
    components = {
        city_id: PopularityComponents(poi=c["poi"], ugc=c["ugc"], trends=c["trends"])
        for city_id, c in data["indices"]["components"].items()
    }
    seasonal = {
        city_id: SeasonalitySet(
            city_id=city_id,
            visitor_gini=s["visitor_gini"],
            rate_gini_by_month=tuple(s["rate_gini_by_month"]),
            index_by_month=tuple(s["index_by_month"]),
        )
        for city_id, s in data["indices"]["seasonal"].items()
    }
    pair_options = {}
    pair_breakdowns = {}
    for key, entry in data["indices"]["tradeoffs"].items():
        pair = _split_pair(key)
        pair_options[pair] = tuple(
            TripOption(
                mode=TransportMode.parse(o["mode"]),
                distance_km=o["distance_km"],
                travel_time_h=o["travel_time_h"],
                emissions_kg=o["emissions_kg"],
                cost_eur=o["cost_eur"],
                carrier=o["carrier"],
            )
            for o in entry["options"]
        )
        pair_breakdowns[pair] = TradeoffBreakdown(
            scores=tuple(
                ModeScore(
                    mode=TransportMode.parse(s["mode"]),
                    time_norm=s["time_norm"],
                    emissions_norm=s["emissions_norm"],
                    cost_norm=s["cost_norm"],
                    weighted=s["weighted"],
                )
                for s in entry["scores"]
            ),
            index=entry["index"],
            best_mode=TransportMode.parse(entry["best_mode"]),
        )
    return DatasetSnapshot(
        corpus_size=data["corpus_size"],
        cities=cities,
        routes=routes,
        avc=avc,
        adr=adr,
        popularity_raw=popularity_raw,
        cost_tables=cost_tables,
        factors=factors,
        weights=weights,
        window=window,
        components=components,
        seasonal=seasonal,
        pair_options=pair_options,
        pair_breakdowns=pair_breakdowns,
        digest=digest,
        created_at=created_at,
    )
