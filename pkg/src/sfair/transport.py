"""Per-mode emission and cost models and the cross-mode trade-off index.

The trade-off index for a city pair min-max normalizes travel time, CO2e and
cost across the modes that can actually serve the pair, weights them, and
keeps the best (lowest) per-mode score.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from typing import Mapping, Sequence

from .geo import (
    FLIGHT_DISTANCE_CORRECTION,
    HaulCategory,
    corrected_flight_km,
    haul_category,
)
from .numerics import min_max_normalize

MAX_DRIVE_KM = 1000.0

# Index-level weighted sums take weight groups as given (no renormalization);
# the published trade-off group sums to 1.001, hence the loose tolerance.
INDEX_WEIGHT_TOLERANCE = 2e-3

DEFAULT_TRAIN_EUR_PER_KM = 0.14


class TransportMode(IntEnum):
    """Modes between two cities; enum order breaks best-mode ties."""

    FLIGHT = 0
    DRIVE = 1
    TRAIN = 2

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, text: str) -> "TransportMode":
        try:
            return cls[text.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown transport mode: {text!r}") from None


class MissingRateError(LookupError):
    """No cost rate is configured for this carrier or country."""


DEFAULT_FLIGHT_G_PER_KM: dict[HaulCategory, float] = {
    HaulCategory.VERY_SHORT: 155.0,
    HaulCategory.SHORT: 110.0,
    HaulCategory.MEDIUM: 75.0,
    HaulCategory.LONG: 95.0,
}


@dataclass(frozen=True)
class EmissionFactors:
    """CO2e factors per mode; defaults are the published per-km values."""

    flight_g_per_km: Mapping[HaulCategory, float] = field(
        default_factory=lambda: dict(DEFAULT_FLIGHT_G_PER_KM)
    )
    drive_g_per_km: float = 96.0
    train_g_per_km: float = 24.0
    fuel_kg_per_liter: float = 2.3
    flight_distance_correction: float = FLIGHT_DISTANCE_CORRECTION

    def __post_init__(self) -> None:
        for category in HaulCategory:
            if self.flight_g_per_km.get(category, 0) <= 0:
                raise ValueError(f"missing or nonpositive flight factor for {category.label}")
        for name in ("drive_g_per_km", "train_g_per_km", "fuel_kg_per_liter", "flight_distance_correction"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    def to_dict(self) -> dict:
        return {
            "flight_g_per_km": {c.label: self.flight_g_per_km[c] for c in HaulCategory},
            "drive_g_per_km": self.drive_g_per_km,
            "train_g_per_km": self.train_g_per_km,
            "fuel_kg_per_liter": self.fuel_kg_per_liter,
            "flight_distance_correction": self.flight_distance_correction,
        }


@dataclass(frozen=True)
class AirlineRate:
    domestic: float
    international: float

    def __post_init__(self) -> None:
        if self.domestic <= 0 or self.international <= 0:
            raise ValueError("airline rates must be positive")


@dataclass(frozen=True)
class CostTables:
    """Per-km price estimates: airline rates, a flat train rate, per-country fuel."""

    airline_eur_per_km: Mapping[str, AirlineRate] = field(default_factory=dict)
    train_eur_per_km: float = DEFAULT_TRAIN_EUR_PER_KM
    fuel_eur_per_km_by_country: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.train_eur_per_km <= 0:
            raise ValueError("train rate must be positive")
        for country, rate in self.fuel_eur_per_km_by_country.items():
            if rate <= 0:
                raise ValueError(f"fuel rate for {country} must be positive")


@dataclass(frozen=True)
class TripOption:
    """One way of serving a city pair, with its raw trade-off ingredients."""

    mode: TransportMode
    distance_km: float
    travel_time_h: float
    emissions_kg: float
    cost_eur: float
    carrier: str | None = None

    def __post_init__(self) -> None:
        if self.distance_km <= 0 or self.travel_time_h <= 0:
            raise ValueError("trip distance and duration must be positive")
        if self.emissions_kg < 0 or self.cost_eur < 0:
            raise ValueError("trip emissions and cost must be nonnegative")


@dataclass(frozen=True)
class RouteRecord:
    """One observed connection between two cities, as ingested."""

    origin: str
    dest: str
    mode: TransportMode
    distance_km: float
    duration_h: float
    carrier: str | None = None
    fuel_liters: float | None = None
    source: str = ""

    def __post_init__(self) -> None:
        if self.distance_km <= 0 or self.duration_h <= 0:
            raise ValueError("route distance and duration must be positive")


@dataclass(frozen=True)
class ModeScore:
    """Normalized (time, emissions, cost) triple and weighted score for one mode."""

    mode: TransportMode
    time_norm: float
    emissions_norm: float
    cost_norm: float
    weighted: float


@dataclass(frozen=True)
class TradeoffBreakdown:
    """Per-mode scores plus the city-level index (minimum weighted score)."""

    scores: tuple[ModeScore, ...]
    index: float
    best_mode: TransportMode


def flight_emissions_kg(gcd_km: float, factors: EmissionFactors | None = None) -> float:
    """Haul-dependent factor times the corrected flight distance, in kg."""
    if gcd_km <= 0:
        raise ValueError(f"flight distance must be positive, got {gcd_km}")
    factors = factors or EmissionFactors()
    per_km = factors.flight_g_per_km[haul_category(gcd_km)]
    flown = corrected_flight_km(gcd_km, factors.flight_distance_correction)
    return per_km * flown / 1000.0


def drive_emissions_kg(distance_km: float, factors: EmissionFactors | None = None) -> float:
    if distance_km <= 0:
        raise ValueError(f"drive distance must be positive, got {distance_km}")
    factors = factors or EmissionFactors()
    return factors.drive_g_per_km * distance_km / 1000.0


def drive_emissions_from_fuel_kg(liters: float, factors: EmissionFactors | None = None) -> float:
    if liters <= 0:
        raise ValueError(f"fuel volume must be positive, got {liters}")
    factors = factors or EmissionFactors()
    return factors.fuel_kg_per_liter * liters


def train_emissions_kg(distance_km: float, factors: EmissionFactors | None = None) -> float:
    if distance_km <= 0:
        raise ValueError(f"train distance must be positive, got {distance_km}")
    factors = factors or EmissionFactors()
    return factors.train_g_per_km * distance_km / 1000.0


def _single_carrier(carrier: str | None) -> str | None:
    """Carrier code if the cell names exactly one airline, else None."""
    if carrier is None:
        return None
    parts = [p for p in carrier.replace(",", "+").split("+") if p.strip()]
    if len({p.strip() for p in parts}) != 1:
        return None
    return parts[0].strip()


def trip_cost_eur(
    mode: TransportMode,
    distance_km: float,
    origin_country: str | None = None,
    carrier: str | None = None,
    domestic: bool = False,
    tables: CostTables | None = None,
    correction: float = FLIGHT_DISTANCE_CORRECTION,
) -> float:
    """Estimated ticket/fuel cost in euros for one trip.

    Flight costs are per-airline per-km rates applied to the corrected
    distance; itineraries without a single identifiable carrier have no
    computable cost. Drive costs use the origin country's fuel rate.
    """
    if distance_km <= 0:
        raise ValueError(f"distance must be positive, got {distance_km}")
    tables = tables or CostTables()
    if mode is TransportMode.TRAIN:
        return tables.train_eur_per_km * distance_km
    if mode is TransportMode.DRIVE:
        if origin_country is None or origin_country not in tables.fuel_eur_per_km_by_country:
            raise MissingRateError(f"no fuel rate for country {origin_country!r}")
        return tables.fuel_eur_per_km_by_country[origin_country] * distance_km
    code = _single_carrier(carrier)
    if code is None:
        raise MissingRateError(f"no single carrier for flight costing: {carrier!r}")
    rate = tables.airline_eur_per_km.get(code)
    if rate is None:
        raise MissingRateError(f"no rate for carrier {code!r}")
    per_km = rate.domestic if domestic else rate.international
    return per_km * corrected_flight_km(distance_km, correction)


def feasible_options(
    routes: Sequence[RouteRecord],
    *,
    origin_country: str,
    dest_country: str,
    origin_has_airport: bool = True,
    dest_has_airport: bool = True,
    tables: CostTables | None = None,
    factors: EmissionFactors | None = None,
) -> tuple[TripOption, ...]:
    """The trip options a pair's route records actually support.

    Driving over 1000 km is not viable; trains exist only where a rail record
    does; flights need an airport at both ends. Options whose cost cannot be
    estimated are dropped. An empty result means the pair is unreachable.
    """
    tables = tables or CostTables()
    factors = factors or EmissionFactors()
    by_mode: dict[TransportMode, list[RouteRecord]] = {}
    for record in routes:
        by_mode.setdefault(record.mode, []).append(record)

    options: list[TripOption] = []
    for mode in TransportMode:
        candidates = by_mode.get(mode, [])
        if mode is TransportMode.DRIVE:
            candidates = [r for r in candidates if r.distance_km <= MAX_DRIVE_KM]
        if mode is TransportMode.FLIGHT and not (origin_has_airport and dest_has_airport):
            continue
        if not candidates:
            continue
        record = min(
            candidates,
            key=lambda r: (r.distance_km, r.duration_h, r.carrier or "", r.source),
        )
        if mode is TransportMode.FLIGHT:
            emissions = flight_emissions_kg(record.distance_km, factors)
        elif mode is TransportMode.DRIVE:
            emissions = drive_emissions_kg(record.distance_km, factors)
        else:
            emissions = train_emissions_kg(record.distance_km, factors)
        try:
            cost = trip_cost_eur(
                mode,
                record.distance_km,
                origin_country=origin_country,
                carrier=record.carrier,
                domestic=origin_country == dest_country,
                tables=tables,
                correction=factors.flight_distance_correction,
            )
        except MissingRateError:
            continue
        options.append(
            TripOption(
                mode=mode,
                distance_km=record.distance_km,
                travel_time_h=record.duration_h,
                emissions_kg=emissions,
                cost_eur=cost,
                carrier=record.carrier,
            )
        )
    return tuple(options)


def emissions_tradeoff_index(
    options: Sequence[TripOption], weights: Sequence[float]
) -> TradeoffBreakdown:
    """Weighted min-max trade-off across a pair's options; index = best mode's score.

    Weights are (time, emissions, cost), used exactly as given. A single
    option normalizes to all zeros, so its index is 0.
    """
    if not options:
        raise ValueError("trade-off index needs at least one trip option")
    if len(weights) != 3 or any(w < 0 for w in weights):
        raise ValueError(f"need three nonnegative weights, got {weights}")
    if abs(sum(weights) - 1.0) > INDEX_WEIGHT_TOLERANCE:
        raise ValueError(f"trade-off weights must sum to 1 (got {sum(weights)!r})")
    w_time, w_em, w_cost = weights
    ordered = sorted(options, key=lambda o: o.mode)
    times = [o.travel_time_h for o in ordered]
    emissions = [o.emissions_kg for o in ordered]
    costs = [o.cost_eur for o in ordered]
    scores = []
    for option in ordered:
        t = min_max_normalize(times, option.travel_time_h)
        e = min_max_normalize(emissions, option.emissions_kg)
        c = min_max_normalize(costs, option.cost_eur)
        weighted = w_time * t + w_em * e + w_cost * c
        scores.append(
            ModeScore(
                mode=option.mode,
                time_norm=t,
                emissions_norm=e,
                cost_norm=c,
                weighted=weighted,
            )
        )
    best = min(scores, key=lambda s: (s.weighted, s.mode))
    return TradeoffBreakdown(scores=tuple(scores), index=best.weighted, best_mode=best.mode)
