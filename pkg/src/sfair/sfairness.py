"""Composite sustainability indicator, display scores, labels, and ranking.

The composite weighs the trade-off, popularity, and seasonality indices into
a single [0, 1] value per destination and month; lower means a fairer choice
from the traveler's origin, so recommendations sort ascending.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Mapping, Sequence

from .popularity import popularity_index
from .seasonality import seasonality_index
from .transport import TradeoffBreakdown, TransportMode, TripOption, emissions_tradeoff_index
from .weights import WeightConfig

if TYPE_CHECKING:
    from .ingest import CityRecord, DatasetSnapshot

INDEX_WEIGHT_TOLERANCE = 2e-3

HIGH_PERCENTILE = 95.0
MEDIUM_PERCENTILE = 50.0

SORT_KEYS = ("sfairness", "tradeoff", "popularity", "seasonality")


class UnknownCityError(KeyError):
    """The requested city id is not in the snapshot corpus."""


class Label(str, Enum):
    HIGH = "high"
    MEDIUM = "medium"
    LOW = "low"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


def s_fairness(
    tradeoff: float, popularity: float, seasonality: float, weights: Sequence[float]
) -> float:
    """Weighted composite of the three indices; higher = more adverse impact."""
    if len(weights) != 3 or any(w < 0 for w in weights):
        raise ValueError(f"need three nonnegative weights, got {weights}")
    if abs(sum(weights) - 1.0) > INDEX_WEIGHT_TOLERANCE:
        raise ValueError(f"composite weights must sum to 1 (got {sum(weights)!r})")
    for name, value in (
        ("tradeoff", tradeoff),
        ("popularity", popularity),
        ("seasonality", seasonality),
    ):
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"{name} component out of range [0, 1]: {value}")
    w_z, w_p, w_s = weights
    return w_z * tradeoff + w_p * popularity + w_s * seasonality


def display_score(value: float) -> int:
    """Composite value as an integer score out of 100, rounded half away from zero."""
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"composite value out of range [0, 1]: {value}")
    return int(math.floor(value * 100.0 + 0.5))


def _nearest_rank_threshold(descending: Sequence[float], percent: float) -> float:
    """Smallest value inside the top `percent` block of a descending corpus."""
    k = max(1, math.ceil(percent / 100.0 * len(descending)))
    return descending[k - 1]


def percentile_labels(values: Mapping[str, float]) -> dict[str, Label]:
    """High for the top 5% of index values, medium for the top half, low below.

    Thresholds use nearest-rank on the descending corpus, so ties at a
    threshold all land in the better bucket; an all-equal corpus is all high.
    """
    if not values:
        raise ValueError("cannot label an empty corpus")
    descending = sorted(values.values(), reverse=True)
    high_cut = _nearest_rank_threshold(descending, 100.0 - HIGH_PERCENTILE)
    medium_cut = _nearest_rank_threshold(descending, 100.0 - MEDIUM_PERCENTILE)
    labels: dict[str, Label] = {}
    for city_id, value in values.items():
        if value >= high_cut:
            labels[city_id] = Label.HIGH
        elif value >= medium_cut:
            labels[city_id] = Label.MEDIUM
        else:
            labels[city_id] = Label.LOW
    return labels


@dataclass(frozen=True)
class ModeSummary:
    """Raw and normalized trade-off figures for one available mode."""

    mode: TransportMode
    distance_km: float
    duration_h: float
    emissions_kg: float
    cost_eur: float
    carrier: str | None
    time_norm: float
    emissions_norm: float
    cost_norm: float
    weighted: float

    def to_dict(self) -> dict:
        return {
            "mode": self.mode.label,
            "distance_km": self.distance_km,
            "duration_h": self.duration_h,
            "emissions_kg": self.emissions_kg,
            "cost_eur": self.cost_eur,
            "carrier": self.carrier,
            "time_norm": self.time_norm,
            "emissions_norm": self.emissions_norm,
            "cost_norm": self.cost_norm,
            "weighted": self.weighted,
        }


@dataclass(frozen=True)
class Recommendation:
    rank: int
    city: "CityRecord"
    sfairness: float
    score: int
    tradeoff: float
    popularity: float
    seasonality: float
    popularity_label: Label
    seasonality_label: Label
    best_mode: TransportMode
    modes: tuple[ModeSummary, ...]

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "city": {
                "id": self.city.id,
                "name": self.city.name,
                "country": self.city.country,
                "lat": self.city.lat,
                "lon": self.city.lon,
                "population": self.city.population,
            },
            "sfairness": self.sfairness,
            "score": self.score,
            "tradeoff": self.tradeoff,
            "popularity": self.popularity,
            "seasonality": self.seasonality,
            "popularity_label": self.popularity_label.value,
            "seasonality_label": self.seasonality_label.value,
            "best_mode": self.best_mode.label,
            "modes": [m.to_dict() for m in self.modes],
        }


def _mode_summaries(options: Sequence[TripOption], breakdown: TradeoffBreakdown) -> tuple[ModeSummary, ...]:
    by_mode = {o.mode: o for o in options}
    summaries = []
    for score in breakdown.scores:
        option = by_mode[score.mode]
        summaries.append(
            ModeSummary(
                mode=score.mode,
                distance_km=option.distance_km,
                duration_h=option.travel_time_h,
                emissions_kg=option.emissions_kg,
                cost_eur=option.cost_eur,
                carrier=option.carrier,
                time_norm=score.time_norm,
                emissions_norm=score.emissions_norm,
                cost_norm=score.cost_norm,
                weighted=score.weighted,
            )
        )
    return tuple(summaries)


def rank_destinations(
    snapshot: "DatasetSnapshot",
    origin_id: str,
    month: int,
    *,
    weights: WeightConfig | None = None,
    sort_key: str = "sfairness",
    country: str | None = None,
    max_score: float | None = None,
    popularity_label: Label | None = None,
    seasonality_label: Label | None = None,
    require_mode: TransportMode | None = None,
    limit: int | None = None,
) -> list[Recommendation]:
    """Ranked recommendations for one origin and month.

    Every scoreable destination (reachable, with popularity and this-month
    seasonality) gets a composite value; the list sorts ascending on the
    chosen key, ties broken by city name then id. Filters apply before ranks
    are assigned, so ranks are always contiguous from 1.
    """
    if month not in range(1, 13):
        raise ValueError(f"month out of range 1..12: {month}")
    if sort_key not in SORT_KEYS:
        raise ValueError(f"unknown sort key {sort_key!r}; expected one of {SORT_KEYS}")
    if origin_id not in snapshot.city_index:
        raise UnknownCityError(origin_id)
    weights = weights or snapshot.weights

    rho_by_city = {
        city_id: popularity_index(components, weights.popularity)
        for city_id, components in snapshot.components.items()
    }
    sigma_by_city: dict[str, float] = {}
    for city_id, seasonal in snapshot.seasonal.items():
        g_adr = seasonal.rate_gini_by_month[month - 1]
        if seasonal.visitor_gini is None and g_adr is None:
            continue
        sigma_by_city[city_id] = seasonality_index(
            seasonal.visitor_gini, g_adr, weights.seasonality
        )
    pop_labels = percentile_labels(rho_by_city) if rho_by_city else {}
    season_labels = percentile_labels(sigma_by_city) if sigma_by_city else {}

    scored = []
    for city in snapshot.cities:
        if city.id == origin_id:
            continue
        options = snapshot.pair_options.get((origin_id, city.id))
        if not options:
            continue
        rho = rho_by_city.get(city.id)
        sigma = sigma_by_city.get(city.id)
        if rho is None or sigma is None:
            continue
        breakdown = emissions_tradeoff_index(options, weights.tradeoff)
        psi = s_fairness(breakdown.index, rho, sigma, weights.composite)
        scored.append((city, breakdown, rho, sigma, psi))

    key_of = {
        "sfairness": lambda row: row[4],
        "tradeoff": lambda row: row[1].index,
        "popularity": lambda row: row[2],
        "seasonality": lambda row: row[3],
    }[sort_key]
    scored.sort(key=lambda row: (key_of(row), row[0].name, row[0].id))

    recommendations: list[Recommendation] = []
    for city, breakdown, rho, sigma, psi in scored:
        p_label = pop_labels[city.id]
        s_label = season_labels[city.id]
        if country is not None and city.country != country:
            continue
        if max_score is not None and psi > max_score:
            continue
        if popularity_label is not None and p_label is not popularity_label:
            continue
        if seasonality_label is not None and s_label is not seasonality_label:
            continue
        if require_mode is not None and all(s.mode is not require_mode for s in breakdown.scores):
            continue
        recommendations.append(
            Recommendation(
                rank=len(recommendations) + 1,
                city=city,
                sfairness=psi,
                score=display_score(psi),
                tradeoff=breakdown.index,
                popularity=rho,
                seasonality=sigma,
                popularity_label=p_label,
                seasonality_label=s_label,
                best_mode=breakdown.best_mode,
                modes=_mode_summaries(
                    snapshot.pair_options[(origin_id, city.id)], breakdown
                ),
            )
        )
        if limit is not None and len(recommendations) >= limit:
            break
    return recommendations


@dataclass(frozen=True)
class IndexBundle:
    """Origin-free (and optionally origin-bound) index view of one city."""

    city_id: str
    origin_id: str | None
    popularity: float | None
    visitor_gini: float | None
    rate_gini_by_month: tuple[float | None, ...]
    seasonality_by_month: tuple[float | None, ...]
    tradeoff: float | None
    best_mode: TransportMode | None
    sfairness_by_month: tuple[float | None, ...]
    popularity_label: Label | None
    seasonality_labels_by_month: tuple[Label | None, ...]
    completeness: dict[str, object]

    def to_dict(self) -> dict:
        return {
            "city_id": self.city_id,
            "origin_id": self.origin_id,
            "popularity": self.popularity,
            "visitor_gini": self.visitor_gini,
            "rate_gini_by_month": list(self.rate_gini_by_month),
            "seasonality_by_month": list(self.seasonality_by_month),
            "tradeoff": self.tradeoff,
            "best_mode": self.best_mode.label if self.best_mode else None,
            "sfairness_by_month": list(self.sfairness_by_month),
            "popularity_label": self.popularity_label.value if self.popularity_label else None,
            "seasonality_labels_by_month": [
                label.value if label else None for label in self.seasonality_labels_by_month
            ],
            "completeness": self.completeness,
        }


def city_indices(
    snapshot: "DatasetSnapshot",
    city_id: str,
    *,
    origin_id: str | None = None,
    weights: WeightConfig | None = None,
) -> IndexBundle:
    """Assemble the full index bundle for one city, across all twelve months."""
    if city_id not in snapshot.city_index:
        raise UnknownCityError(city_id)
    if origin_id is not None and origin_id not in snapshot.city_index:
        raise UnknownCityError(origin_id)
    weights = weights or snapshot.weights

    rho_by_city = {
        cid: popularity_index(components, weights.popularity)
        for cid, components in snapshot.components.items()
    }
    rho = rho_by_city.get(city_id)
    pop_labels = percentile_labels(rho_by_city) if rho_by_city else {}

    seasonal = snapshot.seasonal.get(city_id)
    visitor_gini = seasonal.visitor_gini if seasonal else None
    rate_ginis: tuple[float | None, ...] = (
        seasonal.rate_gini_by_month if seasonal else tuple([None] * 12)
    )
    sigma_months: list[float | None] = []
    season_label_months: list[Label | None] = []
    for month in range(1, 13):
        sigma_by_city: dict[str, float] = {}
        for cid, entry in snapshot.seasonal.items():
            g_adr = entry.rate_gini_by_month[month - 1]
            if entry.visitor_gini is None and g_adr is None:
                continue
            sigma_by_city[cid] = seasonality_index(entry.visitor_gini, g_adr, weights.seasonality)
        sigma_months.append(sigma_by_city.get(city_id))
        labels = percentile_labels(sigma_by_city) if sigma_by_city else {}
        season_label_months.append(labels.get(city_id))

    tradeoff_value: float | None = None
    best_mode: TransportMode | None = None
    psi_months: list[float | None] = [None] * 12
    if origin_id is not None:
        options = snapshot.pair_options.get((origin_id, city_id))
        if options:
            breakdown = emissions_tradeoff_index(options, weights.tradeoff)
            tradeoff_value = breakdown.index
            best_mode = breakdown.best_mode
            if rho is not None:
                psi_months = [
                    s_fairness(breakdown.index, rho, sigma, weights.composite)
                    if sigma is not None
                    else None
                    for sigma in sigma_months
                ]

    components = snapshot.components.get(city_id)
    completeness: dict[str, object] = {
        "popularity": rho is not None,
        "trends": bool(components and components.trends is not None),
        "visitor_gini": visitor_gini is not None,
        "rate_gini": [g is not None for g in rate_ginis],
        "tradeoff": tradeoff_value is not None,
    }
    return IndexBundle(
        city_id=city_id,
        origin_id=origin_id,
        popularity=rho,
        visitor_gini=visitor_gini,
        rate_gini_by_month=rate_ginis,
        seasonality_by_month=tuple(sigma_months),
        tradeoff=tradeoff_value,
        best_mode=best_mode,
        sfairness_by_month=tuple(psi_months),
        popularity_label=pop_labels.get(city_id),
        seasonality_labels_by_month=tuple(season_label_months),
        completeness=completeness,
    )
