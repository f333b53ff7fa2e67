"""Seasonal demand: visitor-count and daily-rate Ginis and their weighted index."""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass
from typing import Mapping, Sequence

from .numerics import CorrelationResult, correlation_significance, gini, pearson

MONTHS = tuple(range(1, 13))

INDEX_WEIGHT_TOLERANCE = 2e-3

# Monthly rate Ginis need at least this many priced days to be meaningful.
MIN_DAYS_PER_MONTH = 2


@dataclass(frozen=True)
class MonthlyVisitorSeries:
    """Twelve monthly arrival counts for one city, January first."""

    city_id: str
    counts: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.counts) != 12:
            raise ValueError(f"{self.city_id}: need 12 monthly counts, got {len(self.counts)}")
        if any(c < 0 for c in self.counts):
            raise ValueError(f"{self.city_id}: visitor counts must be nonnegative")


@dataclass(frozen=True)
class DailyRateSeries:
    """City-level mean nightly price per calendar date."""

    city_id: str
    rates: Mapping[dt.date, float]

    def month_values(self, month: int) -> list[float]:
        if month not in MONTHS:
            raise ValueError(f"month out of range 1..12: {month}")
        return [rate for day, rate in sorted(self.rates.items()) if day.month == month]


@dataclass(frozen=True)
class SeasonalitySet:
    """Everything seasonal we know about one city; None marks absent pieces."""

    city_id: str
    visitor_gini: float | None
    rate_gini_by_month: tuple[float | None, ...]
    index_by_month: tuple[float | None, ...]


def gini_avc(series: MonthlyVisitorSeries) -> float:
    """Annual Gini over the twelve monthly visitor counts."""
    if sum(series.counts) <= 0:
        raise ValueError(f"{series.city_id}: visitor gini undefined for a zero-total year")
    return gini(series.counts)


def gini_adr_month(series: DailyRateSeries, month: int) -> float | None:
    """Gini over one month's daily rates; None when too few days have prices."""
    values = series.month_values(month)
    if len(values) < MIN_DAYS_PER_MONTH:
        return None
    return gini(values)


def seasonality_index(
    g_avc: float | None, g_adr: float | None, weights: Sequence[float]
) -> float:
    """Weighted combination of the visitor and rate Ginis.

    Weights are (visitors, rates), used as given. A single absent component
    shifts its weight onto the present one; both absent is unscoreable.
    """
    if len(weights) != 2 or any(w < 0 for w in weights):
        raise ValueError(f"need two nonnegative weights, got {weights}")
    if abs(sum(weights) - 1.0) > INDEX_WEIGHT_TOLERANCE:
        raise ValueError(f"seasonality weights must sum to 1 (got {sum(weights)!r})")
    w_avc, w_adr = weights
    if g_avc is None and g_adr is None:
        raise ValueError("seasonality index needs at least one gini component")
    if g_adr is None or g_avc is None:
        # Renormalizing one present component always yields weight 1.
        present_weight = w_avc if g_adr is None else w_adr
        if present_weight <= 0:
            raise ValueError("all weight mass sits on an absent component")
        return g_avc if g_adr is None else g_adr
    return w_avc * g_avc + w_adr * g_adr


def seasonal_profile(
    city_id: str,
    avc: MonthlyVisitorSeries | None,
    adr: DailyRateSeries | None,
    weights: Sequence[float],
) -> SeasonalitySet:
    """Assemble the full per-city seasonal picture for all twelve months."""
    g_avc: float | None = None
    if avc is not None and sum(avc.counts) > 0:
        g_avc = gini_avc(avc)
    rate_ginis: list[float | None] = []
    indices: list[float | None] = []
    for month in MONTHS:
        g_adr = gini_adr_month(adr, month) if adr is not None else None
        rate_ginis.append(g_adr)
        if g_avc is None and g_adr is None:
            indices.append(None)
        else:
            indices.append(seasonality_index(g_avc, g_adr, weights))
    return SeasonalitySet(
        city_id=city_id,
        visitor_gini=g_avc,
        rate_gini_by_month=tuple(rate_ginis),
        index_by_month=tuple(indices),
    )


def adr_avc_diagnostics(
    avc: MonthlyVisitorSeries, adr_monthly_means: Sequence[float]
) -> CorrelationResult:
    """Correlation between monthly visitor counts and monthly mean daily rates."""
    if len(adr_monthly_means) != 12:
        raise ValueError(f"need 12 monthly rate means, got {len(adr_monthly_means)}")
    r = pearson(list(avc.counts), list(adr_monthly_means))
    return correlation_significance(r, 12)
