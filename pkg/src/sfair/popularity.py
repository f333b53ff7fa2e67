"""Popularity index from attraction counts, user-generated content, and search trends."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Mapping, Sequence

from .numerics import CorrelationResult, correlation_significance, min_max_normalize, pearson

log = logging.getLogger(__name__)

INDEX_WEIGHT_TOLERANCE = 2e-3

_UGC_FIELDS = ("ugc_count", "attraction_reviews", "attraction_photos")


@dataclass(frozen=True)
class PopularityRaw:
    """Raw popularity signals for one city.

    `ugc_count` is the combined reviews-and-opinions total, the proxy for all
    user-generated content; the per-kind counts feed diagnostics only.
    `gt_index` is the annualized search-trends value, absent when the city has
    no trends data.
    """

    city_id: str
    poi_count: int
    ugc_count: int
    attraction_reviews: int = 0
    attraction_photos: int = 0
    gt_index: float | None = None

    def __post_init__(self) -> None:
        for name in ("poi_count", "ugc_count", "attraction_reviews", "attraction_photos"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative for {self.city_id}")
        if self.gt_index is not None and not 0.0 <= self.gt_index <= 100.0:
            raise ValueError(f"gt_index out of range [0, 100] for {self.city_id}: {self.gt_index}")


@dataclass(frozen=True)
class PopularityComponents:
    """Corpus-normalized component values, each in [0, 1]; trends may be absent."""

    poi: float
    ugc: float
    trends: float | None


def normalize_components(corpus: Sequence[PopularityRaw]) -> dict[str, PopularityComponents]:
    """Min-max normalize each component across the whole corpus.

    Trends normalization spans only the cities that have a trends value;
    the rest keep an absent component.
    """
    if not corpus:
        raise ValueError("cannot normalize an empty popularity corpus")
    pois = [float(c.poi_count) for c in corpus]
    ugcs = [float(c.ugc_count) for c in corpus]
    trends = [c.gt_index for c in corpus if c.gt_index is not None]
    out: dict[str, PopularityComponents] = {}
    for c in corpus:
        gt = min_max_normalize(trends, c.gt_index) if c.gt_index is not None else None
        out[c.city_id] = PopularityComponents(
            poi=min_max_normalize(pois, float(c.poi_count)),
            ugc=min_max_normalize(ugcs, float(c.ugc_count)),
            trends=gt,
        )
    return out


def popularity_index(components: PopularityComponents, weights: Sequence[float]) -> float:
    """Weighted sum of the normalized components.

    Weights are (poi, ugc, trends), used as given. When the trends component
    is absent, the poi/ugc weights are renormalized over their own sum.
    """
    if len(weights) != 3 or any(w < 0 for w in weights):
        raise ValueError(f"need three nonnegative weights, got {weights}")
    if abs(sum(weights) - 1.0) > INDEX_WEIGHT_TOLERANCE:
        raise ValueError(f"popularity weights must sum to 1 (got {sum(weights)!r})")
    w_poi, w_ugc, w_gt = weights
    if components.trends is None:
        present = w_poi + w_ugc
        if present <= 0:
            raise ValueError("all weight mass sits on the absent trends component")
        return (w_poi / present) * components.poi + (w_ugc / present) * components.ugc
    return w_poi * components.poi + w_ugc * components.ugc + w_gt * components.trends


def ugc_proxy_check(
    corpus: Sequence[PopularityRaw],
) -> dict[tuple[str, str], CorrelationResult] | None:
    """Pairwise correlation among the UGC signals, as a diagnostics artifact.

    Returns None (with a warning) when fewer than 3 cities carry all three
    counts; never gates index computation.
    """
    rows = [c for c in corpus if all(getattr(c, f) >= 0 for f in _UGC_FIELDS)]
    if len(rows) < 3:
        log.warning("ugc proxy diagnostics skipped: only %d usable cities", len(rows))
        return None
    series = {f: [float(getattr(c, f)) for c in rows] for f in _UGC_FIELDS}
    results: dict[tuple[str, str], CorrelationResult] = {}
    for i, a in enumerate(_UGC_FIELDS):
        for b in _UGC_FIELDS[i + 1 :]:
            try:
                r = pearson(series[a], series[b])
            except ValueError as exc:
                log.warning("ugc proxy diagnostics skipped for (%s, %s): %s", a, b, exc)
                continue
            results[(a, b)] = correlation_significance(r, len(rows))
    return results or None
