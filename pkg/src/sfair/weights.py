"""Weight vectors for the index formulas: survey derivation and published defaults."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

# Published coefficients from the user study, stored verbatim (never re-derived).
# The trade-off group sums to 1.001 as published; WeightConfig keeps the
# sum-normalized version so downstream invariants hold to 1e-9.
PUBLISHED_TRADEOFF = (0.352, 0.218, 0.431)  # travel time, emissions, cost
PUBLISHED_POPULARITY = (0.469, 0.325, 0.206)  # poi, ugc, search trends
PUBLISHED_SEASONALITY = (0.443, 0.557)  # visitor-count gini, daily-rate gini
PUBLISHED_COMPOSITE = (0.281, 0.334, 0.385)  # tradeoff, popularity, seasonality

# Survey columns, grouped by the index whose weights they drive.
SURVEY_FACTORS: dict[str, tuple[str, ...]] = {
    "tradeoff": ("travel_time", "emissions", "cost"),
    "popularity": ("poi", "ugc", "trends"),
    "seasonality": ("visitors", "rates"),
    "composite": ("tradeoff", "popularity", "seasonality"),
}

LIKERT_MIN = 1
LIKERT_MAX = 5

# Tolerance for user-supplied weight groups (config files, API overrides).
WEIGHT_SUM_TOLERANCE = 1e-6


class WeightError(ValueError):
    """A weight group violates its contract (negative entry, bad sum, wrong size)."""


def _check_group(name: str, group: Sequence[float], size: int, tol: float) -> None:
    if len(group) != size:
        raise WeightError(f"{name} weights need {size} entries, got {len(group)}")
    if any(w < 0 for w in group):
        raise WeightError(f"{name} weights must be nonnegative: {group}")
    total = sum(group)
    if abs(total - 1.0) > tol:
        raise WeightError(f"{name} weights must sum to 1 (got {total!r})")


@dataclass(frozen=True)
class WeightConfig:
    """One normalized weight group per index formula; each sums to 1 within 1e-9."""

    tradeoff: tuple[float, float, float]
    popularity: tuple[float, float, float]
    seasonality: tuple[float, float]
    composite: tuple[float, float, float]

    def __post_init__(self) -> None:
        _check_group("tradeoff", self.tradeoff, 3, 1e-9)
        _check_group("popularity", self.popularity, 3, 1e-9)
        _check_group("seasonality", self.seasonality, 2, 1e-9)
        _check_group("composite", self.composite, 3, 1e-9)

    def to_dict(self) -> dict[str, list[float]]:
        return {
            "tradeoff": list(self.tradeoff),
            "popularity": list(self.popularity),
            "seasonality": list(self.seasonality),
            "composite": list(self.composite),
        }


def likert_mean(scores: Sequence[int]) -> float:
    """Arithmetic mean of 1..5 Likert scores for one factor."""
    if not scores:
        raise WeightError("likert mean needs at least one score")
    for s in scores:
        if not LIKERT_MIN <= s <= LIKERT_MAX:
            raise WeightError(f"likert score out of range 1..5: {s}")
    return sum(scores) / len(scores)


def normalize_group(raw: Sequence[float]) -> tuple[float, ...]:
    """Scale raw factor averages so the group sums to 1."""
    if len(raw) < 2:
        raise WeightError(f"a weight group needs at least 2 factors, got {len(raw)}")
    if any(a < 0 for a in raw):
        raise WeightError(f"raw averages must be nonnegative: {raw}")
    total = sum(raw)
    if total <= 0:
        raise WeightError("cannot normalize a zero-sum group")
    return tuple(a / total for a in raw)


def default_weights() -> WeightConfig:
    """The published coefficient groups, sum-normalized for storage."""
    return WeightConfig(
        tradeoff=normalize_group(PUBLISHED_TRADEOFF),  # type: ignore[arg-type]
        popularity=normalize_group(PUBLISHED_POPULARITY),  # type: ignore[arg-type]
        seasonality=normalize_group(PUBLISHED_SEASONALITY),  # type: ignore[arg-type]
        composite=normalize_group(PUBLISHED_COMPOSITE),  # type: ignore[arg-type]
    )


def parse_survey_csv(path: str | Path) -> dict[str, list[int]]:
    """Read a survey file: one row per respondent, one integer column per factor.

    Returns scores keyed by factor id. Out-of-range or non-integer cells are
    rejected with their line number.
    """
    expected = [f for group in SURVEY_FACTORS.values() for f in group]
    scores: dict[str, list[int]] = {f: [] for f in expected}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [f for f in expected if f not in header]
        if missing:
            raise WeightError(f"survey file missing factor columns: {', '.join(missing)}")
        for row in reader:
            for factor in expected:
                cell = (row.get(factor) or "").strip()
                try:
                    value = int(cell)
                except ValueError:
                    raise WeightError(
                        f"{path}:{reader.line_num}: non-integer likert score "
                        f"for {factor}: {cell!r}"
                    ) from None
                if not LIKERT_MIN <= value <= LIKERT_MAX:
                    raise WeightError(
                        f"{path}:{reader.line_num}: likert score out of range 1..5 "
                        f"for {factor}: {value}"
                    )
                scores[factor].append(value)
    for factor, values in scores.items():
        if not values:
            raise WeightError(f"survey has no responses for factor {factor}")
    return scores


def derive_weights(scores: Mapping[str, Iterable[int]]) -> WeightConfig:
    """Turn per-factor Likert scores into a normalized WeightConfig."""
    groups = {}
    for group_name, factors in SURVEY_FACTORS.items():
        means = [likert_mean(list(scores[f])) for f in factors]
        groups[group_name] = normalize_group(means)
    return WeightConfig(**groups)


def weights_from_survey(path: str | Path) -> WeightConfig:
    return derive_weights(parse_survey_csv(path))


def load_weight_config(source: str | Path | Mapping, base: WeightConfig | None = None) -> WeightConfig:
    """Build a WeightConfig from a JSON file or mapping, over `base` defaults.

    Groups may be overridden individually. Each supplied group must be
    nonnegative and sum to 1 within 1e-6; it is stored sum-normalized.
    """
    if base is None:
        base = default_weights()
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            data = json.load(fh)
    else:
        data = dict(source)
    sizes = {"tradeoff": 3, "popularity": 3, "seasonality": 2, "composite": 3}
    unknown = set(data) - set(sizes)
    if unknown:
        raise WeightError(f"unknown weight groups: {', '.join(sorted(unknown))}")
    groups = {name: getattr(base, name) for name in sizes}
    for name, raw in data.items():
        if not isinstance(raw, (list, tuple)) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in raw
        ):
            raise WeightError(f"{name} weights must be a list of numbers")
        _check_group(name, raw, sizes[name], WEIGHT_SUM_TOLERANCE)
        groups[name] = normalize_group(raw)
    return WeightConfig(**groups)
