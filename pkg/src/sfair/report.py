"""Report rendering: ranked CSV plus overview figures for one origin/month."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .ingest import DatasetSnapshot
from .sfairness import Recommendation, rank_destinations
from .weights import WeightConfig

MONTH_NAMES = ("Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec")

# Keep the seasonality figure readable.
MAX_PROFILE_LINES = 8

plt.rcParams.update({
    "figure.figsize": (9, 5),
    "axes.grid": True,
    "grid.alpha": 0.3,
    "axes.spines.top": False,
    "axes.spines.right": False,
})


def _ranking_figure(recs: list[Recommendation], month: int, path: Path) -> None:
    names = [f"{r.city.name} ({r.best_mode.label})" for r in recs][::-1]
    values = [r.sfairness for r in recs][::-1]
    scores = [r.score for r in recs][::-1]
    fig, ax = plt.subplots()
    bars = ax.barh(names, values, color="#3a7d44")
    for bar, score in zip(bars, scores):
        ax.text(bar.get_width() + 0.005, bar.get_y() + bar.get_height() / 2,
                str(score), va="center", fontsize=9)
    ax.set_xlabel("composite impact (lower is fairer)")
    ax.set_title(f"Ranked destinations, month {MONTH_NAMES[month - 1]}")
    ax.set_xlim(0, max(1.0, max(values) * 1.15) if values else 1.0)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _components_figure(recs: list[Recommendation], weights: WeightConfig, path: Path) -> None:
    w_z, w_p, w_s = weights.composite
    names = [r.city.name for r in recs][::-1]
    z_part = [w_z * r.tradeoff for r in recs][::-1]
    p_part = [w_p * r.popularity for r in recs][::-1]
    s_part = [w_s * r.seasonality for r in recs][::-1]
    fig, ax = plt.subplots()
    ax.barh(names, z_part, color="#4c72b0", label="transport trade-off")
    ax.barh(names, p_part, left=z_part, color="#dd8452", label="popularity")
    left = [z + p for z, p in zip(z_part, p_part)]
    ax.barh(names, s_part, left=left, color="#55a868", label="seasonality")
    ax.set_xlabel("weighted contribution to the composite")
    ax.set_title("What drives each destination's score")
    ax.legend(loc="lower right")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _seasonality_figure(
    snapshot: DatasetSnapshot, recs: list[Recommendation], month: int, path: Path
) -> None:
    fig, ax = plt.subplots()
    months = list(range(1, 13))
    for rec in recs[:MAX_PROFILE_LINES]:
        seasonal = snapshot.seasonal.get(rec.city.id)
        if seasonal is None:
            continue
        ys = [seasonal.index_by_month[m - 1] for m in months]
        ax.plot(months, [y if y is not None else float("nan") for y in ys],
                marker="o", markersize=3, label=rec.city.name)
    ax.axvline(month, color="grey", linestyle="--", linewidth=1)
    ax.set_xticks(months)
    ax.set_xticklabels(MONTH_NAMES, fontsize=8)
    ax.set_ylabel("seasonal demand index")
    ax.set_title("Monthly seasonality of ranked destinations")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_report(
    snapshot: DatasetSnapshot,
    origin: str,
    month: int,
    out_dir: Path,
    *,
    weights: WeightConfig | None = None,
    top: int | None = None,
) -> list[Path]:
    """Rank destinations and write the CSV plus figures into `out_dir`."""
    from .cli import render_rank_csv

    recs = rank_destinations(snapshot, origin, month, weights=weights, limit=top)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    csv_path = out_dir / "ranking.csv"
    csv_path.write_text(render_rank_csv(recs), encoding="utf-8")
    written.append(csv_path)

    if recs:
        effective = weights or snapshot.weights
        for name, renderer in (
            ("ranking.png", lambda p: _ranking_figure(recs, month, p)),
            ("components.png", lambda p: _components_figure(recs, effective, p)),
            ("seasonality.png", lambda p: _seasonality_figure(snapshot, recs, month, p)),
        ):
            target = out_dir / name
            renderer(target)
            written.append(target)
    return written
