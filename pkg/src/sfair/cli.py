"""Operator CLI: ingest datasets, inspect indices, rank, report, serve."""

from __future__ import annotations

import csv
import io
import json
import sys
from pathlib import Path

import click

from .ingest import (
    DEFAULT_CORPUS_SIZE,
    DatasetSnapshot,
    SnapshotFormatError,
    ingest_directory,
    load_snapshot,
    save_snapshot,
)
from .sfairness import Label, Recommendation, UnknownCityError, city_indices, rank_destinations
from .transport import TransportMode
from .weights import WeightError, load_weight_config, weights_from_survey

RANK_COLUMNS = [
    "rank", "city_id", "city", "sfairness", "score", "tradeoff", "popularity",
    "seasonality", "popularity_label", "seasonality_label", "best_mode",
]

SNAPSHOT_ENV = "SFAIR_SNAPSHOT"
DATA_DIR_ENV = "SFAIR_DATA_DIR"


def _fail(message: str) -> "click.ClickException":
    exc = click.ClickException(message)
    exc.exit_code = 1
    return exc


def _load(snapshot_path: str) -> DatasetSnapshot:
    path = Path(snapshot_path)
    if not path.exists():
        raise _fail(f"snapshot file not found: {path}")
    try:
        return load_snapshot(path)
    except SnapshotFormatError as exc:
        raise _fail(str(exc)) from exc


def _effective_weights(snapshot: DatasetSnapshot, weights_path: str | None):
    if weights_path is None:
        return None
    try:
        return load_weight_config(weights_path, base=snapshot.weights)
    except (WeightError, OSError, json.JSONDecodeError) as exc:
        raise _fail(f"invalid weights file: {exc}") from exc


def _rank_rows(recommendations: list[Recommendation]) -> list[list]:
    return [
        [
            rec.rank, rec.city.id, rec.city.name, rec.sfairness, rec.score,
            rec.tradeoff, rec.popularity, rec.seasonality,
            rec.popularity_label.value, rec.seasonality_label.value, rec.best_mode.label,
        ]
        for rec in recommendations
    ]


def render_rank_csv(recommendations: list[Recommendation]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(RANK_COLUMNS)
    writer.writerows(_rank_rows(recommendations))
    return buffer.getvalue()


def _render_rank_table(recommendations: list[Recommendation]) -> str:
    rows = [RANK_COLUMNS] + [
        [
            str(rec.rank), rec.city.id, rec.city.name, f"{rec.sfairness:.4f}",
            str(rec.score), f"{rec.tradeoff:.4f}", f"{rec.popularity:.4f}",
            f"{rec.seasonality:.4f}", rec.popularity_label.value,
            rec.seasonality_label.value, rec.best_mode.label,
        ]
        for rec in recommendations
    ]
    widths = [max(len(row[i]) for row in rows) for i in range(len(RANK_COLUMNS))]
    lines = ["  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip() for row in rows]
    lines.insert(1, "  ".join("-" * width for width in widths))
    return "\n".join(lines) + "\n"


@click.group()
@click.version_option(package_name="sfair", prog_name="sfair")
def main() -> None:
    """Sustainability-scored city trip recommendations."""


@main.command()
@click.option("--data-dir", "data_dir", envvar=DATA_DIR_ENV, required=True,
              type=click.Path(exists=True, file_okay=False), help="Directory with the input CSV/JSON files.")
@click.option("--out", "out_path", default="snapshot.bin", show_default=True,
              type=click.Path(dir_okay=False), help="Snapshot file to write.")
@click.option("--corpus-size", default=DEFAULT_CORPUS_SIZE, show_default=True,
              type=click.IntRange(min=1), help="Keep the top N most populated cities with an airport.")
def ingest(data_dir: str, out_path: str, corpus_size: int) -> None:
    """Validate the input files and write an immutable snapshot."""
    snapshot, report = ingest_directory(data_dir, corpus_size=corpus_size)
    for line in report.format_lines():
        click.echo(line, err=True)
    if snapshot is None or report.has_errors():
        click.echo(f"ingest failed: {len(report.errors)} error(s)", err=True)
        sys.exit(1)
    save_snapshot(snapshot, out_path)
    click.echo(
        f"snapshot {snapshot.digest[:12]} written to {out_path} "
        f"({len(snapshot.cities)} cities, {len(snapshot.pair_options)} scored pairs, "
        f"{len(report.warnings)} warning(s))",
        err=True,
    )


@main.command()
@click.option("--snapshot", "snapshot_path", envvar=SNAPSHOT_ENV, default="snapshot.bin",
              show_default=True, type=click.Path(dir_okay=False))
@click.option("--origin", required=True, help="Origin city id.")
@click.option("--month", required=True, type=click.IntRange(1, 12), help="Travel month 1..12.")
@click.option("--weights", "weights_path", default=None, type=click.Path(dir_okay=False),
              help="JSON weight overrides applied on top of the snapshot weights.")
@click.option("--top", "top", default=None, type=click.IntRange(min=1), help="Keep only the best K rows.")
@click.option("--format", "fmt", default="table", show_default=True,
              type=click.Choice(["table", "csv", "json"]))
@click.option("--sort", "sort_key", default="sfairness", show_default=True,
              type=click.Choice(["sfairness", "tradeoff", "popularity", "seasonality"]))
@click.option("--country", default=None, help="Keep only destinations in this country code.")
@click.option("--max-score", default=None, type=float, help="Keep composite values at or below this cap.")
@click.option("--popularity-label", default=None, type=click.Choice([l.value for l in Label]))
@click.option("--seasonality-label", default=None, type=click.Choice([l.value for l in Label]))
@click.option("--mode", "mode", default=None, type=click.Choice([m.label for m in TransportMode]),
              help="Keep only destinations reachable by this mode.")
def rank(snapshot_path, origin, month, weights_path, top, fmt, sort_key, country,
         max_score, popularity_label, seasonality_label, mode) -> None:
    """Print ranked destinations for an origin and month (best first)."""
    snapshot = _load(snapshot_path)
    weights = _effective_weights(snapshot, weights_path)
    try:
        recommendations = rank_destinations(
            snapshot, origin, month,
            weights=weights,
            sort_key=sort_key,
            country=country,
            max_score=max_score,
            popularity_label=Label(popularity_label) if popularity_label else None,
            seasonality_label=Label(seasonality_label) if seasonality_label else None,
            require_mode=TransportMode.parse(mode) if mode else None,
            limit=top,
        )
    except UnknownCityError as exc:
        raise _fail(f"unknown origin city: {exc.args[0]}") from exc
    if fmt == "csv":
        click.echo(render_rank_csv(recommendations), nl=False)
    elif fmt == "json":
        click.echo(json.dumps([r.to_dict() for r in recommendations], indent=2, sort_keys=True))
    else:
        click.echo(_render_rank_table(recommendations), nl=False)


@main.command()
@click.option("--snapshot", "snapshot_path", envvar=SNAPSHOT_ENV, default="snapshot.bin",
              show_default=True, type=click.Path(dir_okay=False))
@click.option("--city", required=True, help="City id to inspect.")
@click.option("--origin", default=None, help="Optional origin id; adds trade-off and composite values.")
def indices(snapshot_path, city, origin) -> None:
    """Print one city's full index bundle as JSON."""
    snapshot = _load(snapshot_path)
    try:
        bundle = city_indices(snapshot, city, origin_id=origin)
    except UnknownCityError as exc:
        raise _fail(f"unknown city: {exc.args[0]}") from exc
    click.echo(json.dumps(bundle.to_dict(), indent=2, sort_keys=True))


@main.command()
@click.option("--survey", "survey_path", required=True, type=click.Path(exists=True, dir_okay=False),
              help="Survey CSV: one row per respondent, one 1..5 column per factor.")
def weights(survey_path) -> None:
    """Derive index weights from Likert survey responses and print them."""
    try:
        config = weights_from_survey(survey_path)
    except WeightError as exc:
        raise _fail(str(exc)) from exc
    click.echo(json.dumps(config.to_dict(), indent=2, sort_keys=True))


@main.command()
@click.option("--snapshot", "snapshot_path", envvar=SNAPSHOT_ENV, default="snapshot.bin",
              show_default=True, type=click.Path(dir_okay=False))
@click.option("--listen", default="127.0.0.1:8000", show_default=True, help="host:port to bind.")
@click.option("--cors-origin", "cors_origins", multiple=True,
              help="Allowed browser origin; repeat for several.")
@click.option("--ui-dir", "ui_dir", default=None, type=click.Path(exists=True, file_okay=False),
              help="Built explorer assets to serve at /.")
def serve(snapshot_path, listen, cors_origins, ui_dir) -> None:
    """Serve the HTTP API (and optionally the explorer UI) over a snapshot."""
    import uvicorn

    from .server import create_app

    snapshot = _load(snapshot_path)
    host, _, port_s = listen.rpartition(":")
    if not host or not port_s.isdigit():
        raise click.UsageError(f"--listen expects host:port, got {listen!r}")
    app = create_app(snapshot, cors_origins=list(cors_origins), static_dir=ui_dir)
    uvicorn.run(app, host=host, port=int(port_s), log_level="info")


@main.command()
@click.option("--snapshot", "snapshot_path", envvar=SNAPSHOT_ENV, default="snapshot.bin",
              show_default=True, type=click.Path(dir_okay=False))
@click.option("--origin", required=True, help="Origin city id.")
@click.option("--month", required=True, type=click.IntRange(1, 12))
@click.option("--out-dir", "out_dir", required=True, type=click.Path(file_okay=False))
@click.option("--top", default=None, type=click.IntRange(min=1))
@click.option("--weights", "weights_path", default=None, type=click.Path(dir_okay=False))
def report(snapshot_path, origin, month, out_dir, top, weights_path) -> None:
    """Write the ranking CSV plus overview figures to a directory."""
    from .report import write_report

    snapshot = _load(snapshot_path)
    weights = _effective_weights(snapshot, weights_path)
    try:
        written = write_report(
            snapshot, origin, month, Path(out_dir), weights=weights, top=top
        )
    except UnknownCityError as exc:
        raise _fail(f"unknown origin city: {exc.args[0]}") from exc
    for path in written:
        click.echo(str(path), err=True)


if __name__ == "__main__":
    main()
