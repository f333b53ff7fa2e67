"""HTTP API over an immutable snapshot: cities, indices, recommendations.

Responses are rendered with a canonical JSON encoder (sorted keys, full
round-trip float precision), so an identical query against an identical
snapshot returns a byte-identical body. Endpoints never mutate state;
snapshot replacement is a single atomic swap.
"""

from __future__ import annotations

import json
from typing import Any, Mapping

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from starlette.exceptions import HTTPException as StarletteHTTPException

from .ingest import DatasetSnapshot
from .sfairness import (
    Label,
    UnknownCityError,
    city_indices,
    rank_destinations,
)
from .transport import TransportMode
from .weights import WeightError, load_weight_config

SORT_CHOICES = ("sfairness", "tradeoff", "popularity", "seasonality")

MAX_PER_PAGE = 500


class ApiException(Exception):
    def __init__(self, status: int, code: str, message: str, details: Any = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.details = details


def _json_bytes(payload: Any) -> bytes:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")


def _json_response(payload: Any, status: int = 200) -> Response:
    return Response(content=_json_bytes(payload), status_code=status, media_type="application/json")


def _error_response(exc: ApiException) -> Response:
    body: dict[str, Any] = {"code": exc.code, "message": exc.message}
    if exc.details is not None:
        body["details"] = exc.details
    return _json_response(body, status=exc.status)


def _require_snapshot(app: FastAPI) -> DatasetSnapshot:
    snapshot = app.state.snapshot
    if snapshot is None:
        raise ApiException(503, "no_snapshot", "no snapshot has been published yet")
    return snapshot


def _parse_int(value: str | None, name: str, default: int | None, minimum: int = 1,
               maximum: int | None = None) -> int | None:
    if value is None:
        return default
    try:
        parsed = int(value)
    except ValueError:
        raise ApiException(400, f"invalid_{name}", f"{name} must be an integer, got {value!r}")
    if parsed < minimum or (maximum is not None and parsed > maximum):
        bound = f">= {minimum}" if maximum is None else f"in [{minimum}, {maximum}]"
        raise ApiException(400, f"invalid_{name}", f"{name} must be {bound}, got {parsed}")
    return parsed


def _parse_month(value: str | None) -> int:
    if value is None:
        raise ApiException(400, "invalid_month", "month query parameter is required")
    month = _parse_int(value, "month", None, minimum=1, maximum=12)
    assert month is not None
    return month


def _parse_weights(snapshot: DatasetSnapshot, value: str | None):
    if value is None:
        return None
    try:
        data = json.loads(value)
    except json.JSONDecodeError as exc:
        raise ApiException(400, "invalid_weights", f"weights must be JSON: {exc}") from exc
    if not isinstance(data, Mapping):
        raise ApiException(400, "invalid_weights", "weights must be a JSON object of groups")
    try:
        return load_weight_config(data, base=snapshot.weights)
    except WeightError as exc:
        raise ApiException(400, "invalid_weights", str(exc)) from exc


def _parse_label(value: str | None, name: str) -> Label | None:
    if value is None:
        return None
    try:
        return Label(value.lower())
    except ValueError:
        raise ApiException(400, f"invalid_{name}", f"{name} must be one of high, medium, low")


def _month_view(snapshot: DatasetSnapshot, city_id: str, month: int) -> dict:
    bundle = city_indices(snapshot, city_id)
    label = bundle.seasonality_labels_by_month[month - 1]
    return {
        "city_id": bundle.city_id,
        "month": month,
        "popularity": bundle.popularity,
        "seasonality": bundle.seasonality_by_month[month - 1],
        "visitor_gini": bundle.visitor_gini,
        "rate_gini": bundle.rate_gini_by_month[month - 1],
        "popularity_label": bundle.popularity_label.value if bundle.popularity_label else None,
        "seasonality_label": label.value if label else None,
        "completeness": bundle.completeness,
    }


def create_app(
    snapshot: DatasetSnapshot | None = None,
    cors_origins: list[str] | None = None,
    static_dir: str | None = None,
) -> FastAPI:
    app = FastAPI(title="sfair", docs_url=None, redoc_url=None)
    app.state.snapshot = snapshot

    if cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=cors_origins,
            allow_methods=["GET"],
            allow_headers=["*"],
        )

    @app.exception_handler(ApiException)
    async def _api_error(_request: Request, exc: ApiException) -> Response:
        return _error_response(exc)

    @app.exception_handler(StarletteHTTPException)
    async def _http_error(_request: Request, exc: StarletteHTTPException) -> Response:
        code = "not_found" if exc.status_code == 404 else "http_error"
        return _error_response(ApiException(exc.status_code, code, str(exc.detail)))

    @app.exception_handler(RequestValidationError)
    async def _validation_error(_request: Request, exc: RequestValidationError) -> Response:
        return _error_response(
            ApiException(400, "invalid_request", "query validation failed", details=exc.errors())
        )

    @app.get("/health")
    def health() -> Response:
        snap = _require_snapshot(app)
        return _json_response(
            {
                "status": "ok",
                "digest": snap.digest,
                "created_at": snap.created_at,
                "cities": len(snap.cities),
            }
        )

    @app.get("/cities")
    def cities(
        country: str | None = None,
        q: str | None = None,
        page: str | None = None,
        per_page: str | None = None,
    ) -> Response:
        snap = _require_snapshot(app)
        page_n = _parse_int(page, "page", 1)
        per_page_n = _parse_int(per_page, "per_page", 50, minimum=1, maximum=MAX_PER_PAGE)
        matched = [
            c
            for c in sorted(snap.cities, key=lambda c: (c.name, c.id))
            if (country is None or c.country == country)
            and (q is None or q.lower() in c.name.lower() or q.lower() in c.id.lower())
        ]
        start = (page_n - 1) * per_page_n
        body = {
            "total": len(matched),
            "page": page_n,
            "per_page": per_page_n,
            "cities": [
                {
                    "id": c.id, "name": c.name, "country": c.country,
                    "lat": c.lat, "lon": c.lon, "population": c.population,
                    "airports": list(c.airports),
                }
                for c in matched[start : start + per_page_n]
            ],
        }
        return _json_response(body)

    @app.get("/cities/{city_id}/indices")
    def indices(city_id: str, month: str | None = None) -> Response:
        snap = _require_snapshot(app)
        month_n = _parse_month(month)
        if city_id not in snap.city_index:
            raise ApiException(404, "unknown_city", f"no city with id {city_id!r}")
        return _json_response(_month_view(snap, city_id, month_n))

    @app.get("/recommendations")
    def recommendations(
        origin: str | None = None,
        month: str | None = None,
        limit: str | None = None,
        sort: str | None = None,
        weights: str | None = None,
        country: str | None = None,
        max_score: str | None = None,
        popularity_label: str | None = None,
        seasonality_label: str | None = None,
        mode: str | None = None,
    ) -> Response:
        snap = _require_snapshot(app)
        if origin is None:
            raise ApiException(400, "invalid_origin", "origin query parameter is required")
        if origin not in snap.city_index:
            raise ApiException(404, "unknown_city", f"no city with id {origin!r}")
        month_n = _parse_month(month)
        limit_n = _parse_int(limit, "limit", None)
        sort_key = sort or "sfairness"
        if sort_key not in SORT_CHOICES:
            raise ApiException(400, "invalid_sort", f"sort must be one of {', '.join(SORT_CHOICES)}")
        config = _parse_weights(snap, weights)
        max_score_n = None
        if max_score is not None:
            try:
                max_score_n = float(max_score)
            except ValueError:
                raise ApiException(400, "invalid_max_score", f"max_score must be a number, got {max_score!r}")
        require_mode = None
        if mode is not None:
            try:
                require_mode = TransportMode.parse(mode)
            except ValueError:
                raise ApiException(400, "invalid_mode", "mode must be one of flight, drive, train")
        recs = rank_destinations(
            snap,
            origin,
            month_n,
            weights=config,
            sort_key=sort_key,
            country=country,
            max_score=max_score_n,
            popularity_label=_parse_label(popularity_label, "popularity_label"),
            seasonality_label=_parse_label(seasonality_label, "seasonality_label"),
            require_mode=require_mode,
            limit=limit_n,
        )
        effective = config or snap.weights
        body = {
            "origin": origin,
            "month": month_n,
            "sort": sort_key,
            "snapshot_digest": snap.digest,
            "weights": effective.to_dict(),
            "recommendations": [r.to_dict() for r in recs],
        }
        return _json_response(body)

    @app.exception_handler(UnknownCityError)
    async def _unknown_city(_request: Request, exc: UnknownCityError) -> Response:
        return _error_response(ApiException(404, "unknown_city", f"no city with id {exc.args[0]!r}"))

    if static_dir is not None:
        from starlette.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="explorer")

    return app
