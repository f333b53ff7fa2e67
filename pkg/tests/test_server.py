"""HTTP API contract tests over the golden snapshot."""

from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from sfair.server import create_app


@pytest.fixture(scope="module")
def client(golden_snapshot):
    app = create_app(golden_snapshot)
    with TestClient(app) as c:
        yield c


@pytest.fixture()
def empty_client():
    with TestClient(create_app(None)) as c:
        yield c


class TestHealth:
    def test_before_snapshot_503(self, empty_client):
        response = empty_client.get("/health")
        assert response.status_code == 503
        body = response.json()
        assert body["code"] == "no_snapshot"
        assert "message" in body

    def test_after_ingest_200_with_digest(self, client, golden_snapshot):
        response = client.get("/health")
        assert response.status_code == 200
        body = response.json()
        assert body["digest"] == golden_snapshot.digest
        assert body["cities"] == 5


class TestCities:
    def test_query_match(self, client):
        body = client.get("/cities", params={"q": "brig"}).json()
        assert [c["id"] for c in body["cities"]] == ["bri"]

    def test_country_filter(self, client):
        body = client.get("/cities", params={"country": "AA"}).json()
        assert sorted(c["id"] for c in body["cities"]) == ["ada", "cor"]

    def test_empty_match_is_200(self, client):
        response = client.get("/cities", params={"q": "nothing-here"})
        assert response.status_code == 200
        assert response.json()["cities"] == []

    def test_name_sorted_and_paged(self, client):
        body = client.get("/cities", params={"per_page": "2", "page": "2"}).json()
        assert body["total"] == 5
        assert [c["name"] for c in body["cities"]] == ["Corvein", "Dunmore"]

    def test_bad_paging_400(self, client):
        assert client.get("/cities", params={"page": "0"}).status_code == 400
        assert client.get("/cities", params={"per_page": "-3"}).status_code == 400
        response = client.get("/cities", params={"page": "x"})
        assert response.status_code == 400
        assert response.json()["code"] == "invalid_page"


class TestCityIndices:
    def test_month_view(self, client):
        response = client.get("/cities/bri/indices", params={"month": "7"})
        assert response.status_code == 200
        body = response.json()
        assert body["visitor_gini"] == pytest.approx(0.4291666666666667)
        assert body["rate_gini"] == pytest.approx(0.25)
        assert body["seasonality"] == pytest.approx(0.3293708333333334)
        assert body["popularity_label"] == "high"
        assert body["completeness"]["popularity"] is True

    def test_incomplete_city_mask(self, client):
        body = client.get("/cities/eld/indices", params={"month": "7"}).json()
        assert body["visitor_gini"] is None
        assert body["completeness"]["visitor_gini"] is False
        assert body["seasonality"] == pytest.approx(0.15)

    def test_unknown_city_404(self, client):
        response = client.get("/cities/zzz/indices", params={"month": "7"})
        assert response.status_code == 404
        assert response.json()["code"] == "unknown_city"

    def test_bad_month_400(self, client):
        response = client.get("/cities/bri/indices", params={"month": "13"})
        assert response.status_code == 400
        assert response.json()["code"] == "invalid_month"
        assert client.get("/cities/bri/indices").status_code == 400


class TestRecommendations:
    def test_golden_permutation(self, client):
        body = client.get("/recommendations", params={"origin": "ada", "month": "7"}).json()
        ids = [r["city"]["id"] for r in body["recommendations"]]
        assert ids == ["dun", "cor", "eld", "bri"]
        first = body["recommendations"][0]
        assert first["rank"] == 1
        assert first["score"] == 7
        assert {m["mode"] for m in first["modes"]} == {"flight"}

    def test_deterministic_byte_identical(self, client):
        params = {"origin": "ada", "month": "7"}
        a = client.get("/recommendations", params=params)
        b = client.get("/recommendations", params=params)
        assert a.content == b.content

    def test_unknown_origin_404(self, client):
        response = client.get("/recommendations", params={"origin": "nope", "month": "7"})
        assert response.status_code == 404
        assert response.json()["code"] == "unknown_city"

    def test_invalid_month_400(self, client):
        response = client.get("/recommendations", params={"origin": "ada", "month": "13"})
        assert response.status_code == 400
        body = response.json()
        assert body["code"] == "invalid_month"

    def test_invalid_weights_sum_400(self, client):
        response = client.get(
            "/recommendations",
            params={"origin": "ada", "month": "7",
                    "weights": json.dumps({"tradeoff": [0.5, 0.5, 0.1]})},
        )
        assert response.status_code == 400
        assert response.json()["code"] == "invalid_weights"

    def test_malformed_weights_400(self, client):
        response = client.get(
            "/recommendations", params={"origin": "ada", "month": "7", "weights": "{notjson"}
        )
        assert response.status_code == 400

    def test_weights_override_applies(self, client):
        params = {
            "origin": "ada", "month": "7",
            "weights": json.dumps({"composite": [1.0, 0.0, 0.0]}),
        }
        body = client.get("/recommendations", params=params).json()
        values = [r["tradeoff"] for r in body["recommendations"]]
        assert values == sorted(values)
        assert body["weights"]["composite"] == [1.0, 0.0, 0.0]

    def test_sort_by_popularity(self, client):
        body = client.get(
            "/recommendations", params={"origin": "ada", "month": "7", "sort": "popularity"}
        ).json()
        values = [r["popularity"] for r in body["recommendations"]]
        assert values == sorted(values)

    def test_bad_sort_400(self, client):
        response = client.get(
            "/recommendations", params={"origin": "ada", "month": "7", "sort": "alphabetical"}
        )
        assert response.status_code == 400

    def test_limit(self, client):
        body = client.get(
            "/recommendations", params={"origin": "ada", "month": "7", "limit": "2"}
        ).json()
        assert len(body["recommendations"]) == 2

    def test_mode_filter(self, client):
        body = client.get(
            "/recommendations", params={"origin": "ada", "month": "7", "mode": "train"}
        ).json()
        ids = [r["city"]["id"] for r in body["recommendations"]]
        assert sorted(ids) == ["bri", "eld"]

    def test_full_float_precision_preserved(self, client):
        raw = client.get("/recommendations", params={"origin": "ada", "month": "7"}).content
        # The composite for dun, serialized with round-trip precision.
        assert b"0.07205746864651942" in raw


class TestErrorShape:
    def test_unknown_path_is_api_error(self, client):
        response = client.get("/no-such-endpoint")
        assert response.status_code == 404
        body = response.json()
        assert body["code"] == "not_found"
        assert "message" in body


class TestNoStateMutation:
    def test_repeated_queries_leave_snapshot_digest_stable(self, client):
        before = client.get("/health").json()["digest"]
        for _ in range(3):
            client.get("/recommendations", params={"origin": "ada", "month": "7"})
        assert client.get("/health").json()["digest"] == before
