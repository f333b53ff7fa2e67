"""Loader, validation, snapshot, and serialization tests."""

from __future__ import annotations

import datetime as dt
from pathlib import Path

import pytest

from sfair.ingest import (
    CityRecord,
    IngestReport,
    SnapshotFormatError,
    build_snapshot,
    ingest_directory,
    load_avc,
    load_calendar,
    load_cities,
    load_cost_tables,
    load_popularity,
    load_routes,
    load_snapshot,
    parse_price,
    save_snapshot,
)
from sfair.transport import TransportMode

from .builders import build_random_snapshot


def _write(path: Path, text: str) -> Path:
    path.write_text(text, encoding="utf-8")
    return path


CITIES_OK = (
    "id,name,country,lat,lng,population\n"
    "aaa,Alpha,AA,48.0,11.0,1000\n"
    "bbb,Beta,BB,50.0,12.0,3000\n"
    "ccc,Ceta,AA,52.0,13.0,2000\n"
)
AIRPORTS_OK = "iata,city_id\nAAA,aaa\nBBB,bbb\nBBZ,bbb\n"


class TestLoadCities:
    def test_airport_filter_and_top_n(self, tmp_path):
        cities = _write(tmp_path / "cities.csv", CITIES_OK)
        airports = _write(tmp_path / "airports.csv", AIRPORTS_OK)
        corpus, report = load_cities(cities, airports, n=2)
        # ccc has no airport; top 2 of the rest by population: bbb, aaa.
        assert [c.id for c in corpus] == ["aaa", "bbb"]
        assert not report.has_errors()

    def test_multi_airport_city_single_record(self, tmp_path):
        cities = _write(tmp_path / "cities.csv", CITIES_OK)
        airports = _write(tmp_path / "airports.csv", AIRPORTS_OK)
        corpus, _ = load_cities(cities, airports, n=5)
        bbb = next(c for c in corpus if c.id == "bbb")
        assert bbb.airports == ("BBB", "BBZ")

    def test_empty_airport_file_gives_empty_corpus_with_warning(self, tmp_path):
        cities = _write(tmp_path / "cities.csv", CITIES_OK)
        airports = _write(tmp_path / "airports.csv", "iata,city_id\n")
        corpus, report = load_cities(cities, airports, n=5)
        assert corpus == []
        assert any("empty" in w.message for w in report.warnings)

    def test_malformed_row_is_per_row_error_with_line(self, tmp_path):
        cities = _write(
            tmp_path / "cities.csv",
            "id,name,country,lat,lng,population\naaa,Alpha,AA,not-a-float,11.0,1000\n",
        )
        airports = _write(tmp_path / "airports.csv", AIRPORTS_OK)
        _, report = load_cities(cities, airports)
        assert report.has_errors()
        assert report.errors[0].line == 2

    def test_duplicate_city_id_is_error(self, tmp_path):
        cities = _write(
            tmp_path / "cities.csv",
            "id,name,country,lat,lng,population\n"
            "aaa,Alpha,AA,48.0,11.0,1000\naaa,Alpha2,AA,48.5,11.5,900\n",
        )
        airports = _write(tmp_path / "airports.csv", AIRPORTS_OK)
        _, report = load_cities(cities, airports)
        assert any("duplicate" in e.message for e in report.errors)

    def test_header_mismatch_is_error(self, tmp_path):
        cities = _write(tmp_path / "cities.csv", "city,name\nx,y\n")
        airports = _write(tmp_path / "airports.csv", AIRPORTS_OK)
        corpus, report = load_cities(cities, airports)
        assert corpus == []
        assert any("header mismatch" in e.message for e in report.errors)

    def test_invalid_iata_is_error(self, tmp_path):
        cities = _write(tmp_path / "cities.csv", CITIES_OK)
        airports = _write(tmp_path / "airports.csv", "iata,city_id\nab1,aaa\n")
        _, report = load_cities(cities, airports)
        assert any("IATA" in e.message for e in report.errors)


CORPUS = {
    "aaa": CityRecord(id="aaa", name="Alpha", country="AA", lat=48.0, lon=11.0,
                      population=1000, airports=("AAA",)),
    "bbb": CityRecord(id="bbb", name="Beta", country="BB", lat=50.0, lon=12.0,
                      population=3000, airports=("BBB",)),
}

ROUTE_HEADER = "origin,dest,mode,distance_km,duration_h,carrier,fuel_liters,source\n"


class TestLoadRoutes:
    def test_drive_over_limit_excluded_with_warning(self, tmp_path):
        path = _write(tmp_path / "routes.csv", ROUTE_HEADER + "aaa,bbb,drive,1200,10.0,,,g\n")
        routes, report = load_routes(path, CORPUS)
        assert routes == {}
        assert any("exceeds 1000" in w.message for w in report.warnings)

    def test_min_distance_across_sources(self, tmp_path):
        path = _write(
            tmp_path / "routes.csv",
            ROUTE_HEADER + "aaa,bbb,drive,105,1.2,,,osm\naaa,bbb,drive,100,1.1,,,google\n",
        )
        routes, _ = load_routes(path, CORPUS)
        (record,) = routes[("aaa", "bbb")]
        assert record.distance_km == 100.0
        assert record.source == "google"

    def test_blank_flight_distance_recomputed_from_coordinates(self, tmp_path):
        path = _write(tmp_path / "routes.csv", ROUTE_HEADER + "aaa,bbb,flight,,1.0,LH,,g\n")
        routes, report = load_routes(path, CORPUS)
        (record,) = routes[("aaa", "bbb")]
        # Independent haversine puts these ~233.5 km apart.
        assert record.distance_km == pytest.approx(233.5, abs=1.0)
        assert not report.has_errors()

    def test_unknown_endpoint_skipped_with_warning(self, tmp_path):
        path = _write(tmp_path / "routes.csv", ROUTE_HEADER + "aaa,zzz,flight,100,1.0,LH,,g\n")
        routes, report = load_routes(path, CORPUS)
        assert routes == {}
        assert any("unknown city" in w.message for w in report.warnings)

    def test_nonpositive_distance_rejected(self, tmp_path):
        path = _write(tmp_path / "routes.csv", ROUTE_HEADER + "aaa,bbb,train,-5,1.0,,,g\n")
        routes, report = load_routes(path, CORPUS)
        assert routes == {}
        assert report.has_errors()

    def test_unknown_mode_rejected(self, tmp_path):
        path = _write(tmp_path / "routes.csv", ROUTE_HEADER + "aaa,bbb,boat,10,1.0,,,g\n")
        _, report = load_routes(path, CORPUS)
        assert report.has_errors()


AVC_HEADER = "city_id,m1,m2,m3,m4,m5,m6,m7,m8,m9,m10,m11,m12\n"


class TestLoadAvc:
    def test_small_minimum_accepted(self, tmp_path):
        row = "x," + ",".join(["489"] + ["1000"] * 11) + "\n"
        series, report = load_avc(_write(tmp_path / "avc.csv", AVC_HEADER + row))
        assert series["x"].counts[0] == 489.0
        assert not report.has_errors()

    def test_missing_month_flagged_incomplete(self, tmp_path):
        row = "x,1,2,3,,5,6,7,8,9,10,11,12\n"
        series, report = load_avc(_write(tmp_path / "avc.csv", AVC_HEADER + row))
        assert series == {}
        assert any("incomplete" in w.message for w in report.warnings)

    def test_all_zero_flagged(self, tmp_path):
        row = "x," + ",".join(["0"] * 12) + "\n"
        series, report = load_avc(_write(tmp_path / "avc.csv", AVC_HEADER + row))
        assert series == {}
        assert any("zero" in w.message for w in report.warnings)

    def test_negative_count_rejected(self, tmp_path):
        row = "x,1,2,3,-4,5,6,7,8,9,10,11,12\n"
        series, report = load_avc(_write(tmp_path / "avc.csv", AVC_HEADER + row))
        assert series == {}
        assert report.has_errors()


CAL_HEADER = "listing_id,city_id,date,available,price\n"


class TestLoadCalendar:
    def test_mean_over_available_listings(self, tmp_path):
        rows = (
            "l1,x,2023-09-15,t,100\n"
            "l2,x,2023-09-15,t,200\n"
            "l3,x,2023-09-15,f,900\n"
        )
        daily, _ = load_calendar(_write(tmp_path / "calendar.csv", CAL_HEADER + rows))
        assert daily["x"].rates[dt.date(2023, 9, 15)] == 150.0

    def test_currency_string_parsing(self, tmp_path):
        rows = 'l1,x,2023-09-15,t,"$2,013.13"\n'
        daily, _ = load_calendar(_write(tmp_path / "calendar.csv", CAL_HEADER + rows))
        assert daily["x"].rates[dt.date(2023, 9, 15)] == pytest.approx(2013.13)

    def test_unavailable_only_falls_back_to_all_prices(self, tmp_path):
        rows = "l1,x,2023-09-15,f,80\n"
        daily, _ = load_calendar(_write(tmp_path / "calendar.csv", CAL_HEADER + rows))
        assert daily["x"].rates[dt.date(2023, 9, 15)] == 80.0

    def test_duplicate_listing_date_last_wins_with_warning(self, tmp_path):
        rows = "l1,x,2023-09-15,t,100\nl1,x,2023-09-15,t,300\n"
        daily, report = load_calendar(_write(tmp_path / "calendar.csv", CAL_HEADER + rows))
        assert daily["x"].rates[dt.date(2023, 9, 15)] == 300.0
        assert any("last wins" in w.message for w in report.warnings)

    def test_unparseable_price_skipped_with_count(self, tmp_path):
        rows = "l1,x,2023-09-15,t,free\nl2,x,2023-09-15,t,100\n"
        daily, report = load_calendar(_write(tmp_path / "calendar.csv", CAL_HEADER + rows))
        assert daily["x"].rates[dt.date(2023, 9, 15)] == 100.0
        assert any("unparseable" in w.message for w in report.warnings)

    def test_invalid_date_is_error(self, tmp_path):
        rows = "l1,x,15-09-2023,t,100\n"
        _, report = load_calendar(_write(tmp_path / "calendar.csv", CAL_HEADER + rows))
        assert report.has_errors()

    @pytest.mark.parametrize(
        "text,expected",
        [("$1,234.00", 1234.0), ("€99.50", 99.5), ("1234", 1234.0), ("", None), ("n/a", None)],
    )
    def test_parse_price(self, text, expected):
        assert parse_price(text) == expected


POP_HEADER = "city_id,poi_count,reviews_opinions,attraction_reviews,attraction_photos\n"
GT_HEADER = "city_id,week,value\n"


class TestLoadPopularity:
    def test_weekly_trends_annualized_by_mean(self, tmp_path):
        pop = _write(tmp_path / "popularity.csv", POP_HEADER + "x,10,100,50,40\n")
        gt = _write(tmp_path / "gt.csv", GT_HEADER + "x,1,10\nx,2,20\nx,3,30\n")
        raws, _ = load_popularity(pop, gt)
        assert raws["x"].gt_index == 20.0

    def test_max_range_poi_accepted(self, tmp_path):
        pop = _write(tmp_path / "popularity.csv", POP_HEADER + "x,8999,100,50,40\n")
        gt = _write(tmp_path / "gt.csv", GT_HEADER)
        raws, report = load_popularity(pop, gt)
        assert raws["x"].poi_count == 8999
        assert raws["x"].gt_index is None
        assert not report.has_errors()

    def test_trend_rows_without_popularity_dropped_with_warning(self, tmp_path):
        pop = _write(tmp_path / "popularity.csv", POP_HEADER + "x,10,100,50,40\n")
        gt = _write(tmp_path / "gt.csv", GT_HEADER + "y,1,44\n")
        raws, report = load_popularity(pop, gt)
        assert "y" not in raws
        assert any("dropped" in w.message for w in report.warnings)

    def test_negative_count_rejected(self, tmp_path):
        pop = _write(tmp_path / "popularity.csv", POP_HEADER + "x,-1,100,50,40\n")
        gt = _write(tmp_path / "gt.csv", GT_HEADER)
        raws, report = load_popularity(pop, gt)
        assert raws == {}
        assert report.has_errors()


class TestIngestDirectory:
    def test_golden_fixture_ingests_cleanly(self, golden_data_dir):
        snapshot, report = ingest_directory(golden_data_dir, corpus_size=5)
        assert snapshot is not None
        assert not report.has_errors()
        assert sorted(c.id for c in snapshot.cities) == ["ada", "bri", "cor", "dun", "eld"]
        # Drive over 1000 km, unknown endpoints, unknown-city trends all warn.
        assert report.warnings

    def test_missing_required_file_named(self, golden_data_dir, tmp_path):
        for name in ("cities.csv", "airports.csv", "routes.csv", "calendar.csv",
                     "popularity.csv", "gt.csv", "costs.json"):
            (tmp_path / name).write_bytes((golden_data_dir / name).read_bytes())
        snapshot, report = ingest_directory(tmp_path)
        assert snapshot is None
        assert any(e.file == "avc.csv" for e in report.errors)

    def test_digest_stable_across_runs(self, golden_data_dir):
        first, _ = ingest_directory(golden_data_dir, corpus_size=5)
        second, _ = ingest_directory(golden_data_dir, corpus_size=5)
        assert first is not None and second is not None
        assert first.digest == second.digest

    def test_digest_sensitive_to_input_change(self, golden_data_dir, tmp_path):
        import shutil

        shutil.copytree(golden_data_dir, tmp_path / "data")
        target = tmp_path / "data" / "popularity.csv"
        original = target.read_text(encoding="utf-8")
        assert "900000" in original
        target.write_text(original.replace("900000", "911111"), encoding="utf-8")
        base, _ = ingest_directory(golden_data_dir, corpus_size=5)
        changed, _ = ingest_directory(tmp_path / "data", corpus_size=5)
        assert base.digest != changed.digest

    def test_weights_file_used_when_present(self, golden_data_dir, tmp_path):
        import shutil

        shutil.copytree(golden_data_dir, tmp_path / "data")
        (tmp_path / "data" / "weights.json").write_text(
            '{"composite": [0.2, 0.3, 0.5]}', encoding="utf-8"
        )
        snapshot, _ = ingest_directory(tmp_path / "data", corpus_size=5)
        assert snapshot.weights.composite == pytest.approx((0.2, 0.3, 0.5))

    def test_factors_file_overrides_defaults(self, golden_data_dir, tmp_path):
        import shutil

        shutil.copytree(golden_data_dir, tmp_path / "data")
        (tmp_path / "data" / "factors.json").write_text(
            '{"drive_g_per_km": 120.0, "flight_g_per_km": {"very_short": 160}}',
            encoding="utf-8",
        )
        snapshot, _ = ingest_directory(tmp_path / "data", corpus_size=5)
        assert snapshot.factors.drive_g_per_km == 120.0
        assert snapshot.factors.train_g_per_km == 24.0
        # ada->bri drive is 590 km: emissions follow the overridden factor.
        drive = next(
            o for o in snapshot.pair_options[("ada", "bri")] if o.mode is TransportMode.DRIVE
        )
        assert drive.emissions_kg == pytest.approx(120.0 * 590.0 / 1000.0)

    def test_bad_factors_file_is_error(self, golden_data_dir, tmp_path):
        import shutil

        shutil.copytree(golden_data_dir, tmp_path / "data")
        (tmp_path / "data" / "factors.json").write_text(
            '{"flight_g_per_km": {"hyper_long": 10}}', encoding="utf-8"
        )
        snapshot, report = ingest_directory(tmp_path / "data", corpus_size=5)
        assert snapshot is None
        assert any(e.file == "factors.json" for e in report.errors)

    def test_drive_exclusion_visible_in_options(self, golden_snapshot):
        # ada->cor had only a too-long drive besides the flight.
        modes = {o.mode for o in golden_snapshot.pair_options[("ada", "cor")]}
        assert modes == {TransportMode.FLIGHT}

    def test_eld_visitor_gini_absent(self, golden_snapshot):
        assert golden_snapshot.seasonal["eld"].visitor_gini is None
        assert golden_snapshot.seasonal["eld"].index_by_month[6] is not None


class TestSnapshotSerialization:
    def test_roundtrip_preserves_everything(self, tmp_path):
        snapshot = build_random_snapshot(n_cities=8, seed=2)
        path = tmp_path / "snap.bin"
        save_snapshot(snapshot, path)
        loaded = load_snapshot(path)
        assert loaded.digest == snapshot.digest
        assert loaded.cities == snapshot.cities
        assert loaded.pair_options == snapshot.pair_options
        assert loaded.weights == snapshot.weights
        assert loaded.seasonal == snapshot.seasonal
        assert loaded.adr["c01"].rates == snapshot.adr["c01"].rates

    def test_corrupt_file_rejected(self, tmp_path):
        snapshot = build_random_snapshot(n_cities=4, seed=3)
        path = tmp_path / "snap.bin"
        save_snapshot(snapshot, path)
        blob = bytearray(path.read_bytes())
        blob[-10] ^= 0xFF
        path.write_bytes(bytes(blob))
        with pytest.raises(SnapshotFormatError):
            load_snapshot(path)

    def test_wrong_magic_rejected(self, tmp_path):
        path = tmp_path / "snap.bin"
        path.write_bytes(b"NOTASNAP" + b"x" * 50)
        with pytest.raises(SnapshotFormatError):
            load_snapshot(path)

    def test_empty_corpus_refused(self):
        with pytest.raises(Exception):
            build_snapshot(cities=[], routes={}, avc={}, adr={}, popularity_raw={},
                           report=IngestReport())


class TestCostTables:
    def test_load_from_golden(self, golden_data_dir):
        tables = load_cost_tables(golden_data_dir / "costs.json")
        assert tables.train_eur_per_km == 0.14
        assert tables.airline_eur_per_km["LH"].domestic == 0.20
        assert tables.fuel_eur_per_km_by_country["AA"] == 0.10
