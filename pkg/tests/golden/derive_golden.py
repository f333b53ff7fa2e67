#!/usr/bin/env python3
"""Straight-line derivation of the golden fixture's expected ranking.

Reads the raw fixture files and evaluates every formula step by step,
independently of the package under test (nothing from sfair is imported).
Running it rewrites tests/golden/expected/rank_ada_m7.csv; the acceptance
suite byte-compares the CLI output against that frozen file.

Frozen from the published coefficients: trade-off (0.352, 0.218, 0.431),
popularity (0.469, 0.325, 0.206), seasonality (0.443, 0.557), composite
(0.281, 0.334, 0.385); emission factors 155/110/75/95 g/km by haul,
96 g/km drive, 24 g/km train, 1.09 flight distance correction.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

HERE = Path(__file__).resolve().parent
DATA = HERE / "data"
EXPECTED = HERE / "expected"

ORIGIN = "ada"
MONTH = 7
CORPUS_SIZE = 5


def norm_group(group):
    total = sum(group)
    return tuple(a / total for a in group)


W_TRADEOFF = norm_group((0.352, 0.218, 0.431))
W_POPULARITY = norm_group((0.469, 0.325, 0.206))
W_SEASONALITY = norm_group((0.443, 0.557))
W_COMPOSITE = norm_group((0.281, 0.334, 0.385))

FLIGHT_G_PER_KM = {"very_short": 155.0, "short": 110.0, "medium": 75.0, "long": 95.0}
DRIVE_G_PER_KM = 96.0
TRAIN_G_PER_KM = 24.0
CORRECTION = 1.09


def read(name):
    with open(DATA / name, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def haversine(lat1, lon1, lat2, lon2):
    p1 = math.radians(lat1)
    p2 = math.radians(lat2)
    dp = math.radians(lat2 - lat1)
    dl = math.radians(lon2 - lon1)
    h = math.sin(dp / 2.0) ** 2 + math.cos(p1) * math.cos(p2) * math.sin(dl / 2.0) ** 2
    return 2.0 * 6371.0 * math.asin(math.sqrt(min(h, 1.0)))


def haul(gcd):
    if gcd < 500.0:
        return "very_short"
    if gcd < 1500.0:
        return "short"
    if gcd < 4000.0:
        return "medium"
    return "long"


def minmax(values, v):
    lo, hi = min(values), max(values)
    return 0.0 if hi == lo else (v - lo) / (hi - lo)


def gini(values):
    ordered = sorted(values)
    n = len(ordered)
    cum = []
    running = 0.0
    for v in ordered:
        running += v
        cum.append(running)
    total = cum[-1]
    acc = 0.0
    for i in range(n):
        acc += (i + 1) / n - cum[i] / total
    return (2.0 / n) * acc


def parse_price(text):
    cleaned = "".join(ch for ch in text.replace(",", "") if ch.isdigit() or ch in ".-")
    return float(cleaned)


def main():
    # --- corpus: cities with at least one airport, top N by population ---
    _, city_rows = read("cities.csv")
    cities = {
        r[0]: {"name": r[1], "country": r[2], "lat": float(r[3]), "lon": float(r[4]),
               "population": int(r[5]), "airports": []}
        for r in city_rows
    }
    _, airport_rows = read("airports.csv")
    for iata, city_id in airport_rows:
        if city_id in cities:
            cities[city_id]["airports"].append(iata)
    with_airport = [cid for cid, c in cities.items() if c["airports"]]
    with_airport.sort(key=lambda cid: (-cities[cid]["population"], cid))
    corpus = set(with_airport[:CORPUS_SIZE])
    print("corpus:", sorted(corpus))

    # --- routes: per (pair, mode) minimum distance, drive <= 1000 km ---
    _, route_rows = read("routes.csv")
    per_pair_mode = {}
    for origin, dest, mode, dist_s, dur_s, carrier, _fuel, source in route_rows:
        if origin not in corpus or dest not in corpus:
            continue
        if dist_s:
            distance = float(dist_s)
        else:
            a, b = cities[origin], cities[dest]
            distance = haversine(a["lat"], a["lon"], b["lat"], b["lon"])
        if mode == "drive" and distance > 1000.0:
            continue
        duration = float(dur_s)
        key = (origin, dest, mode)
        entry = (distance, duration, carrier or "", source)
        if key not in per_pair_mode or entry < per_pair_mode[key]:
            per_pair_mode[key] = entry

    # --- costs ---
    costs = json.loads((DATA / "costs.json").read_text(encoding="utf-8"))

    # --- per-destination trip options out of the origin ---
    options = {}
    for (origin, dest, mode), (distance, duration, carrier, _src) in sorted(per_pair_mode.items()):
        if origin != ORIGIN:
            continue
        if mode == "flight":
            emissions = FLIGHT_G_PER_KM[haul(distance)] * (distance * CORRECTION) / 1000.0
            kind = "domestic" if cities[origin]["country"] == cities[dest]["country"] else "international"
            rate = costs["airline_eur_per_km"][carrier][kind]
            cost = rate * (distance * CORRECTION)
        elif mode == "drive":
            emissions = DRIVE_G_PER_KM * distance / 1000.0
            cost = costs["fuel_eur_per_km_by_country"][cities[origin]["country"]] * distance
        else:
            emissions = TRAIN_G_PER_KM * distance / 1000.0
            cost = costs["train_eur_per_km"] * distance
        options.setdefault(dest, []).append(
            {"mode": mode, "time": duration, "em": emissions, "cost": cost}
        )

    mode_order = {"flight": 0, "drive": 1, "train": 2}
    tradeoff = {}
    best_mode = {}
    for dest, opts in options.items():
        opts.sort(key=lambda o: mode_order[o["mode"]])
        times = [o["time"] for o in opts]
        ems = [o["em"] for o in opts]
        cs = [o["cost"] for o in opts]
        w_t, w_e, w_c = W_TRADEOFF
        scored = []
        for o in opts:
            z = w_t * minmax(times, o["time"]) + w_e * minmax(ems, o["em"]) + w_c * minmax(cs, o["cost"])
            scored.append((z, mode_order[o["mode"]], o["mode"]))
        z_best = min(scored)
        tradeoff[dest] = z_best[0]
        best_mode[dest] = z_best[2]
        print(f"tradeoff {dest}: Z={z_best[0]!r} best={z_best[2]} scores={[s[0] for s in scored]}")

    # --- popularity ---
    _, pop_rows = read("popularity.csv")
    raw = {r[0]: {"poi": float(int(r[1])), "ugc": float(int(r[2]))} for r in pop_rows if r[0] in corpus}
    _, gt_rows = read("gt.csv")
    weekly = {}
    for city_id, _week, value in gt_rows:
        if city_id in raw:
            weekly.setdefault(city_id, []).append(float(value))
    gt_mean = {cid: sum(v) / len(v) for cid, v in weekly.items()}
    pois = [raw[c]["poi"] for c in raw]
    ugcs = [raw[c]["ugc"] for c in raw]
    gts = [gt_mean[c] for c in raw if c in gt_mean]
    w_poi, w_ugc, w_gt = W_POPULARITY
    rho = {}
    for cid in raw:
        p = minmax(pois, raw[cid]["poi"])
        u = minmax(ugcs, raw[cid]["ugc"])
        if cid in gt_mean:
            g = minmax(gts, gt_mean[cid])
            rho[cid] = w_poi * p + w_ugc * u + w_gt * g
        else:
            present = w_poi + w_ugc
            rho[cid] = (w_poi / present) * p + (w_ugc / present) * u
        print(f"popularity {cid}: rho={rho[cid]!r}")

    # --- seasonality for the queried month ---
    _, avc_rows = read("avc.csv")
    g_avc = {}
    for r in avc_rows:
        cid = r[0]
        if cid not in corpus or any(not cell.strip() for cell in r[1:]):
            continue
        counts = [float(c) for c in r[1:]]
        if sum(counts) > 0:
            g_avc[cid] = gini(counts)

    _, cal_rows = read("calendar.csv")
    per_day = {}
    for listing_id, city_id, date_s, avail, price_s in cal_rows:
        if city_id not in corpus:
            continue
        listings = per_day.setdefault((city_id, date_s), {})
        listings[listing_id] = (avail.lower() in ("t", "true", "1"), parse_price(price_s))
    daily = {}
    for (city_id, date_s), listings in per_day.items():
        available = [p for a, p in listings.values() if a]
        prices = available or [p for _, p in listings.values()]
        daily.setdefault(city_id, {})[date_s] = sum(prices) / len(prices)
    g_adr = {}
    for cid, by_date in daily.items():
        month_values = [v for d, v in sorted(by_date.items()) if int(d[5:7]) == MONTH]
        if len(month_values) >= 2:
            g_adr[cid] = gini(month_values)

    w_avc, w_adr = W_SEASONALITY
    sigma = {}
    for cid in corpus:
        a = g_avc.get(cid)
        d = g_adr.get(cid)
        if a is None and d is None:
            continue
        if a is None:
            sigma[cid] = d
        elif d is None:
            sigma[cid] = a
        else:
            sigma[cid] = w_avc * a + w_adr * d
        print(f"seasonality {cid}: g_avc={a!r} g_adr={d!r} sigma={sigma[cid]!r}")

    # --- labels: nearest-rank thresholds on the descending corpus ---
    def labels_for(values):
        descending = sorted(values.values(), reverse=True)
        n = len(descending)
        high_cut = descending[max(1, math.ceil(0.05 * n)) - 1]
        med_cut = descending[max(1, math.ceil(0.50 * n)) - 1]
        return {
            cid: "high" if v >= high_cut else "medium" if v >= med_cut else "low"
            for cid, v in values.items()
        }

    pop_labels = labels_for(rho)
    season_labels = labels_for(sigma)

    # --- composite and ranking ---
    w_z, w_p, w_s = W_COMPOSITE
    rows = []
    for dest in sorted(options):
        if dest == ORIGIN or dest not in rho or dest not in sigma:
            continue
        psi = w_z * tradeoff[dest] + w_p * rho[dest] + w_s * sigma[dest]
        rows.append((psi, cities[dest]["name"], dest))
        print(f"composite {dest}: psi={psi!r}")
    rows.sort()

    EXPECTED.mkdir(exist_ok=True)
    out = EXPECTED / "rank_ada_m7.csv"
    with open(out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["rank", "city_id", "city", "sfairness", "score", "tradeoff", "popularity",
             "seasonality", "popularity_label", "seasonality_label", "best_mode"]
        )
        for rank, (psi, name, dest) in enumerate(rows, start=1):
            writer.writerow(
                [rank, dest, name, psi, math.floor(psi * 100.0 + 0.5), tradeoff[dest],
                 rho[dest], sigma[dest], pop_labels[dest], season_labels[dest], best_mode[dest]]
            )
    print("wrote", out)


if __name__ == "__main__":
    main()
