"""Great-circle distances and flight haul classification."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

EARTH_RADIUS_KM = 6371.0

# Detours and holding patterns make real flight paths longer than the
# great-circle line; applied to emission and cost distances only.
FLIGHT_DISTANCE_CORRECTION = 1.09

MAX_GREAT_CIRCLE_KM = math.pi * EARTH_RADIUS_KM


class HaulCategory(IntEnum):
    """Flight distance class; order matters (shorter haul < longer haul)."""

    VERY_SHORT = 0
    SHORT = 1
    MEDIUM = 2
    LONG = 3

    @property
    def label(self) -> str:
        return self.name.lower()


# Half-open bands over uncorrected great-circle distance, km.
HAUL_BANDS = (
    (HaulCategory.VERY_SHORT, 0.0, 500.0),
    (HaulCategory.SHORT, 500.0, 1500.0),
    (HaulCategory.MEDIUM, 1500.0, 4000.0),
    (HaulCategory.LONG, 4000.0, math.inf),
)


@dataclass(frozen=True)
class GeoPoint:
    """A latitude/longitude pair in degrees."""

    lat: float
    lon: float

    def __post_init__(self) -> None:
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude out of range [-90, 90]: {self.lat}")
        if not -180.0 <= self.lon <= 180.0:
            raise ValueError(f"longitude out of range [-180, 180]: {self.lon}")


def great_circle_km(a: GeoPoint, b: GeoPoint) -> float:
    """Haversine distance in km on a sphere of mean Earth radius."""
    lat1 = math.radians(a.lat)
    lat2 = math.radians(b.lat)
    dlat = math.radians(b.lat - a.lat)
    dlon = math.radians(b.lon - a.lon)
    h = math.sin(dlat / 2.0) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin(dlon / 2.0) ** 2
    # Guard against rounding pushing h a hair above 1 for near-antipodal pairs.
    return 2.0 * EARTH_RADIUS_KM * math.asin(math.sqrt(min(h, 1.0)))


def corrected_flight_km(gcd_km: float, correction: float = FLIGHT_DISTANCE_CORRECTION) -> float:
    """Flown distance estimate: great-circle distance times the route correction."""
    if gcd_km < 0:
        raise ValueError(f"distance must be nonnegative, got {gcd_km}")
    return gcd_km * correction


def haul_category(gcd_km: float) -> HaulCategory:
    """Classify a flight by its uncorrected great-circle distance."""
    if gcd_km < 0:
        raise ValueError(f"distance must be nonnegative, got {gcd_km}")
    for category, lo, hi in HAUL_BANDS:
        if lo <= gcd_km < hi:
            return category
    return HaulCategory.LONG
