"""Destination sustainability scoring engine.

Computes, for every candidate city reachable from an origin in a travel
month, a transport emissions trade-off index, a popularity index, and a
seasonal demand index, composites them into a single societal-fairness
value, and serves ranked recommendations via CLI and HTTP API.
"""

__version__ = "0.1.0"

from .ingest import DatasetSnapshot, ingest_directory, load_snapshot, save_snapshot
from .sfairness import Recommendation, rank_destinations
from .weights import WeightConfig, default_weights

__all__ = [
    "DatasetSnapshot",
    "Recommendation",
    "WeightConfig",
    "default_weights",
    "ingest_directory",
    "load_snapshot",
    "rank_destinations",
    "save_snapshot",
]
