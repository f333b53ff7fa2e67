from __future__ import annotations

from pathlib import Path

import pytest

from sfair.ingest import ingest_directory

GOLDEN_DIR = Path(__file__).resolve().parent / "golden"
GOLDEN_DATA = GOLDEN_DIR / "data"
GOLDEN_EXPECTED = GOLDEN_DIR / "expected"


@pytest.fixture(scope="session")
def golden_data_dir() -> Path:
    return GOLDEN_DATA


@pytest.fixture(scope="session")
def golden_expected_dir() -> Path:
    return GOLDEN_EXPECTED


@pytest.fixture(scope="session")
def golden_snapshot():
    snapshot, report = ingest_directory(GOLDEN_DATA, corpus_size=5)
    assert snapshot is not None, [i.format() for i in report.errors]
    return snapshot
