from __future__ import annotations

from pathlib import Path

import pytest

import overlapnet

DATA = Path(overlapnet.__file__).parent / "data"

KARATE = DATA / "karate.txt"
LESMIS = DATA / "lesmis.txt"
DOLPHINS = DATA / "dolphins.txt"          # not vendored; fetched by script
KARATE_DIVISIONS = DATA / "karate_divisions.div"

DOLPHINS_HINT = (
    "dolphins.txt is not bundled (no redistributable copy was available"
    " when this package was assembled); run scripts/fetch_dolphins.py"
    " to download and validate it, then re-run the tests"
)


@pytest.fixture
def karate_graph():
    return overlapnet.load_edge_list(KARATE, default_weight=0.5)


@pytest.fixture
def fixture_divisions():
    return overlapnet.import_divisions(KARATE_DIVISIONS)
