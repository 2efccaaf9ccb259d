from pathlib import Path

import pytest

from exposome.codes import load_tables
from exposome.ingest import dedupe, parse_records
from exposome.network import ExposomeParams, build

ROOT = Path(__file__).resolve().parents[1]
DATA = ROOT / "data"
FIXTURES = DATA / "fixtures"
TABLES = DATA / "tables"


@pytest.fixture(scope="session")
def tables():
    return load_tables(TABLES)


def load(name, tables=None):
    records, rejects = parse_records(FIXTURES / name, tables)
    assert not rejects, rejects
    return records


@pytest.fixture(scope="session")
def nhl_records(tables):
    return load("nhl_like.csv", tables)


@pytest.fixture(scope="session")
def nhl_graph(nhl_records):
    return build(dedupe(nhl_records), ExposomeParams())
