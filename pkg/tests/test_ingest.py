import json
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exposome.codes import Axis, Code, parse_code
from exposome.ingest import KeyMode, OhpRecord, dedupe, parse_records, write_rejects
from exposome.synth import small_random_records

from conftest import FIXTURES, load

HEADER = "record_id,year,disease,exposure1,exposure2,exposure3,exposure4,exposure5,occupation,sector\n"


def exp(text):
    return parse_code(Axis.EXPOSURE, text)


def rec(rid, disease="C85", exposures=("3.01",), occupation="3115", sector="24", year=2005):
    return OhpRecord(
        rid,
        year,
        parse_code(Axis.DISEASE, disease),
        frozenset(exp(e) for e in exposures),
        parse_code(Axis.OCCUPATION, occupation),
        parse_code(Axis.SECTOR, sector),
    )


def test_duplicate_exposures_collapse():
    records, rejects = parse_records(HEADER + "R1,2005,C85,X;X;Y,,,,,3115,24\n")
    assert not rejects
    assert records[0].exposures == {exp("X"), exp("Y")}


def test_six_distinct_exposures_rejected():
    records, rejects = parse_records(HEADER + "R1,2005,C85,A;F,B,C,D,E,3115,24\n")
    assert records == []
    assert rejects[0].row == 1
    assert rejects[0].reason.startswith("TooManyExposures")


def test_parse10_fixture(tables):
    records, rejects = parse_records(FIXTURES / "parse10.csv", tables)
    # P03 has no disease, P05 has year "20x5"
    assert len(records) == 8
    assert [(r.row, r.reason.split(":")[0]) for r in rejects] == [(3, "MissingField"), (5, "BadYear")]
    by_id = {r.record_id: r for r in records}
    assert by_id["P06"].disease == Code(Axis.DISEASE, ("C85",))
    assert by_id["P06"].exposures == {exp("3.02")}
    assert by_id["P09"].exposures == {exp("3.01")}
    assert by_id["P10"].exposures == {exp("2.01"), exp("2.03")}


def test_accepted_plus_rejected_is_input_rows(tables):
    records, rejects = parse_records(FIXTURES / "parse10.csv", tables)
    assert len(records) + len(rejects) == 10


@pytest.mark.parametrize(
    "row,reason",
    [
        ("R1,2005,C85,,,,,,3115,24", "MissingField"),
        ("R1,1989,C85,3.01,,,,,3115,24", "BadYear"),
        ("R1,2005,C85,3..01,,,,,3115,24", "BadCode"),
        ("R1,2005,C85,5.01,,,,,3115,24", "BadCode"),
        ("R1,2005,C85,3.01,,,,,,24", "MissingField"),
    ],
)
def test_row_errors(tables, row, reason):
    records, rejects = parse_records(HEADER + row + "\n", tables)
    assert not records
    assert rejects[0].reason.startswith(reason)


def test_duplicate_record_id_rejected():
    text = HEADER + "R1,2005,C85,3.01,,,,,3115,24\nR1,2006,C85,3.01,,,,,3115,24\n"
    records, rejects = parse_records(text)
    assert len(records) == 1 and rejects[0].reason.startswith("DuplicateId")


def test_aggregation_at_parse():
    records, _ = parse_records(HEADER + "R1,2005,C85,02.03.01;02.03.07,,,,,3115,24\n", agg_level={Axis.EXPOSURE: 2})
    assert records[0].exposures == {Code(Axis.EXPOSURE, ("02", "03"))}


def test_json_lines_input():
    lines = [
        {"record_id": "J1", "year": 2004, "disease": "C85", "exposures": ["3.01", "2.01"], "occupation": "3115", "sector": "24"},
        {"record_id": "J2", "year": 2004, "disease": "C85", "exposure1": "3.01", "occupation": "3115", "sector": "24"},
        {"record_id": "J3", "year": 2004, "disease": "C85", "occupation": "3115", "sector": "24"},
    ]
    records, rejects = parse_records("\n".join(json.dumps(x) for x in lines) + "\n")
    assert [r.record_id for r in records] == ["J1", "J2"]
    assert rejects[0].row == 3 and rejects[0].reason.startswith("MissingField")


def test_rejects_sidecar(tmp_path):
    src = tmp_path / "in.csv"
    src.write_text(HEADER + "R1,2005,,3.01,,,,,3115,24\n")
    _, rejects = parse_records(src)
    out = write_rejects(src, rejects)
    assert out.name == "in.csv.rejects"
    assert out.read_text().splitlines() == ["row,reason", "1,MissingField: disease"]


def test_dedupe_order_irrelevant():
    nodes = dedupe([rec("a", exposures=("A", "B")), rec("b", exposures=("B", "A"))])
    assert len(nodes) == 1 and nodes[0].weight == 2


def test_dedupe_key_modes():
    records = [rec("a", occupation="3115"), rec("b", occupation="7231")]
    cortege = dedupe(records, KeyMode.CORTEGE)
    assert len(cortege) == 1
    assert cortege[0].weight == 2
    assert sum(cortege[0].occupations.values()) == 2 and len(cortege[0].occupations) == 2
    assert len(dedupe(records, KeyMode.STRICT)) == 2


def test_dedupe12_fixture(tables):
    nodes = dedupe(load("dedupe12.csv", tables))
    assert [n.id for n in nodes] == list(range(7))
    assert [n.weight for n in nodes] == [3, 2, 2, 2, 1, 1, 1]
    assert nodes[0].cortege == (exp("3.01"),)
    assert nodes[6].disease == Code(Axis.DISEASE, ("C83",))


def test_node_attribute_multisets(tables):
    nodes = dedupe(load("dedupe12.csv", tables))
    n0 = nodes[0]
    assert n0.years == Counter({2002: 1, 2003: 1, 2005: 1})
    for n in nodes:
        assert n.weight == sum(n.years.values()) == sum(n.occupations.values()) == sum(n.sectors.values())


records_strategy = st.integers(0, 2**32 - 1).map(
    lambda seed: small_random_records(np.random.default_rng(seed), 25, 6)
)


@settings(max_examples=60, deadline=None)
@given(records_strategy, st.randoms(use_true_random=False))
def test_dedupe_properties(records, rnd):
    for mode in KeyMode:
        nodes = dedupe(records, mode)
        assert sum(n.weight for n in nodes) == len(records)
        shuffled = list(records)
        rnd.shuffle(shuffled)
        assert {n.key: n.weight for n in nodes} == {n.key: n.weight for n in dedupe(shuffled, mode)}
    assert len(dedupe(records, KeyMode.STRICT)) >= len(dedupe(records, KeyMode.CORTEGE))
