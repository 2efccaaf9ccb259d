import pytest
from hypothesis import given
from hypothesis import strategies as st

from exposome.codes import (
    Axis,
    ClassificationTable,
    Code,
    aggregate,
    coverage,
    distinct_count,
    format_fixed,
    load_tables,
    parse_code,
    read_table,
)
from exposome.errors import CoverageDomain, EmptyCode, EmptySegment, TableFormatError

from conftest import TABLES


def test_four_axes():
    assert len(list(Axis)) == 4


def test_parse_code_splits_segments():
    code = parse_code(Axis.EXPOSURE, "02.03.01", ".")
    assert code.segments == ("02", "03", "01")
    assert code.raw == "02.03.01"


def test_parse_single_segment_disease():
    assert parse_code(Axis.DISEASE, "J92", ".").segments == ("J92",)


def test_parse_canonicalises():
    code = parse_code(Axis.DISEASE, "  c34 ")
    assert code == Code(Axis.DISEASE, ("C34",))
    assert code.raw == "C34"


def test_parse_rejects_empty_segment():
    with pytest.raises(EmptySegment):
        parse_code(Axis.EXPOSURE, "02..01", ".")


@pytest.mark.parametrize("text", ["", "   ", None])
def test_parse_rejects_blank(text):
    with pytest.raises(EmptyCode):
        parse_code(Axis.EXPOSURE, text)


def test_custom_separator():
    code = parse_code(Axis.SECTOR, "D/24", "/")
    assert code.segments == ("D", "24")
    assert code.raw == "D/24"


def test_equality_ignores_separator_but_not_axis():
    assert Code(Axis.EXPOSURE, ("1", "2"), ".") == Code(Axis.EXPOSURE, ("1", "2"), "/")
    assert Code(Axis.EXPOSURE, ("1",)) != Code(Axis.SECTOR, ("1",))


def test_aggregate_prefix():
    code = Code(Axis.EXPOSURE, ("02", "03", "01"))
    assert aggregate(code, 2).segments == ("02", "03")
    assert aggregate(code, 5) == code
    assert aggregate(code, 2).axis is Axis.EXPOSURE


def test_aggregate_distinct_count():
    codes = [Code(Axis.EXPOSURE, s) for s in [("01", "01"), ("01", "02"), ("02", "01")]]
    assert distinct_count(codes, 1) == 2
    assert distinct_count(codes) == 3


def test_aggregate_rejects_level_zero():
    with pytest.raises(ValueError):
        aggregate(Code(Axis.EXPOSURE, ("1",)), 0)


segments = st.lists(st.text(alphabet="0123456789AB", min_size=1, max_size=3), min_size=1, max_size=5)


@given(segments, st.integers(1, 6))
def test_aggregate_idempotent(segs, level):
    code = Code(Axis.EXPOSURE, tuple(segs))
    once = aggregate(code, level)
    assert aggregate(once, level) == once


@given(st.lists(segments, max_size=20), st.integers(1, 6))
def test_aggregate_never_adds_codes(many, level):
    codes = [Code(Axis.EXPOSURE, tuple(s)) for s in many]
    assert distinct_count(codes, level) <= distinct_count(codes)


@given(segments)
def test_raw_round_trip(segs):
    code = Code(Axis.EXPOSURE, tuple(segs))
    assert parse_code(Axis.EXPOSURE, code.raw) == code


def test_coverage_values_from_table_1():
    assert coverage(243, 385) == 63.12
    assert coverage(56, 62) == 90.32
    assert coverage(109, 1304) == 8.36
    assert coverage(0, 1716) == 0.0


@pytest.mark.parametrize("used,available", [(5, 4), (0, 0), (-1, 10)])
def test_coverage_domain(used, available):
    with pytest.raises(CoverageDomain):
        coverage(used, available)


@given(st.integers(1, 10_000), st.data())
def test_coverage_monotone_and_bounded(available, data):
    a = data.draw(st.integers(0, available))
    b = data.draw(st.integers(a, available))
    assert 0 <= coverage(a, available) <= coverage(b, available) <= 100


def test_format_fixed_modes():
    assert format_fixed(8.36, 1) == "8.4"
    assert format_fixed(8.36, 1, truncate=True) == "8.3"
    assert format_fixed(0.19645, 2) == "0.20"


def test_read_table_with_header_names():
    table = read_table("axis,declared_size,separator\nexposure,10,/\ncode,label\n2/01,Benzene\n")
    assert table.declared_size == 10
    assert table.label(parse_code(Axis.EXPOSURE, "2/01", "/")) == "Benzene"


def test_read_table_default_size():
    table = read_table("sector,,\n24,Chemicals\n")
    assert table.declared_size == 61
    assert table.separator == "."


def test_table_entries_bounded_by_declared_size():
    with pytest.raises(TableFormatError):
        read_table("sector,1,.\n24,Chemicals\n27,Metals\n")
    with pytest.raises(TableFormatError):
        ClassificationTable(Axis.SECTOR, {}, 0)


def test_load_shipped_tables():
    tables = load_tables(TABLES)
    assert tables[Axis.EXPOSURE].declared_size == 6722
    assert tables[Axis.OCCUPATION].declared_size == 390
    benzene = parse_code(Axis.EXPOSURE, "2.01")
    assert tables[Axis.EXPOSURE].label(benzene) == "Benzene"


def test_defaults_without_directory():
    sizes = {axis: t.declared_size for axis, t in load_tables(None).items()}
    assert sizes == {Axis.DISEASE: 1716, Axis.EXPOSURE: 6722, Axis.OCCUPATION: 390, Axis.SECTOR: 61}


def test_table_knows_descendants_of_listed_chapters():
    tables = load_tables(TABLES)
    exp = tables[Axis.EXPOSURE]
    assert exp.knows(parse_code(Axis.EXPOSURE, "9.12"))
    assert not exp.knows(parse_code(Axis.EXPOSURE, "5.01"))
    assert ClassificationTable.default(Axis.EXPOSURE).knows(parse_code(Axis.EXPOSURE, "5.01"))
