"""Reading OHP record files and collapsing identical OHP into weighted nodes."""

from __future__ import annotations

import csv
import enum
import io
import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .codes import Axis, ClassificationTable, Code, aggregate
from .errors import ExposomeError

MAX_EXPOSURES = 5
EXPOSURE_FIELDS = tuple(f"exposure{i}" for i in range(1, MAX_EXPOSURES + 1))
FIELDS = ("record_id", "year", "disease", *EXPOSURE_FIELDS, "occupation", "sector")
DEFAULT_YEAR_RANGE = (1990, 2100)


class KeyMode(enum.Enum):
    CORTEGE = "cortege"
    STRICT = "strict"


@dataclass(frozen=True)
class OhpRecord:
    record_id: str
    year: int
    disease: Code
    exposures: frozenset
    occupation: Code
    sector: Code

    def __post_init__(self):
        if not 1 <= len(self.exposures) <= MAX_EXPOSURES:
            raise ValueError(f"record {self.record_id}: {len(self.exposures)} exposures")


@dataclass(frozen=True)
class Reject:
    row: int
    reason: str


@dataclass(frozen=True, order=True)
class NodeKey:
    disease: Code
    exposures: tuple  # sorted Codes
    strict_extra: tuple | None = None  # (occupation, sector) in strict mode

    def label(self) -> str:
        return " x ".join([self.disease.raw, *(c.raw for c in self.exposures)])


@dataclass(frozen=True)
class Node:
    id: int
    key: NodeKey
    weight: int
    years: Counter = field(compare=False)
    occupations: Counter = field(compare=False)
    sectors: Counter = field(compare=False)

    @property
    def disease(self) -> Code:
        return self.key.disease

    @property
    def cortege(self) -> tuple:
        return self.key.exposures

    def label(self) -> str:
        return self.key.label()


class _RowError(ExposomeError):
    pass


def _read_rows(source) -> list[dict]:
    if isinstance(source, Path) or (
        isinstance(source, str) and "\n" not in source and Path(source).exists()
    ):
        text = Path(source).read_text(encoding="utf-8")
    elif isinstance(source, str):
        text = source
    else:
        text = source.read()
    if text.lstrip().startswith("{"):
        rows = []
        for line in text.splitlines():
            if line.strip():
                try:
                    rows.append(json.loads(line))
                except json.JSONDecodeError as exc:
                    rows.append({"__error__": f"Malformed: {exc.msg}"})
        return rows
    reader = csv.DictReader(io.StringIO(text))
    return list(reader)


def _field(row: Mapping, name: str) -> str:
    value = row.get(name)
    if value is None or not str(value).strip():
        raise _RowError(f"MissingField: {name}")
    return str(value).strip()


def _exposure_texts(row: Mapping) -> list[str]:
    raw = []
    if "exposures" in row and row["exposures"] is not None:
        value = row["exposures"]
        raw.extend(value if isinstance(value, list) else str(value).split(";"))
    for name in EXPOSURE_FIELDS:
        value = row.get(name)
        if value is not None:
            raw.extend(str(value).split(";"))
    return [t.strip() for t in raw if str(t).strip()]


def _code(table: ClassificationTable, text: str, level: int | None) -> Code:
    try:
        code = table.parse(text)
    except ExposomeError as exc:
        raise _RowError(f"BadCode: {table.axis.value} {text!r} ({exc.code})") from None
    if not table.knows(code):
        raise _RowError(f"BadCode: {table.axis.value} {text!r} not in table")
    return aggregate(code, level) if level else code


def parse_records(
    source,
    tables: Mapping[Axis, ClassificationTable] | None = None,
    agg_level: Mapping[Axis, int] | None = None,
    year_range: tuple[int, int] = DEFAULT_YEAR_RANGE,
) -> tuple[list[OhpRecord], list[Reject]]:
    """Parse a CSV or JSON-lines record file.

    Bad rows never abort the parse; they come back as ``Reject`` entries
    (1-based data row numbers, header excluded).
    """
    tables = dict(tables or {})
    for axis in Axis:
        tables.setdefault(axis, ClassificationTable.default(axis))
    agg_level = dict(agg_level or {})
    records, rejects = [], []
    seen_ids = set()
    for rowno, row in enumerate(_read_rows(source), start=1):
        try:
            if "__error__" in row:
                raise _RowError(row["__error__"])
            record_id = _field(row, "record_id")
            year_text = _field(row, "year")
            disease_text = _field(row, "disease")
            exposure_texts = _exposure_texts(row)
            if not exposure_texts:
                raise _RowError("MissingField: exposure1")
            occupation_text = _field(row, "occupation")
            sector_text = _field(row, "sector")
            try:
                year = int(year_text)
            except ValueError:
                raise _RowError(f"BadYear: {year_text!r}") from None
            if not year_range[0] <= year <= year_range[1]:
                raise _RowError(f"BadYear: {year} outside {year_range[0]}..{year_range[1]}")
            disease = _code(tables[Axis.DISEASE], disease_text, agg_level.get(Axis.DISEASE))
            exposures = frozenset(
                _code(tables[Axis.EXPOSURE], t, agg_level.get(Axis.EXPOSURE))
                for t in exposure_texts
            )
            if len(exposures) > MAX_EXPOSURES:
                raise _RowError(f"TooManyExposures: {len(exposures)} distinct")
            occupation = _code(tables[Axis.OCCUPATION], occupation_text, agg_level.get(Axis.OCCUPATION))
            sector = _code(tables[Axis.SECTOR], sector_text, agg_level.get(Axis.SECTOR))
            if record_id in seen_ids:
                raise _RowError(f"DuplicateId: {record_id}")
        except _RowError as exc:
            rejects.append(Reject(rowno, str(exc)))
            continue
        seen_ids.add(record_id)
        records.append(OhpRecord(record_id, year, disease, exposures, occupation, sector))
    return records, rejects


def write_rejects(path, rejects: Iterable[Reject]) -> Path:
    """Write the ``<input>.rejects`` sidecar next to ``path``."""
    out = Path(f"{path}.rejects")
    with out.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["row", "reason"])
        for rej in rejects:
            writer.writerow([rej.row, rej.reason])
    return out


def node_key(record: OhpRecord, key_mode: KeyMode = KeyMode.CORTEGE) -> NodeKey:
    extra = (record.occupation, record.sector) if key_mode is KeyMode.STRICT else None
    return NodeKey(record.disease, tuple(sorted(record.exposures)), extra)


def dedupe(records: Iterable[OhpRecord], key_mode: KeyMode = KeyMode.CORTEGE) -> list[Node]:
    """One node per distinct key, ids assigned in order of first appearance."""
    groups: dict[NodeKey, list[OhpRecord]] = {}
    for rec in records:
        groups.setdefault(node_key(rec, key_mode), []).append(rec)
    nodes = []
    for i, (key, recs) in enumerate(groups.items()):
        nodes.append(
            Node(
                id=i,
                key=key,
                weight=len(recs),
                years=Counter(r.year for r in recs),
                occupations=Counter(r.occupation for r in recs),
                sectors=Counter(r.sector for r in recs),
            )
        )
    return nodes
