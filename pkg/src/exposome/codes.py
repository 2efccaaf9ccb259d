"""Hierarchical classification codes, classification tables and coverage."""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass, field
from decimal import ROUND_DOWN, ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Iterable, Mapping

from .errors import CoverageDomain, EmptyCode, EmptySegment, IoFailure, TableFormatError, UnknownAxis


class Axis(enum.Enum):
    DISEASE = "disease"
    EXPOSURE = "exposure"
    OCCUPATION = "occupation"
    SECTOR = "sector"

    @classmethod
    def parse(cls, text: str) -> "Axis":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise UnknownAxis(f"unknown axis {text!r}") from None


_AXIS_ORDER = {axis: i for i, axis in enumerate(Axis)}

# Total number of codes available per classification, used when a table
# file does not declare its own size.
DEFAULT_DECLARED_SIZE = {
    Axis.DISEASE: 1716,
    Axis.EXPOSURE: 6722,
    Axis.OCCUPATION: 390,
    Axis.SECTOR: 61,
}

DEFAULT_SEPARATOR = "."


@dataclass(frozen=True)
class Code:
    """A code on one axis, stored as its hierarchy levels (most general first)."""

    axis: Axis
    segments: tuple[str, ...]
    separator: str = field(default=DEFAULT_SEPARATOR, compare=False, repr=False)

    def __post_init__(self):
        if not self.segments:
            raise EmptyCode("code has no segments")
        if any(not s for s in self.segments):
            raise EmptySegment(f"empty segment in {self.segments!r}")

    @property
    def raw(self) -> str:
        return self.separator.join(self.segments)

    @property
    def depth(self) -> int:
        return len(self.segments)

    def sort_key(self):
        return (_AXIS_ORDER[self.axis], self.segments)

    def __lt__(self, other: "Code") -> bool:
        if not isinstance(other, Code):
            return NotImplemented
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return self.raw


def parse_code(axis: Axis, text: str, separator: str = DEFAULT_SEPARATOR) -> Code:
    """Split ``text`` on ``separator`` into an uppercased, trimmed Code.

    >>> parse_code(Axis.EXPOSURE, " 02.03.01 ").segments
    ('02', '03', '01')
    """
    if text is None or not text.strip():
        raise EmptyCode(f"blank {axis.value} code")
    text = text.strip()
    if separator:
        parts = text.split(separator)
    else:
        parts = [text]
    segments = tuple(p.strip().upper() for p in parts)
    if any(not s for s in segments):
        raise EmptySegment(f"empty segment in {axis.value} code {text!r}")
    return Code(axis, segments, separator)


def aggregate(code: Code, level: int) -> Code:
    """Truncate ``code`` to its first ``level`` hierarchy levels."""
    if level < 1:
        raise ValueError(f"aggregation level must be >= 1, got {level}")
    if level >= code.depth:
        return code
    return Code(code.axis, code.segments[:level], code.separator)


def coverage(used_distinct: int, available: int) -> float:
    """Percentage of the code space in use, rounded to two decimals."""
    if available <= 0 or used_distinct < 0 or used_distinct > available:
        raise CoverageDomain(
            f"coverage needs 0 <= used <= available and available > 0 "
            f"(got used={used_distinct}, available={available})"
        )
    pct = Decimal(100 * used_distinct) / Decimal(available)
    return float(pct.quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def format_fixed(value: float, decimals: int = 1, truncate: bool = False) -> str:
    """Fixed-point text for ``value``; half-up unless ``truncate`` is set.

    Some published summary tables truncate shares (109/1304 -> 8.3).
    """
    quantum = Decimal(1).scaleb(-decimals)
    mode = ROUND_DOWN if truncate else ROUND_HALF_UP
    return str(Decimal(repr(value)).quantize(quantum, rounding=mode))


def distinct_count(codes: Iterable[Code], level: int | None = None) -> int:
    if level is None:
        return len(set(codes))
    return len({aggregate(c, level) for c in codes})


@dataclass(frozen=True)
class ClassificationTable:
    axis: Axis
    entries: Mapping[Code, str]
    declared_size: int
    separator: str = DEFAULT_SEPARATOR

    def __post_init__(self):
        if self.declared_size <= 0:
            raise TableFormatError(f"declared_size must be positive, got {self.declared_size}")
        if len(self.entries) > self.declared_size:
            raise TableFormatError(
                f"{self.axis.value} table has {len(self.entries)} entries "
                f"but declares only {self.declared_size}"
            )

    @classmethod
    def default(cls, axis: Axis) -> "ClassificationTable":
        return cls(axis, {}, DEFAULT_DECLARED_SIZE[axis])

    def parse(self, text: str) -> Code:
        return parse_code(self.axis, text, self.separator)

    def knows(self, code: Code) -> bool:
        """True when the table is empty (no validation) or lists the code or an ancestor."""
        if not self.entries:
            return True
        return any(aggregate(code, k) in self.entries for k in range(1, code.depth + 1))

    def label(self, code: Code) -> str | None:
        return self.entries.get(code)


def read_table(source) -> ClassificationTable:
    """Read a classification table file.

    First line: ``axis,declared_size,separator`` (the values; an optional
    literal header line with those names may precede it). Remaining lines are
    ``code,label`` rows. An empty declared_size falls back to the default.
    """
    if isinstance(source, (str, Path)) and Path(source).exists():
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source if isinstance(source, str) else source.read()
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if not rows:
        raise TableFormatError("empty classification table")
    head = [c.strip() for c in rows.pop(0)]
    if [h.lower() for h in head[:3]] == ["axis", "declared_size", "separator"]:
        if not rows:
            raise TableFormatError("table header without values")
        head = [c.strip() for c in rows.pop(0)]
    head += [""] * (3 - len(head))
    axis = Axis.parse(head[0])
    size = int(head[1]) if head[1] else DEFAULT_DECLARED_SIZE[axis]
    sep = head[2] if head[2] else DEFAULT_SEPARATOR
    if rows and [c.strip().lower() for c in rows[0][:2]] == ["code", "label"]:
        rows.pop(0)
    entries = {}
    for row in rows:
        code = parse_code(axis, row[0], sep)
        entries[code] = ",".join(row[1:]).strip()
    return ClassificationTable(axis, entries, size, sep)


def load_tables(directory=None) -> dict[Axis, ClassificationTable]:
    """Load ``<axis>.csv`` tables from a directory; missing axes get defaults."""
    tables = {axis: ClassificationTable.default(axis) for axis in Axis}
    if directory is None:
        return tables
    directory = Path(directory)
    if not directory.is_dir():
        raise IoFailure(f"table directory {directory} does not exist")
    for axis in Axis:
        path = directory / f"{axis.value}.csv"
        if path.exists():
            table = read_table(path)
            if table.axis is not axis:
                raise TableFormatError(f"{path} declares axis {table.axis.value}")
            tables[axis] = table
    return tables


@dataclass(frozen=True)
class CoverageRow:
    axis: Axis
    used: int
    available: int

    @property
    def percent(self) -> float:
        return coverage(self.used, self.available)


def coverage_table(records, tables: Mapping[Axis, ClassificationTable]) -> list[CoverageRow]:
    """Distinct codes used per axis over ``records`` against each table's size."""
    used = {axis: set() for axis in Axis}
    for rec in records:
        used[Axis.DISEASE].add(rec.disease)
        used[Axis.EXPOSURE].update(rec.exposures)
        used[Axis.OCCUPATION].add(rec.occupation)
        used[Axis.SECTOR].add(rec.sector)
    return [CoverageRow(axis, len(used[axis]), tables[axis].declared_size) for axis in Axis]
