"""Seeded synthetic OHP records for tests, benchmarks and the ``synth`` command."""

from __future__ import annotations

import csv
import io

import numpy as np

from .codes import Axis, Code
from .ingest import EXPOSURE_FIELDS, FIELDS, OhpRecord

CORTEGE_SIZE_P = (0.45, 0.30, 0.15, 0.07, 0.03)


def _code(axis: Axis, index: int, width: int = 2) -> Code:
    # three-level hierarchy: chapter.section.item
    segs = (index // 100, (index // 10) % 10, index % 10)
    return Code(axis, tuple(f"{s:0{width}d}" for s in segs))


def zipf_probs(n: int, s: float) -> np.ndarray:
    p = np.arange(1, n + 1, dtype=float) ** -s
    return p / p.sum()


def synthetic_records(
    n_records: int,
    n_exposures: int = 1500,
    n_diseases: int = 100,
    n_occupations: int = 390,
    n_sectors: int = 61,
    n_types: int | None = None,
    zipf_s: float = 1.0,
    years: tuple[int, int] = (2002, 2007),
    seed: int = 0,
) -> list[OhpRecord]:
    """Records drawn from a catalogue of OHP types.

    Exposure and disease codes within a type, and the types themselves, have
    Zipf popularity, so identical OHP recur the way they do in surveillance
    data (one asbestos/lung-cancer type accounts for thousands of reports).
    ``n_types`` defaults to a fifth of ``n_records``.
    """
    rng = np.random.default_rng(seed)
    if n_types is None:
        n_types = max(1, n_records // 5)
    exp_p = zipf_probs(n_exposures, zipf_s)
    sizes = np.minimum(rng.choice(np.arange(1, 6), size=n_types, p=CORTEGE_SIZE_P), n_exposures)
    type_disease = rng.choice(n_diseases, size=n_types, p=zipf_probs(n_diseases, zipf_s))
    draws = rng.choice(n_exposures, size=(n_types, 12), p=exp_p)
    exp_codes = [_code(Axis.EXPOSURE, i) for i in range(n_exposures)]
    dis_codes = [Code(Axis.DISEASE, (f"D{i:03d}",)) for i in range(n_diseases)]
    occ_codes = [Code(Axis.OCCUPATION, (f"{i:04d}",)) for i in range(n_occupations)]
    sec_codes = [Code(Axis.SECTOR, (f"{i:02d}",)) for i in range(n_sectors)]
    corteges = []
    for t in range(n_types):
        picked = []
        for e in draws[t].tolist():
            if e not in picked:
                picked.append(e)
                if len(picked) == sizes[t]:
                    break
        corteges.append(frozenset(exp_codes[e] for e in picked))

    type_rank = rng.permutation(n_types)
    which = type_rank[rng.choice(n_types, size=n_records, p=zipf_probs(n_types, zipf_s))]
    occupations = rng.integers(0, n_occupations, size=n_records).tolist()
    sectors = rng.integers(0, n_sectors, size=n_records).tolist()
    yrs = rng.integers(years[0], years[1] + 1, size=n_records).tolist()
    return [
        OhpRecord(
            record_id=f"S{r:07d}",
            year=yrs[r],
            disease=dis_codes[type_disease[t]],
            exposures=corteges[t],
            occupation=occ_codes[occupations[r]],
            sector=sec_codes[sectors[r]],
        )
        for r, t in enumerate(which.tolist())
    ]


def small_random_records(
    rng: np.random.Generator,
    n_records: int,
    n_exposures: int,
    n_diseases: int = 3,
    max_cortege: int = 5,
) -> list[OhpRecord]:
    """Uniformly random small datasets for oracle comparisons."""
    records = []
    for r in range(n_records):
        size = int(rng.integers(1, min(max_cortege, n_exposures) + 1))
        picked = rng.choice(n_exposures, size=size, replace=False)
        records.append(
            OhpRecord(
                record_id=f"R{r}",
                year=int(rng.integers(2002, 2008)),
                disease=Code(Axis.DISEASE, (f"D{int(rng.integers(n_diseases))}",)),
                exposures=frozenset(Code(Axis.EXPOSURE, (f"E{int(e):02d}",)) for e in picked),
                occupation=Code(Axis.OCCUPATION, (f"O{int(rng.integers(4))}",)),
                sector=Code(Axis.SECTOR, (f"S{int(rng.integers(3))}",)),
            )
        )
    return records


def records_to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FIELDS)
    for rec in records:
        exps = [c.raw for c in sorted(rec.exposures)]
        exps += [""] * (len(EXPOSURE_FIELDS) - len(exps))
        writer.writerow(
            [rec.record_id, rec.year, rec.disease.raw, *exps, rec.occupation.raw, rec.sector.raw]
        )
    return buf.getvalue()
