"""Regenerate the seeded fixture files under data/fixtures.

    python3 scripts/make_fixtures.py

synthetic30.csv   30 random records over a small exposure vocabulary
temporal77.csv    62 records for 2002-2006, then 15 in 2007: 10 with keys never
                  seen before (all distinct) and 5 repeating 5 distinct old keys
"""

from pathlib import Path

import numpy as np

from exposome.codes import Axis, Code
from exposome.ingest import OhpRecord, node_key
from exposome.synth import records_to_csv, small_random_records

OUT = Path(__file__).resolve().parents[1] / "data" / "fixtures"


def _exp(i):
    return Code(Axis.EXPOSURE, (str(1 + i // 10), f"{i % 10 + 1:02d}"))


def temporal_fixture(seed=2007):
    rng = np.random.default_rng(seed)
    occ = ["3115", "7231", "7212", "8131", "6114"]
    sec = ["24", "27", "50", "10"]

    def rec(rid, year, cortege):
        return OhpRecord(
            record_id=rid,
            year=year,
            disease=Code(Axis.DISEASE, ("C85",)),
            exposures=frozenset(_exp(i) for i in cortege),
            occupation=Code(Axis.OCCUPATION, (occ[int(rng.integers(len(occ)))],)),
            sector=Code(Axis.SECTOR, (sec[int(rng.integers(len(sec)))],)),
        )

    def cortege(pool):
        size = int(rng.choice([1, 2, 3], p=[0.5, 0.35, 0.15]))
        return tuple(sorted(int(x) for x in rng.choice(pool, size=size, replace=False)))

    base, seen = [], []
    while len(base) < 62:
        # reuse an earlier cortege a third of the time so weights build up
        c = seen[int(rng.integers(len(seen)))] if seen and rng.random() < 0.33 else cortege(np.arange(20))
        seen.append(c)
        base.append(rec(f"T{len(base) + 1:03d}", int(rng.integers(2002, 2007)), c))
    keys = {node_key(r) for r in base}

    later = []
    new_keys = set()
    while len(new_keys) < 10:
        c = cortege(np.arange(30))
        r = rec(f"T{63 + len(later):03d}", 2007, c)
        k = node_key(r)
        if k in keys or k in new_keys:
            continue
        new_keys.add(k)
        later.append(r)
    old = sorted({node_key(r).exposures for r in base})
    for pick in rng.choice(len(old), size=5, replace=False):
        c = [int(x.segments[0]) * 10 + int(x.segments[1]) - 11 for x in old[int(pick)]]
        later.append(rec(f"T{63 + len(later):03d}", 2007, c))
    return base + later


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(30)
    (OUT / "synthetic30.csv").write_text(records_to_csv(small_random_records(rng, 30, 8)))
    (OUT / "temporal77.csv").write_text(records_to_csv(temporal_fixture()))


if __name__ == "__main__":
    main()
