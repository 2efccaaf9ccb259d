"""Time and memory for building the exposome from synthetic records.

    python3 scripts/benchmark.py --n 100000 --seed 0

Prints one JSON object. ``peak_rss_mb`` is the whole process high-water mark
(record generation included), so it overstates what the build alone needs.
"""

import argparse
import json
import resource
import sys
import time

from exposome.ingest import dedupe
from exposome.metrics import clustering, degrees, density
from exposome.network import ExposomeParams, build
from exposome.synth import synthetic_records


def rss_mb() -> float:
    # ru_maxrss is KiB on Linux, bytes on macOS
    scale = 1 if sys.platform == "darwin" else 1024
    return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss * scale / 2**20


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--exposures", type=int, default=1500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--eta", type=int, default=1)
    p.add_argument("--metrics", action="store_true", help="also time degree/clustering")
    args = p.parse_args(argv)

    records = synthetic_records(args.n, n_exposures=args.exposures, seed=args.seed)
    before = rss_mb()
    t0 = time.perf_counter()
    g = build(dedupe(records), ExposomeParams(args.d, args.eta))
    build_s = time.perf_counter() - t0
    out = {
        "records": args.n,
        "distinct_exposures": len({c for r in records for c in r.exposures}),
        "W": g.W,
        "V": g.V,
        "L": g.L,
        "build_seconds": round(build_s, 3),
        "rss_before_build_mb": round(before, 1),
        "peak_rss_mb": round(rss_mb(), 1),
    }
    if args.metrics:
        t0 = time.perf_counter()
        degrees(g), clustering(g), density(g)
        out["metrics_seconds"] = round(time.perf_counter() - t0, 3)
        out["peak_rss_mb"] = round(rss_mb(), 1)
    print(json.dumps(out))


if __name__ == "__main__":
    main()
