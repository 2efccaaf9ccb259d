"""Run every CLI stage on one record file and collect the outputs in a directory.

    python3 scripts/run_pipeline.py data/fixtures/nhl_like.csv out/nhl --codes 3115,7231
    python3 scripts/run_pipeline.py data/fixtures/temporal77.csv out/t77 --t1 2006 --t2 2007
"""

import argparse
from pathlib import Path

from exposome.cli import main as cli

ROOT = Path(__file__).resolve().parents[1]


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("records")
    p.add_argument("outdir")
    p.add_argument("--tables", default=str(ROOT / "data" / "tables"))
    p.add_argument("--d", default="1")
    p.add_argument("--eta", default="1")
    p.add_argument("--codes", default="", help="occupation codes to overlay")
    p.add_argument("--t1", type=int)
    p.add_argument("--t2", type=int)
    args = p.parse_args(argv)

    out = Path(args.outdir)
    common = [args.records, "--tables", args.tables, "--d", args.d, "--eta", args.eta]
    stages = [
        ("exposome.graphml", ["export", *common, "--format", "graphml"]),
        ("report.json", ["export", *common, "--format", "report"]),
        ("groups.newick", ["export", *common, "--format", "newick"]),
        ("metrics.json", ["metrics", *common]),
        ("groups.json", ["groups", *common]),
        ("cliques.json", ["cliques", *common]),
        ("dendro.json", ["dendro", *common]),
        ("coverage.json", ["coverage", *common]),
    ]
    if args.codes:
        stages += [
            ("projection.json", ["project", *common, "--codes", args.codes]),
            ("exposome.dot", ["export", *common, "--format", "dot", "--codes", args.codes]),
        ]
    else:
        stages.append(("exposome.dot", ["export", *common, "--format", "dot"]))
    if args.t1 is not None and args.t2 is not None:
        stages.append(("diff.json", ["diff", *common, "--t1", str(args.t1), "--t2", str(args.t2)]))

    for name, argv_ in stages:
        status = cli([*argv_, "--out", str(out / name)])
        print(f"{'ok ' if status == 0 else 'ERR'} {out / name}")
        if status:
            return status
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
