"""Command-line entry point: ``exposome <subcommand> RECORDS [options]``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import export
from .cluster import dendrogram
from .codes import Axis, coverage_table, load_tables
from .errors import ExposomeError, OutputCapExceeded
from .groups import bridging_nodes, exposure_groups, group_overlap, maximal_cliques
from .ingest import KeyMode, dedupe, parse_records, write_rejects
from .metrics import clustering, degrees, density
from .network import ExposomeParams, build
from .synth import records_to_csv, synthetic_records
from .temporal import project, snapshot_diff

FORMATS = ("graphml", "dot", "report", "newick")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("records", help="OHP record file (CSV or JSON lines)")
    p.add_argument("--d", type=int, default=1, help="minimum shared exposures per link")
    p.add_argument("--eta", type=int, default=1, help="minimum node weight")
    p.add_argument("--key-mode", choices=[m.value for m in KeyMode], default=KeyMode.CORTEGE.value)
    p.add_argument("--agg-exposure", type=int, default=None, help="exposure hierarchy level")
    p.add_argument(
        "--tables",
        default=os.environ.get("EXPOSOME_TABLES"),
        help="classification table directory (default $EXPOSOME_TABLES)",
    )
    p.add_argument("--format", choices=FORMATS, default=None)
    p.add_argument("--out", "-o", default=None, help="output file (default stdout)")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="exposome", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in [
        ("build", "build the exposome and write it (graphml by default)"),
        ("metrics", "density, degree histogram and clustering coefficients"),
        ("groups", "exposure groups, bridging nodes and group overlap"),
        ("cliques", "maximal cliques classified single/hybrid"),
        ("dendro", "average-linkage dendrogram of exposure groups"),
        ("diff", "compare cumulative exposomes at two cutoff years"),
        ("project", "project occupations or sectors onto the exposome"),
        ("coverage", "code-space coverage per axis"),
        ("export", "write graphml, dot, report or newick"),
    ]:
        p = sub.add_parser(name, help=help_)
        _common(p)
        if name == "cliques" or name == "export":
            p.add_argument("--max-cliques", type=int, default=100000)
        if name == "diff":
            p.add_argument("--t1", type=int, required=True)
            p.add_argument("--t2", type=int, required=True)
        if name == "project" or name == "export":
            p.add_argument("--axis", choices=["occupation", "sector"], default="occupation")
            p.add_argument("--codes", default="", help="comma-separated codes to overlay")
    p = sub.add_parser("synth", help="write a seeded synthetic record file")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exposures", type=int, default=1500)
    p.add_argument("--out", "-o", default=None)
    return parser


class Pipeline:
    """Lazily computed stages shared by the subcommands."""

    def __init__(self, args):
        self.args = args
        self.tables = load_tables(args.tables)
        agg = {Axis.EXPOSURE: args.agg_exposure} if args.agg_exposure else {}
        self.records, rejects = parse_records(Path(args.records), self.tables, agg)
        if rejects:
            write_rejects(args.records, rejects)
        self.n_rejects = len(rejects)
        self.key_mode = KeyMode(args.key_mode)
        self.params = ExposomeParams(args.d, args.eta)
        self.graph = build(dedupe(self.records, self.key_mode), self.params)
        inputs = [args.records] + ([args.tables] if args.tables else [])
        self.manifest = export.RunManifest.for_run(
            inputs,
            {
                "D": args.d,
                "eta": args.eta,
                "key_mode": args.key_mode,
                "agg_exposure": args.agg_exposure,
                "command": args.command,
            },
        )

    def groups(self):
        return exposure_groups(self.graph)

    def cliques(self):
        cap = getattr(self.args, "max_cliques", None)
        try:
            return maximal_cliques(self.graph, cap), False
        except OutputCapExceeded as exc:
            print(json.dumps({"warning": exc.code, "message": str(exc)}), file=sys.stderr)
            return exc.partial, True

    def coverage(self):
        return coverage_table(self.records, self.tables)

    def overlay(self):
        axis = Axis.parse(self.args.axis)
        table = self.tables[axis]
        codes = [table.parse(c) for c in self.args.codes.split(",") if c.strip()]
        return project(self.graph, axis, codes)

    def full_report(self) -> dict:
        g = self.graph
        deg, clu = degrees(g), clustering(g)
        groups, unshared = self.groups()
        cliques, truncated = self.cliques()
        return export.build_report(
            g,
            degree=deg,
            clust=clu,
            groups=groups,
            unshared=unshared,
            cliques=cliques,
            bridges=bridging_nodes(g, groups, deg, clu),
            coverage=self.coverage(),
            manifest=self.manifest,
            truncated=truncated,
        )


def _emit(text: str, out) -> None:
    if out:
        export._write(out, text)
    else:
        sys.stdout.write(text)


def _emit_graphml(pipe: Pipeline, out) -> None:
    if out:
        export.export_graphml(pipe.graph, out, pipe.manifest)
    else:
        import io

        import networkx as nx

        buf = io.BytesIO()
        nx.write_graphml(export.to_networkx(pipe.graph, pipe.manifest), buf, encoding="utf-8")
        sys.stdout.write(buf.getvalue().decode("utf-8"))


def _newick(pipe: Pipeline) -> str:
    groups, _ = pipe.groups()
    if not groups:
        return ";\n"
    return dendrogram(groups).to_newick() + "\n"


def run(args) -> int:
    if args.command == "synth":
        text = records_to_csv(synthetic_records(args.n, n_exposures=args.exposures, seed=args.seed))
        _emit(text, args.out)
        return 0

    pipe = Pipeline(args)
    g = pipe.graph
    cmd, fmt, out = args.command, args.format, args.out

    if cmd in ("build", "export"):
        fmt = fmt or ("graphml" if cmd == "build" else "report")
        if fmt == "graphml":
            _emit_graphml(pipe, out)
        elif fmt == "dot":
            overlay = pipe.overlay() if getattr(args, "codes", "") else None
            _emit(export.to_dot(g, overlay), out)
        elif fmt == "newick":
            _emit(_newick(pipe), out)
        else:
            _emit(export.dumps(pipe.full_report()), out)
        return 0

    if cmd == "metrics":
        deg, clu = degrees(g), clustering(g)
        doc = {
            "manifest": pipe.manifest.to_dict(),
            "W": g.W,
            "V": g.V,
            "L": g.L,
            "density": density(g),
            "degree_histogram": {str(k): v for k, v in deg.histogram.items()},
            "nodes": [
                {"node": i, "label": g.node(i).label(), "weight": g.node(i).weight, "k": k, "c": clu.per_node[i]}
                for i, k in deg.ranked()
            ],
        }
    elif cmd == "groups":
        groups, unshared = pipe.groups()
        deg, clu = degrees(g), clustering(g)
        overlap = group_overlap(g, groups)
        doc = export.build_report(
            g, groups=groups, unshared=unshared, bridges=bridging_nodes(g, groups, deg, clu), manifest=pipe.manifest
        )
        doc = {k: doc[k] for k in ("manifest", "summary", "groups", "unshared_exposures", "bridging_nodes")}
        doc["group_overlap"] = [{"a": a.raw, "b": b.raw, "shared_nodes": n} for a, b, n in overlap.edges]
    elif cmd == "cliques":
        cliques, truncated = pipe.cliques()
        doc = export.build_report(g, cliques=cliques, manifest=pipe.manifest, truncated=truncated)
        doc = {k: doc[k] for k in ("manifest", "summary", "cliques", "cliques_truncated")}
    elif cmd == "dendro":
        if fmt == "newick":
            _emit(_newick(pipe), out)
            return 0
        groups, _ = pipe.groups()
        tree = dendrogram(groups).to_dict() if groups else {"leaves": [], "merges": []}
        doc = {"manifest": pipe.manifest.to_dict(), "dendrogram": tree}
    elif cmd == "diff":
        diff = snapshot_diff(pipe.records, args.t1, args.t2, pipe.key_mode, pipe.params)
        doc = export.diff_dict(diff, pipe.manifest)
    elif cmd == "project":
        overlay = pipe.overlay()
        if fmt == "dot":
            _emit(export.to_dot(g, overlay), out)
            return 0
        doc = export.overlay_dict(g, overlay, pipe.manifest)
    elif cmd == "coverage":
        doc = {
            "manifest": pipe.manifest.to_dict(),
            "rejected_rows": pipe.n_rejects,
            "coverage": export.coverage_rows(pipe.coverage()),
        }
    else:  # pragma: no cover - argparse restricts choices
        raise AssertionError(cmd)
    _emit(export.dumps(doc), out)
    return 0


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return run(args)
    except ExposomeError as exc:
        print(json.dumps({"error": exc.code, "message": str(exc)}), file=sys.stderr)
        return 2
    except (ValueError, FileNotFoundError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
