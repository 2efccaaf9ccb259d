"""Serialisation: GraphML, DOT, JSON reports, run manifests."""

from __future__ import annotations

import hashlib
import json
import os
from collections import Counter
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

import networkx as nx

from . import __version__
from .codes import DEFAULT_SEPARATOR, Axis, Code, CoverageRow, format_fixed, parse_code
from .errors import IoFailure
from .ingest import Node, NodeKey
from .network import Edge, Exposome, ExposomeParams, from_edges

DOT_BASE_SIZE = 0.3
OVERLAY_SHAPES = ("square", "circle", "triangle", "diamond", "pentagon", "hexagon")


@dataclass(frozen=True)
class RunManifest:
    inputs: tuple  # (path, sha256)
    parameters: dict
    tool_version: str = __version__
    timestamp: str = ""

    @classmethod
    def for_run(cls, paths: Sequence, parameters: dict) -> "RunManifest":
        """Digest the inputs; the timestamp is reproducible.

        ``SOURCE_DATE_EPOCH`` wins when set, otherwise the newest input
        modification time is used, so reruns on unchanged inputs are identical.
        """
        inputs, mtimes = [], []
        for p in paths:
            p = Path(p)
            if p.is_dir():
                files = sorted(q for q in p.rglob("*") if q.is_file())
            else:
                files = [p]
            for f in files:
                inputs.append((str(f), hashlib.sha256(f.read_bytes()).hexdigest()))
                mtimes.append(f.stat().st_mtime)
        epoch = os.environ.get("SOURCE_DATE_EPOCH")
        if epoch is not None:
            ts = float(epoch)
        else:
            ts = max(mtimes) if mtimes else 0.0
        stamp = datetime.fromtimestamp(int(ts), tz=timezone.utc).isoformat()
        return cls(tuple(inputs), dict(sorted(parameters.items())), __version__, stamp)

    def to_dict(self) -> dict:
        return {
            "inputs": [{"path": p, "sha256": h} for p, h in self.inputs],
            "parameters": self.parameters,
            "tool_version": self.tool_version,
            "timestamp": self.timestamp,
        }


def _write(path, text: str) -> Path:
    try:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
    return path


def _counter_json(counter: Counter) -> str:
    items = sorted(counter.items(), key=lambda kv: kv[0].sort_key() if isinstance(kv[0], Code) else kv[0])
    return json.dumps({str(k): v for k, v in items})


def _separators(g: Exposome) -> dict:
    seps = {}
    for n in g.nodes:
        seps.setdefault(Axis.DISEASE.value, n.disease.separator)
        for c in n.cortege:
            seps.setdefault(Axis.EXPOSURE.value, c.separator)
        for c in n.occupations:
            seps.setdefault(Axis.OCCUPATION.value, c.separator)
        for c in n.sectors:
            seps.setdefault(Axis.SECTOR.value, c.separator)
    return dict(sorted(seps.items()))


def to_networkx(g: Exposome, manifest: RunManifest | None = None) -> nx.Graph:
    G = nx.Graph()
    G.graph.update(D=g.D, eta=g.eta, W=g.W, V=g.V, L=g.L, separators=json.dumps(_separators(g)))
    if manifest is not None:
        G.graph["manifest"] = json.dumps(manifest.to_dict(), sort_keys=True)
    for n in g.nodes:
        extra = n.key.strict_extra
        G.add_node(
            f"n{n.id}",
            label=n.label(),
            disease=n.disease.raw,
            weight=n.weight,
            cortege=";".join(c.raw for c in n.cortege),
            strict_key=";".join(c.raw for c in extra) if extra else "",
            years=_counter_json(n.years),
            occupations=_counter_json(n.occupations),
            sectors=_counter_json(n.sectors),
        )
    for e in g.iter_edges():
        G.add_edge(f"n{e.u}", f"n{e.v}", shared=";".join(c.raw for c in e.shared), strength=e.strength)
    return G


def export_graphml(g: Exposome, path, manifest: RunManifest | None = None) -> Path:
    G = to_networkx(g, manifest)
    try:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        nx.write_graphml(G, path, encoding="utf-8", prettyprint=True)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
    return Path(path)


def _codes(axis: Axis, text: str, sep: str) -> list[Code]:
    return [parse_code(axis, t, sep) for t in text.split(";") if t]


def _counter(axis: Axis | None, text: str, sep: str) -> Counter:
    raw = json.loads(text)
    if axis is None:
        return Counter({int(k): v for k, v in raw.items()})
    return Counter({parse_code(axis, k, sep): v for k, v in raw.items()})


def read_graphml(path) -> Exposome:
    """Rebuild an Exposome written by ``export_graphml``."""
    try:
        G = nx.read_graphml(path)
    except (OSError, nx.NetworkXError) as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    seps = json.loads(G.graph.get("separators", "{}"))

    def sep(axis):
        return seps.get(axis.value, DEFAULT_SEPARATOR)

    nodes = []
    for name, attrs in G.nodes(data=True):
        disease = parse_code(Axis.DISEASE, attrs["disease"], sep(Axis.DISEASE))
        cortege = tuple(sorted(_codes(Axis.EXPOSURE, attrs["cortege"], sep(Axis.EXPOSURE))))
        extra = None
        if attrs.get("strict_key"):
            occ, sec = attrs["strict_key"].split(";")
            extra = (parse_code(Axis.OCCUPATION, occ, sep(Axis.OCCUPATION)), parse_code(Axis.SECTOR, sec, sep(Axis.SECTOR)))
        nodes.append(
            Node(
                id=int(name[1:]),
                key=NodeKey(disease, cortege, extra),
                weight=int(attrs["weight"]),
                years=_counter(None, attrs["years"], ""),
                occupations=_counter(Axis.OCCUPATION, attrs["occupations"], sep(Axis.OCCUPATION)),
                sectors=_counter(Axis.SECTOR, attrs["sectors"], sep(Axis.SECTOR)),
            )
        )
    edges = []
    for a, b, attrs in G.edges(data=True):
        u, v = sorted((int(a[1:]), int(b[1:])))
        edges.append(Edge(u, v, tuple(sorted(_codes(Axis.EXPOSURE, attrs["shared"], sep(Axis.EXPOSURE))))))
    params = ExposomeParams(int(G.graph.get("D", 1)), int(G.graph.get("eta", 1)))
    return from_edges(params, nodes, edges)


def _dot_id(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: Exposome, overlay=None, base_size: float = DOT_BASE_SIZE) -> str:
    """DOT text; node width/height is ``base_size * weight``.

    Overlay codes are drawn as filled black markers, one shape per selected
    code in selection order (square, circle, ...). A node matching several
    codes takes the first one's shape.
    """
    shapes = {}
    if overlay is not None:
        shapes = {code: OVERLAY_SHAPES[i % len(OVERLAY_SHAPES)] for i, code in enumerate(overlay.codes)}
    lines = [
        "graph exposome {",
        f"  graph [D={g.D}, eta={g.eta}, W={g.W}, V={g.V}, L={g.L}];",
        "  node [shape=circle, style=filled, fillcolor=white, fixedsize=true];",
    ]
    for n in g.nodes:
        size = format(base_size * n.weight, ".6g")
        attrs = [
            f"label={_dot_id(n.label())}",
            f"weight={n.weight}",
            f"width={size}",
            f"height={size}",
        ]
        if overlay is not None and n.id in overlay.counts:
            hits = overlay.counts[n.id]
            first = next(c for c in overlay.codes if c in hits)
            attrs += [
                f"shape={shapes[first]}",
                "fillcolor=black",
                "fontcolor=white",
                "overlay=" + _dot_id(";".join(f"{c.raw}:{hits[c]}" for c in overlay.codes if c in hits)),
            ]
        lines.append(f"  n{n.id} [{', '.join(attrs)}];")
    for e in g.iter_edges():
        shared = ";".join(c.raw for c in e.shared)
        lines.append(f"  n{e.u} -- n{e.v} [label={_dot_id(shared)}, strength={e.strength}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dot(g: Exposome, path, overlay=None) -> Path:
    return _write(path, to_dot(g, overlay))


def coverage_rows(rows: Sequence[CoverageRow]) -> list[dict]:
    return [
        {
            "axis": r.axis.value,
            "used": r.used,
            "available": r.available,
            "percent": r.percent,
        }
        for r in rows
    ]


def _key_dict(key: NodeKey) -> dict:
    out = {"disease": key.disease.raw, "cortege": [c.raw for c in key.exposures]}
    if key.strict_extra:
        out["occupation"], out["sector"] = (c.raw for c in key.strict_extra)
    return out


def build_report(
    g: Exposome,
    degree=None,
    clust=None,
    groups=(),
    unshared=(),
    cliques=(),
    bridges=(),
    coverage: Sequence[CoverageRow] = (),
    manifest: RunManifest | None = None,
    truncated: bool = False,
) -> dict:
    from .metrics import density

    d = density(g)
    report = {
        "manifest": manifest.to_dict() if manifest else None,
        "summary": {
            "W": g.W,
            "V": g.V,
            "L": g.L,
            "D": g.D,
            "eta": g.eta,
            "density": d,
            "density_2dp": format_fixed(d, 2),
        },
    }
    if degree is not None:
        report["degree_histogram"] = {str(k): v for k, v in degree.histogram.items()}
        report["top_degrees"] = [
            {"node": i, "label": g.node(i).label(), "k": k} for i, k in degree.ranked()[:10]
        ]
    if clust is not None:
        values = list(clust.per_node.values())
        report["clustering"] = {
            "mean": clust.mean(),
            "min": min(values) if values else 0.0,
            "max": max(values) if values else 0.0,
            "nodes_c0": sum(1 for c in values if c == 0.0),
            "nodes_c1": sum(1 for c in values if c == 1.0),
        }
    report["groups"] = [
        {"exposure": grp.label, "nodes": grp.size, "ohp_count": grp.ohp_count, "members": sorted(grp.members)}
        for grp in groups
    ]
    report["unshared_exposures"] = [c.raw for c in unshared]
    report["cliques"] = [
        {
            "members": list(f.members),
            "kind": f.kind.value,
            "common": [c.raw for c in f.common],
            "edge_witnesses": [
                {"u": u, "v": v, "shared": [c.raw for c in s]} for (u, v), s in sorted(f.edge_witnesses.items())
            ],
        }
        for f in cliques
    ]
    report["cliques_truncated"] = truncated
    report["bridging_nodes"] = [
        {
            "node": b.node,
            "label": g.node(b.node).label(),
            "groups": [c.raw for c in b.group_memberships],
            "k": b.k,
            "c": b.c,
        }
        for b in bridges
    ]
    report["coverage"] = coverage_rows(coverage)
    return report


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def report(g: Exposome, path, **parts) -> Path:
    return _write(path, dumps(build_report(g, **parts)))


def diff_dict(diff, manifest: RunManifest | None = None) -> dict:
    return {
        "manifest": manifest.to_dict() if manifest else None,
        "t1": diff.t1,
        "t2": diff.t2,
        "added_records": diff.added_records,
        "new_nodes": [dict(_key_dict(k), weight_delta=diff.weight_delta[k]) for k in diff.new_nodes],
        "incremented": [dict(_key_dict(k), weight_delta=diff.weight_delta[k]) for k in diff.incremented],
        "new_edges": [
            {"a": _key_dict(a), "b": _key_dict(b), "shared": [c.raw for c in s]} for a, b, s in diff.new_edges
        ],
    }


def overlay_dict(g: Exposome, overlay, manifest: RunManifest | None = None) -> dict:
    return {
        "manifest": manifest.to_dict() if manifest else None,
        "axis": overlay.axis.value,
        "codes": [c.raw for c in overlay.codes],
        "nodes": [
            {
                "node": i,
                "label": g.node(i).label(),
                "weight": g.node(i).weight,
                "counts": {c.raw: hits[c] for c in overlay.codes if c in hits},
            }
            for i, hits in sorted(overlay.counts.items())
        ],
    }
