"""Exposome networks of occupational health problems."""

__version__ = "0.1.0"

from .codes import Axis, ClassificationTable, Code, aggregate, coverage, load_tables, parse_code  # noqa: E402
from .ingest import KeyMode, Node, NodeKey, OhpRecord, dedupe, parse_records  # noqa: E402
from .network import Edge, Exposome, ExposomeParams, build, connection_strength, rebuild  # noqa: E402
from .metrics import clustering, degrees, density  # noqa: E402
from .groups import bridging_nodes, exposure_groups, group_overlap, maximal_cliques  # noqa: E402
from .cluster import dendrogram, group_distance  # noqa: E402
from .temporal import project, snapshot_diff  # noqa: E402

__all__ = [
    "Axis", "ClassificationTable", "Code", "aggregate", "coverage", "load_tables", "parse_code",
    "KeyMode", "Node", "NodeKey", "OhpRecord", "dedupe", "parse_records",
    "Edge", "Exposome", "ExposomeParams", "build", "connection_strength", "rebuild",
    "clustering", "degrees", "density",
    "bridging_nodes", "exposure_groups", "group_overlap", "maximal_cliques",
    "dendrogram", "group_distance", "project", "snapshot_diff",
]
