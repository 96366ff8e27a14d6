"""Text renderings of results and on-disk exports."""

from __future__ import annotations

import json
import os
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Union

import networkx as nx

from .embedding import EmbeddingReport, LinearEmbedding, PointEmbedding
from .metrization import ZERO, Certificate, ConstraintGraph, Node, describe_certificate
from .orders import WeakOrderMatrix
from .patterns import SetFamily, SubsetVector, graded_masks, mask_label, masks
from .utils import console, format_rat


def format_matrix(rows: Sequence[Sequence[Fraction]]) -> str:
    """Matrix file text, readable back by :func:`chanmetric.parsing.parse_grid`."""

    lines = [str(len(rows))]
    lines.extend(" ".join(format_rat(value) for value in row) for row in rows)
    return "\n".join(lines)


def format_ranks(ranks: WeakOrderMatrix) -> str:
    width = max(len(str(value)) for row in ranks.ranks for value in row)
    return "\n".join(" ".join(str(value).rjust(width) for value in row) for row in ranks.ranks)


def format_vector(vector: SubsetVector, graded: bool = False) -> str:
    values = vector.to_graded() if graded else vector.values
    return f"{vector.n}\n" + " ".join(format_rat(value) for value in values)


def vector_labels(n: int, graded: bool = False, prefix: str = "x") -> List[str]:
    order = graded_masks(n) if graded else list(masks(n))
    return [prefix + mask_label(mask) for mask in order]


def format_family(family: SetFamily) -> str:
    return "\n".join(family.render())


def _optional(value: Optional[Fraction]) -> str:
    return "-" if value is None else format_rat(value)


def format_embedding(embedding: Union[LinearEmbedding, PointEmbedding]) -> str:
    """``n N m k`` header, then one word per generator or point image."""

    words = embedding.generators if isinstance(embedding, LinearEmbedding) else embedding.images
    header = f"{embedding.n} {embedding.length} {_optional(embedding.m)} {_optional(embedding.k)}"
    return "\n".join([header, *(word.to_string() for word in words)])


def format_certificate(certificate: Certificate) -> str:
    lines = [describe_certificate(certificate)]
    for step in certificate.steps:
        lines.append(
            f"  column {step.column + 1}: rows {step.rows[0] + 1},{step.rows[1] + 1}"
            f" give {_node_label(step.source, step.column)} {step.rel} {_node_label(step.target, step.column)}"
        )
    return "\n".join(lines)


def format_report(report: EmbeddingReport) -> str:
    lines = [
        f"ok: {'yes' if report.ok else 'no'}",
        f"m: {_optional(report.m)}",
        f"k: {_optional(report.k)}",
        f"order preserved: {'yes' if report.order_preserved else 'no'}",
    ]
    for violation in report.violations:
        lines.append(
            f"violation at {violation.label}: expected {format_rat(violation.expected)},"
            f" observed {violation.observed}"
        )
    lines.extend(f"note: {note}" for note in report.notes)
    return "\n".join(lines)


def _node_label(node: Node, column: int) -> str:
    if node == ZERO:
        return f"d({column + 1},{column + 1})"
    return node.label()  # type: ignore[union-attr]


def constraint_digraph(graph: ConstraintGraph) -> nx.MultiDiGraph:
    """Pair variables as nodes, one edge per derived comparison."""

    digraph = nx.MultiDiGraph()
    for node in graph.nodes():
        label = "0" if node == ZERO else node.label()  # type: ignore[union-attr]
        digraph.add_node(label)
    for step in graph.all_steps():
        source = "0" if step.source == ZERO else step.source.label()  # type: ignore[union-attr]
        target = "0" if step.target == ZERO else step.target.label()  # type: ignore[union-attr]
        digraph.add_edge(
            source,
            target,
            relation=step.rel,
            column=step.column + 1,
            rows=f"{step.rows[0] + 1},{step.rows[1] + 1}",
        )
    return digraph


def export_constraints(graph: ConstraintGraph, out_dir: str) -> Dict[str, str]:
    """Write the comparison graph as node/edge JSON and GraphML."""

    os.makedirs(out_dir, exist_ok=True)
    digraph = constraint_digraph(graph)
    nodes_path = os.path.join(out_dir, "nodes.json")
    edges_path = os.path.join(out_dir, "edges.json")
    graphml_path = os.path.join(out_dir, "constraints.graphml")

    nodes = [{"id": node} for node in digraph.nodes]
    edges = []
    for u, v, data in digraph.edges(data=True):
        record = {"source": u, "target": v}
        record.update(data)
        edges.append(record)
    with open(nodes_path, "w", encoding="utf-8") as fh:
        json.dump(nodes, fh, indent=2)
    with open(edges_path, "w", encoding="utf-8") as fh:
        json.dump(edges, fh, indent=2)
    nx.write_graphml(digraph, graphml_path)
    console.log("constraint graph written", out_dir)
    return {"nodes": nodes_path, "edges": edges_path, "graphml": graphml_path}


__all__ = [
    "constraint_digraph",
    "export_constraints",
    "format_certificate",
    "format_embedding",
    "format_family",
    "format_matrix",
    "format_ranks",
    "format_report",
    "format_vector",
    "vector_labels",
]
