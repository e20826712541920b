"""Tree persistence (versioned JSON), DOT graph emission, and CSV writing.

The JSON document round-trips a tree exactly: probabilities are emitted with
Python's shortest round-trip float representation, so deserializing recovers
bit-identical doubles. Graph emission names each vertex by the path used to
reach it, labels edges with conditional probabilities, and emits no synthetic
root, so the graph splits into one weakly-connected component per distinct
first-column value.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from .core import (
    PROB_SUM_TOL,
    CategoricalTable,
    DataNode,
    Node,
    ProbabilityTree,
    ProbTreeError,
    Value,
)

#: Version tag written into every tree document.
FORMAT_VERSION = 1


class ParseError(ProbTreeError):
    """Malformed JSON or a document that does not match the tree schema."""


class VersionMismatchError(ProbTreeError):
    """A document with an unsupported format_version."""


class InvariantViolationError(ProbTreeError):
    """A well-formed document describing an invalid tree (bad normalization,
    ordering, duplicate values, or wrong leaf placement)."""


@dataclass(frozen=True)
class TreeDocument:
    format_version: int
    tree: ProbabilityTree
    metadata: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class GraphEdge:
    from_label: str
    to_label: str
    probability: float


def _node_to_obj(node: Node) -> dict[str, Any]:
    entries = []
    for entry in node.data:
        obj: dict[str, Any] = {"value": entry.value, "probability": entry.probability}
        if entry.next_node is not None:
            obj["child"] = _node_to_obj(entry.next_node)
        entries.append(obj)
    return {"column": node.column_name, "data": entries}


def to_json(tree: ProbabilityTree, metadata: Mapping[str, Any] | None = None,
            indent: int | None = 2) -> str:
    """Serialize ``tree`` (plus optional free-form metadata) to JSON text."""
    doc = {
        "format_version": FORMAT_VERSION,
        "columns": list(tree.columns),
        "metadata": dict(metadata or {}),
        "root": _node_to_obj(tree.root),
    }
    return json.dumps(doc, indent=indent)


def _is_value(x: Any) -> bool:
    return (isinstance(x, int) and not isinstance(x, bool)) or isinstance(x, str)


def _node_from_obj(obj: Any, columns: list[str], level: int) -> Node:
    if not isinstance(obj, dict) or "column" not in obj or "data" not in obj:
        raise ParseError(f"node at level {level} is not an object with column/data")
    if obj["column"] != columns[level]:
        raise InvariantViolationError(
            f"node at level {level} labelled {obj['column']!r}, "
            f"expected {columns[level]!r}")
    raw = obj["data"]
    if not isinstance(raw, list) or not raw:
        raise InvariantViolationError(f"node at level {level} has no entries")
    last = level == len(columns) - 1
    entries: list[DataNode] = []
    for item in raw:
        if not isinstance(item, dict) or "value" not in item or "probability" not in item:
            raise ParseError(f"entry at level {level} missing value/probability")
        value = item["value"]
        if not _is_value(value):
            raise ParseError(f"entry value {value!r} is not an int or str")
        prob = item["probability"]
        if isinstance(prob, bool) or not isinstance(prob, (int, float)):
            raise ParseError(f"probability {prob!r} is not a number")
        prob = float(prob)
        if not 0.0 < prob <= 1.0:
            raise InvariantViolationError(f"probability {prob} outside (0, 1]")
        has_child = "child" in item
        if has_child == last:
            raise InvariantViolationError(
                f"entry at level {level} {'has' if has_child else 'lacks'} a child; "
                f"level is {'the last' if last else 'not the last'} column")
        child = None if last else _node_from_obj(item["child"], columns, level + 1)
        entries.append(DataNode(value=value, probability=prob, next_node=child))

    values = [e.value for e in entries]
    if len({type(v) for v in values}) > 1:
        raise InvariantViolationError(f"node at level {level} mixes value kinds")
    if len(set(values)) != len(values):
        raise InvariantViolationError(f"node at level {level} repeats a value")
    for a, b in zip(entries, entries[1:]):
        if a.probability < b.probability or (
                a.probability == b.probability and a.value > b.value):
            raise InvariantViolationError(
                f"node at level {level} not sorted by decreasing probability "
                "with ascending-value ties")
    total = sum(e.probability for e in entries)
    if abs(total - 1.0) > PROB_SUM_TOL:
        raise InvariantViolationError(
            f"node at level {level} probabilities sum to {total!r}, not 1")
    return Node(column_name=columns[level], data=tuple(entries))


def load_document(text: str) -> TreeDocument:
    """Parse and validate a tree document, keeping its metadata."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ParseError("document is not a JSON object")
    version = obj.get("format_version")
    if not isinstance(version, int) or isinstance(version, bool):
        raise ParseError("missing integer format_version")
    if version != FORMAT_VERSION:
        raise VersionMismatchError(
            f"format_version {version} unsupported (expected {FORMAT_VERSION})")
    columns = obj.get("columns")
    if (not isinstance(columns, list) or not columns
            or not all(isinstance(c, str) and c for c in columns)):
        raise ParseError("columns must be a non-empty list of non-empty names")
    metadata = obj.get("metadata", {})
    if not isinstance(metadata, dict):
        raise ParseError("metadata must be an object")
    root = _node_from_obj(obj.get("root"), columns, 0)
    return TreeDocument(version, ProbabilityTree(tuple(columns), root), metadata)


def from_json(text: str) -> ProbabilityTree:
    """Deserialize a tree serialized by :func:`to_json`."""
    return load_document(text).tree


def _label(path: list[tuple[str, Value]], leaf: bool) -> str:
    parts = [f"{column}, v={value}" for column, value in path]
    if leaf:
        parts.append("Leaf")
    return " | ".join(parts)


@dataclass(frozen=True)
class _Component:
    value: Value
    root_label: str
    root_probability: float
    vertices: tuple[str, ...]
    edges: tuple[GraphEdge, ...]


def _components(tree: ProbabilityTree) -> list[_Component]:
    out = []
    for entry in tree.root.data:
        vertices: list[str] = []
        edges: list[GraphEdge] = []

        def walk(item: DataNode, path: list[tuple[str, Value]]) -> None:
            label = _label(path, item.next_node is None)
            vertices.append(label)
            if item.next_node is None:
                return
            node = item.next_node
            for child in node.data:
                child_path = path + [(node.column_name, child.value)]
                edges.append(GraphEdge(
                    from_label=label,
                    to_label=_label(child_path, child.next_node is None),
                    probability=child.probability))
                walk(child, child_path)

        walk(entry, [(tree.root.column_name, entry.value)])
        out.append(_Component(entry.value, vertices[0], entry.probability,
                              tuple(vertices), tuple(edges)))
    return out


def connected_components(tree: ProbabilityTree) -> list[tuple[Value, list[GraphEdge]]]:
    """Edges of each first-column subtree, in pre-order, keyed by root value.

    One entry per root alternative; with no synthetic root vertex these are
    exactly the weakly-connected components of the drawn graph.
    """
    return [(c.value, list(c.edges)) for c in _components(tree)]


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def to_dot(tree: ProbabilityTree, single_root: bool = False) -> str:
    """Render the tree as a DOT digraph.

    Vertices are named by their path, e.g. ``A, v=1 | B, v=2``, with
    last-column vertices ending in ``Leaf``; edges carry the child entry's
    conditional probability with six decimal digits. By default no synthetic
    root is emitted, so the graph has one component per first-column value;
    ``single_root=True`` adds a root vertex tying the components together,
    with root probabilities on its outgoing edges.
    """
    comps = _components(tree)
    ids: dict[str, str] = {}
    lines = ["digraph probability_tree {"]
    if single_root:
        lines.append('  n0 [label="root"];')
        next_id = 1
    else:
        next_id = 0
    for comp in comps:
        for label in comp.vertices:
            ids[label] = f"n{next_id}"
            next_id += 1
            lines.append(f'  {ids[label]} [label="{_escape(label)}"];')
    if single_root:
        for comp in comps:
            lines.append(
                f'  n0 -> {ids[comp.root_label]} [label="{comp.root_probability:.6f}"];')
    for comp in comps:
        for edge in comp.edges:
            lines.append(
                f'  {ids[edge.from_label]} -> {ids[edge.to_label]} '
                f'[label="{edge.probability:.6f}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_csv(table: CategoricalTable, path: str | Path, delimiter: str = ",") -> None:
    """Write a table as UTF-8 CSV with a header row and LF line endings."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, delimiter=delimiter, lineterminator="\n")
        writer.writerow(table.columns)
        writer.writerows(table.rows)
