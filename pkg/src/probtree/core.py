"""Probability tree over categorical tabular data.

A probability tree stores, level by level, the conditional frequency of each
column value given the values chosen on the path so far. Level ``i`` of the
tree corresponds to column ``i`` of the source table; each node holds the
distinct values seen at that level (under the path constraints) together with
their relative frequencies and the subtree for the remaining columns.

Trees are immutable once built: any number of threads may query one tree
concurrently without synchronization.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

Value = Union[int, str]
Row = tuple[Value, ...]

#: Absolute tolerance for per-node probability normalization checks.
PROB_SUM_TOL = 1e-9


class ProbTreeError(Exception):
    """Base class for all errors raised by this package."""


class EmptyTableError(ProbTreeError):
    """Raised when a tree is built from a table with no rows or no columns."""


class DuplicateColumnNameError(ProbTreeError):
    """Raised when a table declares the same column name twice."""


class RecordTooLongError(ProbTreeError):
    """Raised when a queried record has more values than the tree has columns."""


@dataclass(frozen=True)
class CategoricalTable:
    """An ordered set of categorical columns with one value per column per row.

    ``columns`` are the column names in order; ``rows`` hold one tuple per
    record. Values are integers or text labels; a column never mixes the two
    kinds (enforced at tree-build time).
    """

    columns: tuple[str, ...]
    rows: tuple[Row, ...]

    def __init__(self, columns: Iterable[str], rows: Iterable[Sequence[Value]]):
        object.__setattr__(self, "columns", tuple(columns))
        object.__setattr__(self, "rows", tuple(map(tuple, rows)))

    def __len__(self) -> int:
        return len(self.rows)

    def column(self, index: int) -> list[Value]:
        """Values of one column, in row order."""
        return [row[index] for row in self.rows]

    def column_index(self, name: str) -> int:
        return self.columns.index(name)


@dataclass(frozen=True)
class DataNode:
    """One value alternative at a node: the value, its conditional frequency
    given the path from the root, and the subtree for the remaining columns
    (absent exactly at the last column)."""

    value: Value
    probability: float
    next_node: "Node | None" = None


@dataclass(frozen=True)
class Node:
    """All alternatives for one column under one path constraint.

    ``data`` is sorted by decreasing probability, ties broken by ascending
    value, so the most likely alternative is always first.
    """

    column_name: str
    data: tuple[DataNode, ...]


@dataclass(frozen=True)
class ProbabilityTree:
    columns: tuple[str, ...]
    root: Node


def _check_table(table: CategoricalTable) -> None:
    if len(table.columns) == 0 or len(table.rows) == 0:
        raise EmptyTableError(
            f"need at least one column and one row, got "
            f"{len(table.columns)} columns and {len(table.rows)} rows"
        )
    seen: set[str] = set()
    for name in table.columns:
        if not name:
            raise ValueError("column names must be non-empty")
        if name in seen:
            raise DuplicateColumnNameError(f"duplicate column name {name!r}")
        seen.add(name)
    width = len(table.columns)
    for i, row in enumerate(table.rows):
        if len(row) != width:
            raise ValueError(f"row {i} has {len(row)} values, expected {width}")
    for j, name in enumerate(table.columns):
        kinds = {type(v) for v in (row[j] for row in table.rows)}
        if not kinds <= {int, str}:
            bad = next(k for k in kinds if k not in (int, str))
            raise TypeError(f"column {name!r} holds {bad.__name__} values; "
                            "only int and str are supported")
        if len(kinds) > 1:
            raise TypeError(f"column {name!r} mixes int and str values")


def _build_node(columns: tuple[str, ...], level: int, rows: Sequence[Row]) -> Node:
    total = len(rows)
    if level == len(columns) - 1:
        counts = Counter(row[level] for row in rows)
        entries = [(value, count / total, None) for value, count in counts.items()]
    else:
        groups: dict[Value, list[Row]] = defaultdict(list)
        for row in rows:
            groups[row[level]].append(row)
        entries = [
            (value, len(group) / total, _build_node(columns, level + 1, group))
            for value, group in groups.items()
        ]
    entries.sort(key=lambda e: (-e[1], e[0]))
    data = tuple(DataNode(value, prob, child) for value, prob, child in entries)
    return Node(column_name=columns[level], data=data)


def build_tree(table: CategoricalTable) -> ProbabilityTree:
    """Build the probability tree for ``table``.

    Each node's entries carry the relative frequency of a value among the
    rows matching every (column, value) pair on the path from the root; the
    subtree below an entry is built from exactly that row subset.

    Raises:
        EmptyTableError: the table has no rows or no columns.
        DuplicateColumnNameError: two columns share a name.
    """
    _check_table(table)
    return ProbabilityTree(columns=table.columns,
                           root=_build_node(table.columns, 0, table.rows))


def get_columns(tree: ProbabilityTree) -> tuple[str, ...]:
    """Column names in tree order (equal to the source table's order)."""
    return tree.columns


def _descend(node: Node, value: Value) -> DataNode | None:
    for entry in node.data:
        if entry.value == value:
            return entry
    return None


def oracle(tree: ProbabilityTree, record: Sequence[Value]) -> bool:
    """Whether ``record`` (possibly a prefix) names a path present in the tree.

    An empty record is vacuously contained. Raises RecordTooLongError when
    the record has more values than the tree has columns.
    """
    if len(record) > len(tree.columns):
        raise RecordTooLongError(
            f"record of length {len(record)} exceeds {len(tree.columns)} columns")
    node: Node | None = tree.root
    for value in record:
        assert node is not None
        entry = _descend(node, value)
        if entry is None:
            return False
        node = entry.next_node
    return True


def record_probability(tree: ProbabilityTree, record: Sequence[Value]) -> float:
    """Product of the conditional probabilities along ``record``'s path.

    Returns 0.0 when the record is not contained, 1.0 for the empty record.
    """
    if len(record) > len(tree.columns):
        raise RecordTooLongError(
            f"record of length {len(record)} exceeds {len(tree.columns)} columns")
    prob = 1.0
    node: Node | None = tree.root
    for value in record:
        assert node is not None
        entry = _descend(node, value)
        if entry is None:
            return 0.0
        prob *= entry.probability
        node = entry.next_node
    return prob


def get_max_record(tree: ProbabilityTree) -> tuple[Row, list[float]]:
    """Greedy most-probable record: pick the highest-probability entry at each
    node in turn (ties already resolved by the node sort order).

    Returns the full-length record and the per-level probabilities. Note this
    is a per-node greedy choice, not a global argmax over full records; use
    :func:`record_probability` to compare candidates when that matters.
    """
    values: list[Value] = []
    probs: list[float] = []
    node: Node | None = tree.root
    while node is not None:
        best = node.data[0]
        values.append(best.value)
        probs.append(best.probability)
        node = best.next_node
    return tuple(values), probs


def print_tree(tree: ProbabilityTree) -> str:
    """Deterministic pre-order text rendering of the tree.

    One line per value entry: ``column value=V p=P``, indented two spaces per
    level, entries in stored (sorted) order, with leaf lines ending in
    ``Leaf``.
    """
    lines: list[str] = []

    def walk(node: Node, depth: int) -> None:
        indent = "  " * depth
        for entry in node.data:
            suffix = "" if entry.next_node is not None else " Leaf"
            lines.append(
                f"{indent}{node.column_name} value={entry.value} "
                f"p={entry.probability:g}{suffix}")
            if entry.next_node is not None:
                walk(entry.next_node, depth + 1)

    walk(tree.root, 0)
    return "\n".join(lines)


def depth(tree: ProbabilityTree) -> int:
    """Number of levels, equal to the number of columns."""
    return len(tree.columns)


def node_count(tree: ProbabilityTree) -> int:
    """Total number of value entries across all nodes."""

    def count(node: Node) -> int:
        return len(node.data) + sum(
            count(entry.next_node) for entry in node.data if entry.next_node is not None)

    return count(tree.root)
