"""Monte Carlo record generation by inverse-CDF walks over a probability tree.

At every level one uniform variate u in [0, 1) is drawn and the first entry
whose cumulative probability reaches u is selected (first k with
c_k = p_1 + ... + p_k >= u). If floating-point accumulation leaves the final
cumulative value just below u, the last entry is selected, so a walk over a
valid tree never fails. One variate is consumed per level even at forced
(probability 1) nodes, which keeps the stream position a function of the
record count alone.

Randomness comes from numpy's PCG64 bit generator; uniforms are the high 53
bits of each 64-bit output divided by 2**53. PCG64 streams are reproducible
across platforms for a given integer seed, and bulk draws are identical to
repeated scalar draws, so batch generation replays exactly.
"""

from __future__ import annotations

import numpy as np

from .core import CategoricalTable, Node, ProbabilityTree, ProbTreeError, Row, Value

#: Identity of the pseudo-random algorithm, recorded in report metadata.
RNG_ALGORITHM = "pcg64"


class InvalidCountError(ProbTreeError):
    """Raised when a non-positive number of records is requested."""


class _PlanNode:
    """Per-node sampling tables: cumulative probabilities, the values in node
    order, their per-column vocabulary codes, and the child plans."""

    __slots__ = ("level", "cdf", "values", "codes", "children")

    def __init__(self, node: Node, level: int, vocab_index: list[dict[Value, int]]):
        self.level = level
        self.cdf = np.cumsum([entry.probability for entry in node.data])
        self.values = [entry.value for entry in node.data]
        self.codes = np.array([vocab_index[level][v] for v in self.values], dtype=np.intp)
        if node.data[0].next_node is None:
            self.children: list[_PlanNode] | None = None
        else:
            self.children = [
                _PlanNode(entry.next_node, level + 1, vocab_index) for entry in node.data
            ]


def _column_vocabularies(tree: ProbabilityTree) -> list[list[Value]]:
    """Sorted distinct values per column, collected over the whole tree."""
    seen: list[set[Value]] = [set() for _ in tree.columns]

    def walk(node: Node, level: int) -> None:
        for entry in node.data:
            seen[level].add(entry.value)
            if entry.next_node is not None:
                walk(entry.next_node, level + 1)

    walk(tree.root, 0)
    return [sorted(values) for values in seen]


class Generator:
    """Seeded Monte Carlo generator over a shared, read-only probability tree.

    Two generators on the same tree with the same seed produce identical
    record sequences. A generator mutates its stream state on every draw, so
    it must be owned by one execution context at a time; for parallel
    generation create several generators with distinct seeds on the same
    tree. Outputs merged from several streams are exchangeable but are not
    equal to any single-stream sequence.

    Attributes:
        tree: the probability tree records are drawn from.
        rand: the uniform source; any object with a ``random(size=None)``
            method can be substituted (e.g. a counting wrapper in tests).
    """

    def __init__(self, tree: ProbabilityTree, seed: int):
        self.tree = tree
        vocabs = _column_vocabularies(tree)
        self._vocab_values = vocabs
        self._vocab_arrays = [
            np.array(v, dtype=np.int64) if isinstance(v[0], int) else np.array(v, dtype=object)
            for v in vocabs
        ]
        vocab_index = [{v: i for i, v in enumerate(vocab)} for vocab in vocabs]
        self._plan = _PlanNode(tree.root, 0, vocab_index)
        self.rand = np.random.Generator(np.random.PCG64(seed))

    def set_seed(self, seed: int) -> None:
        """Reset the stream to the state of a fresh generator with ``seed``."""
        self.rand = np.random.Generator(np.random.PCG64(seed))

    def get_record(self) -> Row:
        """Draw one full-length record, consuming one uniform per column."""
        values: list[Value] = []
        plan: _PlanNode | None = self._plan
        while plan is not None:
            u = self.rand.random()
            k = int(np.searchsorted(plan.cdf, u, side="left"))
            if k >= plan.cdf.size:
                k = plan.cdf.size - 1
            values.append(plan.values[k])
            plan = plan.children[k] if plan.children is not None else None
        return tuple(values)

    def get_records(self, n: int) -> CategoricalTable:
        """Draw ``n`` records as a table with the tree's columns.

        Equivalent to ``n`` successive :meth:`get_record` calls from the same
        stream state (batch draws replay the scalar stream exactly).
        """
        codes = self._sample_codes(n)
        columns = [self._vocab_arrays[j][codes[j]].tolist() for j in range(len(codes))]
        return CategoricalTable(self.tree.columns, list(zip(*columns)))

    def sample_column_counts(self, n: int, column_index: int) -> dict[Value, int]:
        """Occurrence counts of one column over the next ``n`` records.

        Consumes exactly the stream of ``get_records(n)`` (all columns are
        generated) without materializing the rows, so large validation runs
        stay cheap. Counts equal ``Counter(get_records(n).column(column_index))``.
        """
        codes = self._sample_codes(n)[column_index]
        vocab = self._vocab_values[column_index]
        counts = np.bincount(codes, minlength=len(vocab))
        return {value: int(c) for value, c in zip(vocab, counts) if c}

    def _sample_codes(self, n: int) -> list[np.ndarray]:
        """Vectorized walk: per-column vocabulary codes for ``n`` records."""
        if n < 1:
            raise InvalidCountError(f"need n >= 1, got {n}")
        width = len(self.tree.columns)
        u = np.asarray(self.rand.random(n * width)).reshape(n, width)
        out = [np.empty(n, dtype=np.intp) for _ in range(width)]
        self._walk(self._plan, np.arange(n, dtype=np.intp), u, out)
        return out

    @staticmethod
    def _walk(plan: _PlanNode, idx: np.ndarray, u: np.ndarray,
              out: list[np.ndarray]) -> None:
        sel = np.searchsorted(plan.cdf, u[idx, plan.level], side="left")
        np.minimum(sel, plan.cdf.size - 1, out=sel)
        out[plan.level][idx] = plan.codes[sel]
        if plan.children is None:
            return
        if len(plan.children) == 1:
            Generator._walk(plan.children[0], idx, u, out)
            return
        for k, child in enumerate(plan.children):
            sub = idx[sel == k]
            if sub.size:
                Generator._walk(child, sub, u, out)


def new_generator(tree: ProbabilityTree, seed: int) -> Generator:
    """Create a generator whose stream state is fully determined by ``seed``."""
    return Generator(tree, seed)
