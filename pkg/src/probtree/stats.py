"""Fidelity metrics: per-column frequency tables, L1 error, and the Monte
Carlo convergence study.

The convergence study measures generated-sample column frequencies against
the tree's exact marginal for that column (obtained by summing path
probabilities), so the error floor is zero and the pure Monte Carlo
1/sqrt(n) decay is observable.
"""

from __future__ import annotations

import json
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import Node, ProbabilityTree, ProbTreeError, Value
from .sampler import RNG_ALGORITHM, Generator


class EmptyInputError(ProbTreeError):
    """Raised when a frequency table is requested for no observations."""


class ColumnMismatchError(ProbTreeError):
    """Raised when two frequency tables for different columns are compared."""


class InvalidSizesError(ProbTreeError):
    """Raised for sample-size lists that are not strictly increasing or
    contain sizes below 10."""


class InvalidColumnError(ProbTreeError):
    """Raised for a column index outside the tree's columns."""


@dataclass(frozen=True)
class FrequencyTable:
    """Relative frequency of each distinct value in one column.

    ``total`` is the number of observations behind the frequencies (1 for
    exact marginals computed from a tree rather than from a sample).
    """

    column: str
    freqs: dict[Value, float]
    total: int


def frequency_table(values: Sequence[Value], column: str = "") -> FrequencyTable:
    """Relative frequencies of the distinct values in ``values``."""
    if not values:
        raise EmptyInputError("no values to tabulate")
    counts = Counter(values)
    n = len(values)
    return FrequencyTable(column=column,
                          freqs={v: c / n for v, c in counts.items()},
                          total=n)


def _check_same_column(f: FrequencyTable, g: FrequencyTable) -> None:
    if f.column != g.column:
        raise ColumnMismatchError(f"columns differ: {f.column!r} vs {g.column!r}")


def l1_error(f: FrequencyTable, g: FrequencyTable) -> float:
    """Sum of |f[v] - g[v]| over the union of values (absent keys count 0)."""
    _check_same_column(f, g)
    keys = f.freqs.keys() | g.freqs.keys()
    return sum(abs(f.freqs.get(v, 0.0) - g.freqs.get(v, 0.0)) for v in keys)


def frequency_diff(f: FrequencyTable, g: FrequencyTable) -> dict[Value, float]:
    """Signed differences f[v] - g[v] over the union of values."""
    _check_same_column(f, g)
    keys = f.freqs.keys() | g.freqs.keys()
    return {v: f.freqs.get(v, 0.0) - g.freqs.get(v, 0.0) for v in keys}


def exact_column_marginal(tree: ProbabilityTree, column_index: int) -> FrequencyTable:
    """The tree's exact marginal distribution for one column.

    For column 0 this is the root entries' probabilities; deeper columns sum
    the path probabilities reaching each value. ``total`` is set to 1 because
    the result is a distribution, not a sample.
    """
    if not 0 <= column_index < len(tree.columns):
        raise InvalidColumnError(
            f"column_index {column_index} outside 0..{len(tree.columns) - 1}")
    acc: dict[Value, float] = defaultdict(float)

    def walk(node: Node, mass: float, level: int) -> None:
        for entry in node.data:
            reached = mass * entry.probability
            if level == column_index:
                acc[entry.value] += reached
            elif entry.next_node is not None:
                walk(entry.next_node, reached, level + 1)

    walk(tree.root, 1.0, 0)
    return FrequencyTable(column=tree.columns[column_index], freqs=dict(acc), total=1)


@dataclass(frozen=True)
class ConvergenceReport:
    """Mean L1 error of generated column frequencies at each sample size.

    ``fitted_slope`` is the least-squares slope of log10(error) against
    log10(n); it is None when fewer than three sizes were run or when any
    mean error is zero (degenerate trees have nothing to fit).
    """

    sizes: tuple[int, ...]
    errors: tuple[float, ...]
    trials: int
    fitted_slope: float | None
    column_index: int = 0
    seed: int = 0

    def to_json(self) -> str:
        return json.dumps({
            "sizes": list(self.sizes),
            "mean_errors": list(self.errors),
            "trials": self.trials,
            "fitted_slope": self.fitted_slope,
            "column_index": self.column_index,
            "seed": self.seed,
            "rng_algorithm": RNG_ALGORITHM,
        }, indent=2)

    def to_csv(self) -> str:
        lines = ["n,mean_error"]
        lines += [f"{n},{e!r}" for n, e in zip(self.sizes, self.errors)]
        return "\n".join(lines) + "\n"


def convergence_study(tree: ProbabilityTree, column_index: int,
                      sizes: Sequence[int], trials: int,
                      seed: int) -> ConvergenceReport:
    """Average, over ``trials`` generator streams, the L1 error between the
    generated column frequencies and the exact marginal, at each size.

    Trial t uses a fresh generator seeded with ``seed + t``, so the whole
    study is reproducible from one integer; trials are independent streams
    and may be evaluated in any order.
    """
    sizes = tuple(int(n) for n in sizes)
    if not sizes or any(n < 10 for n in sizes) or any(
            a >= b for a, b in zip(sizes, sizes[1:])):
        raise InvalidSizesError(
            f"sizes must be strictly increasing and each >= 10, got {sizes}")
    if trials < 1:
        raise ValueError(f"need trials >= 1, got {trials}")
    exact = exact_column_marginal(tree, column_index)

    errors = []
    for n in sizes:
        total = 0.0
        for t in range(trials):
            gen = Generator(tree, seed + t)
            counts = gen.sample_column_counts(n, column_index)
            observed = FrequencyTable(
                column=exact.column,
                freqs={v: c / n for v, c in counts.items()},
                total=n)
            total += l1_error(observed, exact)
        errors.append(total / trials)

    slope = None
    if len(sizes) >= 3 and all(e > 0.0 for e in errors):
        slope = float(np.polyfit(np.log10(sizes), np.log10(errors), 1)[0])
    return ConvergenceReport(sizes=sizes, errors=tuple(errors), trials=trials,
                             fitted_slope=slope, column_index=column_index,
                             seed=seed)
