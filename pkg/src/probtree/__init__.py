"""Probability trees over categorical tables, with a seeded Monte Carlo
record generator, CSV ingestion, JSON/DOT export, and fidelity metrics."""

from .core import (
    CategoricalTable,
    DataNode,
    DuplicateColumnNameError,
    EmptyTableError,
    Node,
    ProbabilityTree,
    ProbTreeError,
    RecordTooLongError,
    build_tree,
    depth,
    get_columns,
    get_max_record,
    node_count,
    oracle,
    print_tree,
    record_probability,
)
from .export import (
    FORMAT_VERSION,
    GraphEdge,
    InvariantViolationError,
    ParseError,
    TreeDocument,
    VersionMismatchError,
    connected_components,
    from_json,
    load_document,
    to_dot,
    to_json,
    write_csv,
)
from .ingest import IngestOptions, bin_numeric, read_csv
from .sampler import RNG_ALGORITHM, Generator, InvalidCountError, new_generator
from .stats import (
    ColumnMismatchError,
    ConvergenceReport,
    EmptyInputError,
    FrequencyTable,
    InvalidColumnError,
    InvalidSizesError,
    convergence_study,
    exact_column_marginal,
    frequency_diff,
    frequency_table,
    l1_error,
)

__version__ = "0.1.0"

__all__ = [
    "CategoricalTable",
    "ColumnMismatchError",
    "ConvergenceReport",
    "DataNode",
    "DuplicateColumnNameError",
    "EmptyInputError",
    "EmptyTableError",
    "FORMAT_VERSION",
    "FrequencyTable",
    "Generator",
    "GraphEdge",
    "IngestOptions",
    "InvalidColumnError",
    "InvalidCountError",
    "InvalidSizesError",
    "InvariantViolationError",
    "Node",
    "ParseError",
    "ProbTreeError",
    "ProbabilityTree",
    "RNG_ALGORITHM",
    "RecordTooLongError",
    "TreeDocument",
    "VersionMismatchError",
    "bin_numeric",
    "build_tree",
    "connected_components",
    "convergence_study",
    "depth",
    "exact_column_marginal",
    "frequency_diff",
    "frequency_table",
    "from_json",
    "get_columns",
    "get_max_record",
    "l1_error",
    "load_document",
    "new_generator",
    "node_count",
    "oracle",
    "print_tree",
    "read_csv",
    "record_probability",
    "to_dot",
    "to_json",
    "write_csv",
]
