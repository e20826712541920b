"""CSV ingestion into categorical tables, with optional equal-width binning.

Input files are RFC-4180 style CSV (UTF-8, mandatory header row, minimal
quoting). A column whose cells all parse as integers becomes an integer
column; anything else stays text. Numeric columns can be converted to
categorical bin codes with an equal-width binning pass.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .core import CategoricalTable, ProbTreeError, Value


class IngestError(ProbTreeError):
    """Base class for ingestion failures."""


class MalformedHeaderError(IngestError):
    """Missing header, or duplicate/empty column names."""


class RaggedRowError(IngestError):
    """A data row with the wrong number of fields."""


class MissingValueError(IngestError):
    """An empty cell under missing_policy='error'."""


class UnknownColumnError(IngestError):
    """A bin_spec key that names no column in the file."""


class NonNumericColumnError(IngestError):
    """A bin_spec column whose cells do not all parse as numbers."""


class InvalidBinCountError(IngestError):
    """A bin count below 2."""


class ConstantColumnError(IngestError):
    """Binning requested on a column with min == max."""


@dataclass
class IngestOptions:
    """Knobs for :func:`read_csv`.

    missing_policy: "error" rejects rows with empty cells, "drop_row" skips
        them.
    bin_spec: column name to bin count; the named columns are parsed as
        numbers and replaced by equal-width bin codes 0..k-1.
    delimiter: single-character field separator.
    """

    missing_policy: str = "error"
    bin_spec: dict[str, int] = field(default_factory=dict)
    delimiter: str = ","

    def __post_init__(self) -> None:
        if self.missing_policy not in ("error", "drop_row"):
            raise ValueError(f"unknown missing_policy {self.missing_policy!r}")
        if len(self.delimiter) != 1:
            raise ValueError(f"delimiter must be one character, got {self.delimiter!r}")


def _parse_int(token: str) -> int | None:
    try:
        return int(token)
    except ValueError:
        return None


def read_csv(path: str | Path, opts: IngestOptions | None = None) -> CategoricalTable:
    """Read a CSV file into a CategoricalTable.

    Raises:
        FileNotFoundError: the file does not exist.
        MalformedHeaderError: no header line, or duplicate/empty names.
        RaggedRowError: a row with the wrong field count.
        MissingValueError: an empty cell under missing_policy="error".
        UnknownColumnError, NonNumericColumnError, InvalidBinCountError,
        ConstantColumnError: bin_spec problems.
    """
    opts = opts or IngestOptions()
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle, delimiter=opts.delimiter)
        try:
            header = next(reader)
        except StopIteration:
            raise MalformedHeaderError(f"{path}: empty file, header row required")
        if any(not name for name in header):
            raise MalformedHeaderError(f"{path}: empty column name in header")
        if len(set(header)) != len(header):
            dupes = sorted({n for n in header if header.count(n) > 1})
            raise MalformedHeaderError(f"{path}: duplicate column names {dupes}")
        width = len(header)
        raw_rows: list[list[str]] = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != width:
                raise RaggedRowError(
                    f"{path}:{lineno}: expected {width} fields, got {len(row)}")
            if any(cell == "" for cell in row):
                if opts.missing_policy == "drop_row":
                    continue
                raise MissingValueError(f"{path}:{lineno}: empty cell")
            raw_rows.append(row)

    for name in opts.bin_spec:
        if name not in header:
            raise UnknownColumnError(f"bin_spec column {name!r} not in header {header}")

    columns: list[list[Value]] = []
    for j, name in enumerate(header):
        cells = [row[j] for row in raw_rows]
        if name in opts.bin_spec:
            try:
                numbers = [float(c) for c in cells]
            except ValueError:
                raise NonNumericColumnError(
                    f"column {name!r} has non-numeric cells, cannot bin")
            columns.append(list(bin_numeric(numbers, opts.bin_spec[name])))
        else:
            ints = [_parse_int(c) for c in cells]
            if cells and all(v is not None for v in ints):
                columns.append(ints)  # type: ignore[arg-type]
            else:
                columns.append(list(cells))

    rows = list(zip(*columns)) if raw_rows else []
    return CategoricalTable(header, rows)


def bin_numeric(values: Sequence[float], k: int) -> list[int]:
    """Equal-width bin codes over [min(values), max(values)].

    Bins are half-open [e_i, e_{i+1}) with e_i = min + i * (max - min) / k;
    the maximum value is clamped into the top bin, so codes always lie in
    [0, k - 1].

    Raises InvalidBinCountError for k < 2 and ConstantColumnError when
    min == max.
    """
    if k < 2:
        raise InvalidBinCountError(f"need k >= 2, got {k}")
    if not values:
        raise ValueError("no values to bin")
    lo, hi = min(values), max(values)
    if lo == hi:
        raise ConstantColumnError(f"constant column (all values equal {lo!r})")
    width = (hi - lo) / k
    if width <= 0.0:
        raise ConstantColumnError(
            f"column range [{lo!r}, {hi!r}] is below float resolution")
    return [min(int(math.floor((v - lo) / width)), k - 1) for v in values]
