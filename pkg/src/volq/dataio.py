"""CSV ingestion of time series.

Input files are UTF-8, comma-separated, with one numeric target column
selected by name or index. Lines starting with '#' are skipped, which is
how simulated datasets carry their generator header. Any unparseable or
non-finite cell in the target column fails loudly with its row number.
"""
from __future__ import annotations

import csv
import math
from pathlib import Path

from .errors import NonFiniteValue, ParseError
from .series import TimeSeries

_OP = "dataio.load_csv"


def load_csv(path: str | Path, column: str | int = 0,
             has_header: bool = True) -> TimeSeries:
    """Read one numeric column from a CSV file into a TimeSeries.

    Parameters
    ----------
    path : str or Path
    column : str or int
        Column name (requires a header) or zero-based index.
    has_header : bool
        Whether the first non-comment row is a header.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"{_OP}: no such file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        rows = [(i + 1, row) for i, row in enumerate(reader)
                if row and not row[0].lstrip().startswith("#")]
    if not rows:
        raise ParseError(f"{path} contains no data rows", op=_OP)

    header: list[str] | None = None
    if has_header:
        _, header = rows[0]
        rows = rows[1:]
        if not rows:
            raise ParseError(f"{path} has a header but no data rows", op=_OP)

    if isinstance(column, str):
        if header is None:
            raise ParseError("column selected by name but file has no header",
                             op=_OP)
        names = [h.strip() for h in header]
        if column not in names:
            raise ParseError(f"no column named {column!r}; have {names}",
                             op=_OP)
        col_idx = names.index(column)
        col_label = column
    else:
        col_idx = int(column)
        col_label = (header[col_idx].strip()
                     if header is not None and col_idx < len(header)
                     else f"col{col_idx}")

    values: list[float] = []
    for line_no, row in rows:
        if col_idx >= len(row):
            raise ParseError(f"row {line_no} has no column {col_idx}",
                             row=line_no, col=column, op=_OP)
        cell = row[col_idx].strip()
        try:
            value = float(cell)
        except ValueError:
            raise ParseError(f"row {line_no}: cannot parse {cell!r} as a number",
                             row=line_no, col=column, op=_OP) from None
        if not math.isfinite(value):
            raise NonFiniteValue(f"row {line_no}: non-finite value {cell!r}",
                                 row=line_no, op=_OP)
        values.append(value)
    return TimeSeries(values, label=f"{path.stem}:{col_label}")
