"""PDF417 symbology codec.

encode() composes the pipeline: compaction -> length descriptor and pads
-> Reed-Solomon check block -> module matrix. decode_matrix() inverts it,
correcting codeword damage up to the level's capability. Auto column
selection picks the column count whose module aspect (rows*3 : columns*17)
sits closest to 1:2, preferring fewer columns on ties.
"""

from __future__ import annotations

import math

from ..errors import CapacityExceeded, EmptyPayload, RowLimitExceeded
from .compaction import ModePolicy, compact, decompact
from .decode import decode_matrix
from .layout import (
    MAX_COLUMNS,
    MAX_ROWS,
    MAX_TOTAL_CODEWORDS,
    MIN_COLUMNS,
    MIN_ROWS,
    PAD_CODEWORD,
    ROW_HEIGHT_MODULES,
    Pdf417Symbol,
    layout,
    matrix_width,
    row_indicators,
)
from .rs import correction_capability, ec_codeword_count, rs_correct, rs_generate, syndromes
from .tables import cluster_tables, pattern_maps, pattern_runs, table_digest

__all__ = [
    "ModePolicy", "Pdf417Symbol", "compact", "decompact", "decode_matrix",
    "encode", "rs_correct", "rs_generate", "syndromes", "layout",
    "matrix_width", "row_indicators", "ec_codeword_count",
    "correction_capability", "cluster_tables", "pattern_maps",
    "pattern_runs", "table_digest", "auto_columns",
    "MIN_ROWS", "MAX_ROWS", "MIN_COLUMNS", "MAX_COLUMNS",
    "PAD_CODEWORD", "ROW_HEIGHT_MODULES", "MAX_TOTAL_CODEWORDS",
]


def _rows_for(total: int, columns: int) -> int:
    return max(MIN_ROWS, math.ceil(total / columns))


def auto_columns(data_count: int, ec_level: int) -> int:
    """Smallest column count whose aspect (rows*3 : columns*17) is nearest 1:2."""
    ec_count = ec_codeword_count(ec_level)
    total = 1 + data_count + ec_count  # descriptor + data + check block
    best = None
    for c in range(MIN_COLUMNS, MAX_COLUMNS + 1):
        rows = _rows_for(total, c)
        if rows > MAX_ROWS or rows * c > MAX_TOTAL_CODEWORDS:
            continue
        aspect = (rows * ROW_HEIGHT_MODULES) / (c * 17)
        key = (abs(aspect - 0.5), c)
        if best is None or key < best[0]:
            best = (key, c)
    if best is None:
        raise CapacityExceeded(
            f"{data_count} data codewords at ec level {ec_level} fit no geometry")
    return best[1]


def encode(payload: bytes, ec_level: int = 5, columns: int | None = None,
           mode_policy: ModePolicy = ModePolicy.AUTO) -> Pdf417Symbol:
    """Encode payload bytes as a PDF417 symbol."""
    if not payload:
        raise EmptyPayload("cannot encode an empty payload")
    data = compact(payload, mode_policy)
    ec_count = ec_codeword_count(ec_level)

    cols = auto_columns(len(data), ec_level) if columns is None else columns
    total = 1 + len(data) + ec_count
    rows = _rows_for(total, cols)
    if rows > MAX_ROWS:
        raise RowLimitExceeded(
            f"{total} codewords at {cols} columns need {rows} rows")
    if rows * cols > MAX_TOTAL_CODEWORDS:
        raise CapacityExceeded(
            f"{rows}x{cols} grid exceeds the {MAX_TOTAL_CODEWORDS}-codeword limit")

    pad_count = rows * cols - total
    descriptor = 1 + len(data) + pad_count
    full_data = [descriptor] + data + [PAD_CODEWORD] * pad_count
    ec = rs_generate(full_data, ec_level)
    return layout(full_data + ec, cols, ec_level)
