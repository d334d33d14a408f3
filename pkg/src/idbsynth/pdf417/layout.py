"""PDF417 symbol layout: codewords -> module matrix.

Geometry: each row is start pattern (17 modules) + left row indicator +
`columns` data codewords + right row indicator (17 modules each) + stop
pattern (18 modules), so the matrix is 17*(columns+2) + 17 + 18 modules
wide. Rows are 3 modules tall, so the matrix has rows*3 bit rows. Row r
uses the cluster table for r mod 3, and the two row indicators encode
(rows, columns, ec level) through three rotating formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import RowLimitExceeded
from .rs import ec_codeword_count
from .tables import (
    MODULES_PER_CODEWORD,
    START_PATTERN,
    STOP_MODULES,
    STOP_PATTERN,
    cluster_tables,
)

PAD_CODEWORD = 900
MIN_ROWS = 3
MAX_ROWS = 90
MIN_COLUMNS = 1
MAX_COLUMNS = 30
ROW_HEIGHT_MODULES = 3
MAX_TOTAL_CODEWORDS = 928


@dataclass
class Pdf417Symbol:
    """A laid-out symbol: codeword content plus the rendered module grid."""

    data_codewords: list[int]
    ec_level: int
    ec_codewords: list[int]
    columns: int
    rows: int
    matrix: np.ndarray = field(repr=False)

    @property
    def width_modules(self) -> int:
        return self.matrix.shape[1]

    @property
    def height_modules(self) -> int:
        return self.matrix.shape[0]


def matrix_width(columns: int) -> int:
    return MODULES_PER_CODEWORD * (columns + 2) + MODULES_PER_CODEWORD + STOP_MODULES


def row_indicators(r: int, rows: int, columns: int, ec_level: int) -> tuple[int, int]:
    """(left, right) indicator codeword values for 0-based row r."""
    base = 30 * (r // 3)
    rows_q = (rows - 1) // 3
    rows_r = (rows - 1) % 3
    cluster = r % 3
    if cluster == 0:
        return base + rows_q, base + columns - 1
    if cluster == 1:
        return base + ec_level * 3 + rows_r, base + rows_q
    return base + columns - 1, base + ec_level * 3 + rows_r


def _pattern_bits(pattern: int, modules: int) -> np.ndarray:
    return np.array([(pattern >> (modules - 1 - i)) & 1 for i in range(modules)],
                    dtype=bool)


def layout(data_plus_ec: list[int], columns: int, ec_level: int) -> Pdf417Symbol:
    """Arrange codewords in a module matrix.

    The trailing 2^(ec_level+1) codewords are treated as the check block;
    pad codewords (900) are inserted just before it when the grid does not
    divide evenly. Callers that need a decodable symbol must pad before
    computing the check block (encode() does); layout itself is pure
    geometry.
    """
    if not MIN_COLUMNS <= columns <= MAX_COLUMNS:
        raise ValueError(f"columns must be in [1, 30], got {columns}")
    ec_count = ec_codeword_count(ec_level)
    if len(data_plus_ec) <= ec_count:
        raise ValueError("need at least one data codeword ahead of the check block")
    rows = max(MIN_ROWS, math.ceil(len(data_plus_ec) / columns))
    if rows > MAX_ROWS:
        raise RowLimitExceeded(
            f"{len(data_plus_ec)} codewords at {columns} columns need {rows} rows")
    pad_count = rows * columns - len(data_plus_ec)
    data = list(data_plus_ec[:-ec_count]) + [PAD_CODEWORD] * pad_count
    ec = list(data_plus_ec[-ec_count:])
    seq = data + ec

    tables = cluster_tables()
    width = matrix_width(columns)
    matrix = np.zeros((rows * ROW_HEIGHT_MODULES, width), dtype=bool)
    start_bits = _pattern_bits(START_PATTERN, MODULES_PER_CODEWORD)
    stop_bits = _pattern_bits(STOP_PATTERN, STOP_MODULES)

    for r in range(rows):
        table = tables[r % 3]
        left, right = row_indicators(r, rows, columns, ec_level)
        row_cws = [left] + seq[r * columns:(r + 1) * columns] + [right]
        bits = np.empty(width, dtype=bool)
        bits[:MODULES_PER_CODEWORD] = start_bits
        pos = MODULES_PER_CODEWORD
        for cw in row_cws:
            bits[pos:pos + MODULES_PER_CODEWORD] = _pattern_bits(
                table[cw], MODULES_PER_CODEWORD)
            pos += MODULES_PER_CODEWORD
        bits[pos:] = stop_bits
        matrix[r * ROW_HEIGHT_MODULES:(r + 1) * ROW_HEIGHT_MODULES] = bits

    return Pdf417Symbol(
        data_codewords=data,
        ec_level=ec_level,
        ec_codewords=ec,
        columns=columns,
        rows=rows,
        matrix=matrix,
    )
