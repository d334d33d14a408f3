"""PDF417 matrix decoder: module grid -> payload bytes.

Works on clean, unrotated module grids (1 bit = 1 module). Row height is
auto-detected: for each candidate repetition factor the grid is collapsed
by per-column majority vote and scored by how many row indicators match
their expected cluster table, so both 1-module and 3-module tall rows
decode, and stray cell flips inside a band get outvoted. Codeword-level
damage is left to the Reed-Solomon stage.
"""

from __future__ import annotations

import numpy as np

from ..errors import GeometryMismatch, UncorrectableSymbol, UnknownPattern
from .compaction import decompact
from .rs import ec_codeword_count, rs_correct
from .tables import (
    MODULES_PER_CODEWORD,
    START_PATTERN,
    STOP_MODULES,
    STOP_PATTERN,
    pattern_maps,
)

_MAX_UNMATCHED_FRACTION = 0.5


def _candidate_band_heights(height: int) -> list[int]:
    return [v for v in range(1, height // 3 + 1)
            if height % v == 0 and 3 <= height // v <= 90]


def _collapse(matrix: np.ndarray, v: int) -> np.ndarray:
    """Majority-vote each band of v grid rows down to one module row."""
    rows = matrix.shape[0] // v
    counts = matrix.reshape(rows, v, matrix.shape[1]).sum(axis=1)
    return counts * 2 >= v + (v % 2 == 0)  # ties on even v go dark


def _chunk_values(bits: np.ndarray) -> np.ndarray:
    """17-bit chunks of a row body as integers."""
    weights = 1 << np.arange(MODULES_PER_CODEWORD - 1, -1, -1, dtype=np.int64)
    body = bits.astype(np.int64).reshape(-1, MODULES_PER_CODEWORD)
    return body @ weights


def _majority(values: list[int]) -> int:
    best, best_n = -1, 0
    counts: dict[int, int] = {}
    for val in values:
        counts[val] = counts.get(val, 0) + 1
        if counts[val] > best_n:
            best, best_n = val, counts[val]
    return best


def decode_matrix(matrix) -> bytes:
    """Decode a module grid back to the payload it encodes."""
    grid = np.asarray(matrix, dtype=bool)
    if grid.ndim != 2:
        raise ValueError("matrix must be 2-D")
    height, width = grid.shape
    columns = (width - (3 * MODULES_PER_CODEWORD + STOP_MODULES)) / MODULES_PER_CODEWORD
    if columns != int(columns) or not 1 <= columns <= 30:
        raise GeometryMismatch(f"matrix width {width} fits no column count")
    columns = int(columns)

    maps = pattern_maps()
    candidates = _candidate_band_heights(height)
    if not candidates:
        raise GeometryMismatch(f"matrix height {height} fits no row count")

    best_v, best_bands, best_score = None, None, -1.0
    for v in candidates:
        bands = _collapse(grid, v)
        score = 0
        for b in range(bands.shape[0]):
            body = bands[b, MODULES_PER_CODEWORD:width - STOP_MODULES]
            vals = _chunk_values(body)
            table = maps[b % 3]
            score += int(vals[0]) in table
            score += int(vals[-1]) in table
        frac = score / (2 * bands.shape[0])
        if frac > best_score or (frac == best_score and v > (best_v or 0)):
            best_v, best_bands, best_score = v, bands, frac
    if best_score < 0.5:
        raise UnknownPattern("row indicators match no cluster table")
    bands = best_bands
    rows = bands.shape[0]

    start_hits = sum(
        int(_chunk_values(bands[b, :MODULES_PER_CODEWORD])[0]) == START_PATTERN
        for b in range(rows))
    if start_hits * 2 < rows:
        raise UnknownPattern("start pattern absent from most rows")
    stop_weights = 1 << np.arange(STOP_MODULES - 1, -1, -1, dtype=np.int64)
    stop_hits = sum(
        int(bands[b, width - STOP_MODULES:].astype(np.int64) @ stop_weights) == STOP_PATTERN
        for b in range(rows))
    if stop_hits * 2 < rows:
        raise UnknownPattern("stop pattern absent from most rows")

    # Decode indicators and vote on the geometry they encode.
    rows_q_votes, rows_r_votes, ec_votes, cols_votes = [], [], [], []
    row_values: list[list[int]] = []
    unmatched = 0
    for b in range(rows):
        body = bands[b, MODULES_PER_CODEWORD:width - STOP_MODULES]
        vals = _chunk_values(body)
        cluster = b % 3
        table = maps[cluster]
        left = table.get(int(vals[0]))
        right = table.get(int(vals[-1]))
        # Indicator payloads rotate by cluster: rows quotient, ec level with
        # rows remainder, and column count.
        def vote_rows_q(payload):
            rows_q_votes.append(payload)

        def vote_ec_and_rows_r(payload):
            ec_votes.append(payload // 3)
            rows_r_votes.append(payload % 3)

        def vote_cols(payload):
            cols_votes.append(payload + 1)

        dispatch = {
            0: (vote_rows_q, vote_cols),
            1: (vote_ec_and_rows_r, vote_rows_q),
            2: (vote_cols, vote_ec_and_rows_r),
        }[cluster]
        if left is not None:
            dispatch[0](left % 30)
        if right is not None:
            dispatch[1](right % 30)
        data_vals = []
        for x in vals[1:-1]:
            value = table.get(int(x))
            if value is None or value > 928:
                unmatched += 1
                value = 0
            data_vals.append(value)
        row_values.append(data_vals)

    if not rows_q_votes or not rows_r_votes or not ec_votes or not cols_votes:
        raise GeometryMismatch("row indicators unreadable")
    rows_decoded = 3 * _majority(rows_q_votes) + _majority(rows_r_votes) + 1
    cols_decoded = _majority(cols_votes)
    ec_level = _majority(ec_votes)
    if rows_decoded != rows:
        raise GeometryMismatch(
            f"indicators claim {rows_decoded} rows, matrix has {rows}")
    if cols_decoded != columns:
        raise GeometryMismatch(
            f"indicators claim {cols_decoded} columns, matrix has {columns}")
    if not 0 <= ec_level <= 8:
        raise GeometryMismatch(f"indicators claim ec level {ec_level}")

    sequence = [v for row in row_values for v in row]
    if unmatched > _MAX_UNMATCHED_FRACTION * len(sequence):
        raise UnknownPattern(
            f"{unmatched} of {len(sequence)} codeword patterns unrecognized")

    ec_count = ec_codeword_count(ec_level)
    if len(sequence) <= ec_count:
        raise GeometryMismatch("symbol too small for its check block")
    corrected, _ = rs_correct(sequence, ec_count)

    descriptor = corrected[0]
    if not 1 <= descriptor <= len(sequence) - ec_count:
        raise UncorrectableSymbol(f"implausible length descriptor {descriptor}")
    return decompact(corrected[1:descriptor])
