"""PDF417 codeword pattern tables and fixed start/stop patterns.

The three cluster tables (929 patterns each, for clusters 0/3/6) are
normative symbology data shipped as a versioned JSON asset; the recorded
sha256 guards against silent drift. Each pattern is a 17-bit integer,
MSB = leftmost module, 1 = dark.
"""

from __future__ import annotations

import hashlib
import json
from functools import lru_cache
from importlib import resources

CLUSTER_TABLE_ASSET = "pdf417_clusters.json"
CLUSTER_TABLE_SHA256 = "01b5ffb1933a3cc5afa0f2364d91a9951dcb3995396ddb704441d01058899faa"

MODULES_PER_CODEWORD = 17
START_PATTERN = 0b11111111010101000          # 17 modules
STOP_PATTERN = 0b111111101000101001          # 18 modules
STOP_MODULES = 18


def _asset_bytes() -> bytes:
    return resources.files("idbsynth.data").joinpath(CLUSTER_TABLE_ASSET).read_bytes()


def table_digest() -> str:
    return hashlib.sha256(_asset_bytes()).hexdigest()


@lru_cache(maxsize=1)
def cluster_tables() -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    """(cluster0, cluster3, cluster6), each mapping codeword value -> pattern."""
    tables = json.loads(_asset_bytes())
    if len(tables) != 3 or any(len(t) != 929 for t in tables):
        raise ValueError("cluster table asset is malformed")
    return tuple(tuple(t) for t in tables)


@lru_cache(maxsize=1)
def pattern_maps() -> tuple[dict[int, int], dict[int, int], dict[int, int]]:
    """Inverse tables: pattern -> codeword value, one dict per cluster."""
    return tuple({p: v for v, p in enumerate(t)} for t in cluster_tables())


def pattern_runs(pattern: int, modules: int = MODULES_PER_CODEWORD) -> list[int]:
    """Bar/space run lengths of a pattern, leftmost run first (a bar)."""
    bits = format(pattern, f"0{modules}b")
    runs = []
    cur = 1
    for a, b in zip(bits, bits[1:]):
        if a == b:
            cur += 1
        else:
            runs.append(cur)
            cur = 1
    runs.append(cur)
    return runs
