"""Barcode placement on document templates with detection annotations.

overlay() picks the largest integer module scale that fits the placement
rectangle including the quiet zone (quiet_zone counts total added modules
per axis), centers the symbol, and records everything verification needs
to re-extract the modules later. Bounding boxes exclude the quiet zone
and are stored YOLO-style (class, cx, cy, w, h normalized).
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np
from PIL import Image

from .code128 import Code128Symbol
from .errors import PlacementTooSmall
from .pdf417 import Pdf417Symbol
from .records import DocumentKind
from .seeding import STREAM_SPLIT, derive

PDF417_QUIET_MODULES = 4    # 2 per side, both axes
CODE128_QUIET_MODULES = 20  # 10 per side, horizontal only
CLASS_PDF417 = 0
CLASS_CODE128 = 1


@dataclass(frozen=True)
class TemplateSpec:
    template_id: str
    image_path: str
    width_px: int
    height_px: int
    placement: tuple[int, int, int, int]  # x, y, w, h
    symbology: str  # "pdf417" | "code128"
    document_kind: DocumentKind

    def __post_init__(self):
        x, y, w, h = self.placement
        if w < 40 or h < 40:
            raise ValueError(f"{self.template_id}: placement under 40 px")
        if x < 0 or y < 0 or x + w > self.width_px or y + h > self.height_px:
            raise ValueError(f"{self.template_id}: placement outside image bounds")
        if self.symbology not in ("pdf417", "code128"):
            raise ValueError(f"{self.template_id}: unknown symbology {self.symbology}")

    def load_image(self) -> np.ndarray:
        with Image.open(self.image_path) as im:
            return np.asarray(im.convert("RGB")).copy()


@dataclass
class DatasetSample:
    image: np.ndarray = field(repr=False)
    annotation: tuple[int, float, float, float, float]
    meta: dict


def load_template_manifest(path: str | Path | None = None) -> list[TemplateSpec]:
    """TemplateSpec entries from a manifest JSON (bundled by default)."""
    if path is None:
        root = resources.files("idbsynth.data").joinpath("templates")
        raw = root.joinpath("manifest.json").read_text()
        base = Path(str(root))
    else:
        path = Path(path)
        raw = path.read_text()
        base = path.parent
    specs = []
    for entry in json.loads(raw):
        image_path = Path(entry["image_path"])
        if not image_path.is_absolute():
            image_path = base / image_path
        specs.append(TemplateSpec(
            template_id=entry["template_id"], image_path=str(image_path),
            width_px=entry["width_px"], height_px=entry["height_px"],
            placement=tuple(entry["placement"]), symbology=entry["symbology"],
            document_kind=DocumentKind(entry["document_kind"])))
    return specs


def _code128_height_modules(width_modules: int) -> int:
    return int(min(90, max(24, round(0.15 * width_modules))))


def _symbol_grid(symbol) -> tuple[np.ndarray, int, int]:
    """(module grid, quiet_x, quiet_y) for either symbology."""
    if isinstance(symbol, Pdf417Symbol):
        return symbol.matrix, PDF417_QUIET_MODULES, PDF417_QUIET_MODULES
    if isinstance(symbol, Code128Symbol):
        bits = np.zeros(symbol.modules_total, dtype=bool)
        pos = 0
        dark = True
        for run in symbol.runs:
            if dark:
                bits[pos:pos + run] = True
            pos += run
            dark = not dark
        grid = np.tile(bits, (_code128_height_modules(symbol.modules_total), 1))
        return grid, CODE128_QUIET_MODULES, 0
    raise TypeError(f"unsupported symbol type {type(symbol)!r}")


def overlay(template: TemplateSpec, symbol,
            quiet_zone: int | None = None, image: np.ndarray | None = None,
            meta: dict | None = None) -> DatasetSample:
    """Render a symbol onto the template at its placement rectangle."""
    grid, default_qx, default_qy = _symbol_grid(symbol)
    quiet_x = default_qx if quiet_zone is None else quiet_zone
    quiet_y = default_qy if quiet_zone is None else (
        quiet_zone if isinstance(symbol, Pdf417Symbol) else 0)
    h_mod, w_mod = grid.shape
    px, py, pw, ph = template.placement

    scale = min(pw // (w_mod + quiet_x), ph // (h_mod + quiet_y))
    if scale < 1:
        raise PlacementTooSmall(
            f"{template.template_id}: {w_mod + quiet_x}x{h_mod + quiet_y} modules "
            f"exceed {pw}x{ph} px placement")

    full_w = (w_mod + quiet_x) * scale
    full_h = (h_mod + quiet_y) * scale
    fx = px + (pw - full_w) // 2
    fy = py + (ph - full_h) // 2
    sx = fx + (quiet_x // 2) * scale
    sy = fy + (quiet_y // 2) * scale

    canvas = template.load_image() if image is None else image
    canvas[fy:fy + full_h, fx:fx + full_w] = 255
    scaled = np.repeat(np.repeat(grid, scale, axis=0), scale, axis=1)
    region = canvas[sy:sy + h_mod * scale, sx:sx + w_mod * scale]
    region[scaled] = 0

    img_h, img_w = canvas.shape[:2]
    bw, bh = w_mod * scale, h_mod * scale
    cx = (sx + bw / 2) / img_w
    cy = (sy + bh / 2) / img_h
    class_id = CLASS_PDF417 if isinstance(symbol, Pdf417Symbol) else CLASS_CODE128
    sample_meta = {
        "template_id": template.template_id,
        "symbology": template.symbology,
        "document_kind": template.document_kind.value,
        "module_origin": [int(sx), int(sy)],
        "module_scale": int(scale),
        "grid_shape": [int(h_mod), int(w_mod)],
        "augmentations": [],
    }
    if meta:
        sample_meta.update(meta)
    return DatasetSample(
        image=canvas,
        annotation=(class_id, cx, cy, bw / img_w, bh / img_h),
        meta=sample_meta)


def emit_annotation(sample: DatasetSample) -> str:
    class_id, cx, cy, w, h = sample.annotation
    return f"{class_id} {cx:.6f} {cy:.6f} {w:.6f} {h:.6f}"


def parse_annotation(line: str) -> tuple[int, float, float, float, float]:
    parts = line.split()
    if len(parts) != 5:
        raise ValueError(f"annotation needs 5 fields, got {len(parts)}")
    return (int(parts[0]),) + tuple(float(p) for p in parts[1:])


def split_dataset(samples: list[DatasetSample], train_fraction: float,
                  seed: int) -> tuple[list[DatasetSample], list[DatasetSample]]:
    """Stratified by document kind: per-kind shuffle, floor(fraction) to train."""
    if not 0 < train_fraction < 1:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    by_kind: dict[str, list[DatasetSample]] = {}
    for sample in samples:
        by_kind.setdefault(sample.meta["document_kind"], []).append(sample)
    train: list[DatasetSample] = []
    val: list[DatasetSample] = []
    for kind_idx, kind in enumerate(sorted(by_kind)):
        group = by_kind[kind]
        rng = random.Random(derive(seed, STREAM_SPLIT, kind_idx))
        order = list(range(len(group)))
        rng.shuffle(order)
        n_train = math.floor(train_fraction * len(group))
        train.extend(group[i] for i in order[:n_train])
        val.extend(group[i] for i in order[n_train:])
    return train, val


# ---------------------------------------------------------------------------
# module re-extraction (verification support)
# ---------------------------------------------------------------------------

def extract_modules(image: np.ndarray, meta: dict) -> np.ndarray:
    """Re-quantize the rendered symbol by sampling module centers."""
    sx, sy = meta["module_origin"]
    scale = meta["module_scale"]
    h_mod, w_mod = meta["grid_shape"]
    gray = image.astype(np.float64).mean(axis=2)
    ys = sy + np.arange(h_mod) * scale + scale // 2
    xs = sx + np.arange(w_mod) * scale + scale // 2
    ys = np.clip(ys, 0, gray.shape[0] - 1)
    xs = np.clip(xs, 0, gray.shape[1] - 1)
    return gray[np.ix_(ys, xs)] < 128


def modules_to_runs(bits: np.ndarray) -> list[int]:
    """Row of modules -> bar-first run lengths (for Code 128 decoding)."""
    bits = np.asarray(bits, dtype=bool)
    if not bits.any():
        return []
    first = int(np.argmax(bits))
    last = len(bits) - int(np.argmax(bits[::-1]))
    row = bits[first:last]
    runs = []
    cur = 1
    for a, b in zip(row, row[1:]):
        if a == b:
            cur += 1
        else:
            runs.append(cur)
            cur = 1
    runs.append(cur)
    return runs
