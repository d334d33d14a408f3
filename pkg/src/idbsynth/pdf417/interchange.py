"""Matrix interchange formats for golden tests and external tooling.

Two representations: a plain-text grid ('#' = dark module, '.' = light,
one matrix row per line) and a bilevel raster where one module maps to an
N x N pixel block (dark = 0, light = 255).
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

DARK, LIGHT = "#", "."


def matrix_to_text(matrix: np.ndarray) -> str:
    rows = ["".join(DARK if cell else LIGHT for cell in row) for row in np.asarray(matrix)]
    return "\n".join(rows) + "\n"


def matrix_from_text(text: str) -> np.ndarray:
    lines = [ln for ln in text.splitlines() if ln]
    if not lines or any(len(ln) != len(lines[0]) for ln in lines):
        raise ValueError("text grid is empty or ragged")
    return np.array([[ch == DARK for ch in ln] for ln in lines], dtype=bool)


def matrix_to_pixels(matrix: np.ndarray, module_px: int = 1) -> np.ndarray:
    """uint8 image, one module = module_px x module_px pixels."""
    if module_px < 1:
        raise ValueError("module_px must be >= 1")
    grid = np.asarray(matrix, dtype=bool)
    img = np.where(grid, 0, 255).astype(np.uint8)
    return np.kron(img, np.ones((module_px, module_px), dtype=np.uint8))


def pixels_to_matrix(pixels: np.ndarray, module_px: int = 1) -> np.ndarray:
    """Re-quantize a bilevel raster by sampling module centers."""
    px = np.asarray(pixels)
    if px.ndim == 3:
        px = px.mean(axis=2)
    h, w = px.shape[0] // module_px, px.shape[1] // module_px
    centers = px[module_px // 2::module_px, module_px // 2::module_px]
    return centers[:h, :w] < 128


def save_matrix_image(matrix: np.ndarray, path: str | Path, module_px: int = 4) -> None:
    Image.fromarray(matrix_to_pixels(matrix, module_px), mode="L").save(path)


def load_matrix_image(path: str | Path, module_px: int = 4) -> np.ndarray:
    with Image.open(path) as im:
        return pixels_to_matrix(np.asarray(im.convert("L")), module_px)
