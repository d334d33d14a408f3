"""Bundled synthetic document templates.

Six flat-color card faces (two per document kind) with decorative borders
and blank text placeholders; no personal text is ever rendered. Drawn
deterministically with numpy so the PNGs in data/templates can always be
regenerated byte-identically (scripts/make_templates.py).
"""

from __future__ import annotations

import numpy as np

from .records import DocumentKind


def _fill(img, x, y, w, h, color):
    img[y:y + h, x:x + w] = color


def _frame(img, x, y, w, h, thickness, color):
    _fill(img, x, y, w, thickness, color)
    _fill(img, x, y + h - thickness, w, thickness, color)
    _fill(img, x, y, thickness, h, color)
    _fill(img, x + w - thickness, y, thickness, h, color)


_DESIGNS = {
    "dl_classic": dict(kind=DocumentKind.DRIVER_LICENSE, size=(1120, 700),
                       placement=(60, 400, 1000, 270), symbology="pdf417",
                       base=(226, 233, 240), band=(38, 70, 120), trim=(120, 144, 176)),
    "dl_modern": dict(kind=DocumentKind.DRIVER_LICENSE, size=(1120, 700),
                      placement=(80, 430, 960, 240), symbology="pdf417",
                      base=(236, 228, 214), band=(120, 82, 38), trim=(178, 158, 128)),
    "ins_classic": dict(kind=DocumentKind.INSURANCE_CARD, size=(5040, 920),
                        placement=(70, 640, 4900, 230), symbology="code128",
                        base=(222, 238, 236), band=(20, 104, 96), trim=(130, 180, 174)),
    "ins_modern": dict(kind=DocumentKind.INSURANCE_CARD, size=(5040, 920),
                       placement=(120, 620, 4800, 250), symbology="code128",
                       base=(238, 234, 244), band=(88, 62, 138), trim=(168, 156, 196)),
    "uni_classic": dict(kind=DocumentKind.UNIVERSITY_ID, size=(1000, 640),
                        placement=(60, 380, 880, 230), symbology="pdf417",
                        base=(240, 230, 228), band=(140, 36, 44), trim=(190, 130, 134)),
    "uni_modern": dict(kind=DocumentKind.UNIVERSITY_ID, size=(1000, 640),
                       placement=(80, 400, 840, 210), symbology="pdf417",
                       base=(228, 238, 228), band=(40, 110, 60), trim=(140, 178, 148)),
}

TEMPLATE_IDS = tuple(_DESIGNS)


def template_design(template_id: str) -> dict:
    return dict(_DESIGNS[template_id])


def render_template_image(template_id: str) -> np.ndarray:
    """Deterministic card face as an RGB uint8 array."""
    design = _DESIGNS[template_id]
    width, height = design["size"]
    img = np.empty((height, width, 3), dtype=np.uint8)
    img[:] = design["base"]

    _frame(img, 0, 0, width, height, max(6, height // 90), design["band"])
    _frame(img, 14, 14, width - 28, height - 28, 3, design["trim"])

    band_h = height // 7
    _fill(img, 0, 0, width, band_h, design["band"])
    _fill(img, 0, band_h, width, 6, design["trim"])

    # Blank placeholder strips where printed text would sit.
    line_color = tuple(min(255, c + 10) for c in design["trim"])
    y = band_h + height // 14
    line_h = max(10, height // 36)
    left = width // 16
    if design["kind"] in (DocumentKind.DRIVER_LICENSE, DocumentKind.UNIVERSITY_ID):
        photo_w, photo_h = width // 5, int(height // 2.6)
        _fill(img, left, y, photo_w, photo_h, line_color)
        _frame(img, left, y, photo_w, photo_h, 3, design["band"])
        text_x = left + photo_w + width // 20
    else:
        text_x = left
    text_w = width - text_x - width // 16
    while y + line_h < design["placement"][1] - height // 20:
        _fill(img, text_x, y, int(text_w * 0.82), line_h, line_color)
        y += line_h + height // 24

    return img
