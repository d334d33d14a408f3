#!/usr/bin/env python3
"""Regenerate the bundled template PNGs and their manifest."""

import json
import sys
from pathlib import Path

from PIL import Image

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from idbsynth.templates import TEMPLATE_IDS, render_template_image, template_design


def main() -> None:
    out_dir = Path(__file__).resolve().parents[1] / "src/idbsynth/data/templates"
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = []
    for template_id in TEMPLATE_IDS:
        design = template_design(template_id)
        img = render_template_image(template_id)
        Image.fromarray(img, mode="RGB").save(out_dir / f"{template_id}.png")
        width, height = design["size"]
        manifest.append({
            "template_id": template_id,
            "image_path": f"{template_id}.png",
            "width_px": width,
            "height_px": height,
            "placement": list(design["placement"]),
            "symbology": design["symbology"],
            "document_kind": design["kind"].value,
        })
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    print(f"wrote {len(manifest)} templates to {out_dir}")


if __name__ == "__main__":
    main()
