#!/usr/bin/env python3
"""Rebuild the fixture index from fixtures_meta.json.

Run after editing fixture texts, prompt templates, or client defaults so
replay-mode lookups keep matching the requests the pipeline actually
issues.
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from idbsynth.llm import DEFAULT_TEMPLATES, LlmRequest, DEFAULT_MODEL, render_prompt, request_hash
from idbsynth.records import DocumentKind


def main() -> None:
    fixture_dir = Path(__file__).resolve().parents[1] / "src/idbsynth/data/fixtures"
    meta = json.loads((fixture_dir / "fixtures_meta.json").read_text())
    index = {}
    for fixture_id, info in sorted(meta.items()):
        kind = DocumentKind(info["kind"])
        prompt = render_prompt(DEFAULT_TEMPLATES[kind], info["issuer"], info["country"])
        request = LlmRequest(model_name=DEFAULT_MODEL, prompt=prompt)
        index[request_hash(request)] = fixture_id
    out = fixture_dir / "index.json"
    out.write_text(json.dumps(index, indent=2, sort_keys=True) + "\n")
    print(f"wrote {out} with {len(index)} entries")


if __name__ == "__main__":
    main()
