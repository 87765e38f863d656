"""Conformance checks over extractor output files.

Reads the interchange files back and verifies every schema invariant
(substitute count/uniqueness, no target echo, valid ids) and the
eligibility policy (no stopword / single-character / punctuation
targets). Violations are reported, not raised.
"""

from __future__ import annotations

import json
from pathlib import Path

from .extract import MAX_SUBSTITUTES, is_punctuation, load_stopwords


def validate_output(
    records_path: str | Path,
    vocab_path: str | Path,
    sentences_path: str | Path | None = None,
) -> dict:
    vocab = Path(vocab_path).read_text("utf-8").splitlines()
    vocab_size = len(vocab)
    stopwords = load_stopwords()

    sentences: dict[tuple[int, int], list[str]] = {}
    if sentences_path is not None:
        with open(sentences_path, "r", encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    obj = json.loads(line)
                    sentences[(obj["doc"], obj["sent"])] = obj["tokens"]

    schema_violations: list[str] = []
    eligibility_violations: list[str] = []
    n_records = 0

    def schema_issue(pos, msg):
        schema_violations.append(f"{pos}: {msg}")

    with open(records_path, "r", encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            n_records += 1
            obj = json.loads(line)
            pos = (obj.get("doc"), obj.get("sent"), obj.get("tok"))
            subs = obj.get("subs", [])
            target = obj.get("target")
            if not 1 <= len(subs) <= MAX_SUBSTITUTES:
                schema_issue(pos, f"{len(subs)} substitutes")
            if len(set(subs)) != len(subs):
                schema_issue(pos, "duplicate substitutes")
            if target in subs:
                schema_issue(pos, "target echoed in substitutes")
            for lid in [target, *subs]:
                if not isinstance(lid, int) or not 0 <= lid < vocab_size:
                    schema_issue(pos, f"lemma id {lid!r} out of range")

            if sentences:
                toks = sentences.get((obj.get("doc"), obj.get("sent")))
                if toks is None or obj.get("tok", -1) >= len(toks):
                    eligibility_violations.append(f"{pos}: unresolvable position")
                    continue
                surface = toks[obj["tok"]]
                if len(surface) <= 1:
                    eligibility_violations.append(f"{pos}: single-character target {surface!r}")
                elif is_punctuation(surface):
                    eligibility_violations.append(f"{pos}: punctuation target {surface!r}")
                elif surface.lower() in stopwords:
                    eligibility_violations.append(f"{pos}: stopword target {surface!r}")

    return {
        "records": n_records,
        "schema_violations": len(schema_violations),
        "eligibility_violations": len(eligibility_violations),
        "schema_detail": schema_violations[:50],
        "eligibility_detail": eligibility_violations[:50],
    }
