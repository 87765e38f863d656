"""Extractor CLI: run a backend over raw text, emit interchange files."""

from __future__ import annotations

import argparse
import json
import sys

from .backends import BackendError, make_backend
from .extract import (
    ExtractorConfig,
    extract,
    write_manifest,
    write_records_jsonl,
    write_sentences_jsonl,
    write_vocab,
)
from .validate import validate_output


def cmd_extract(args) -> int:
    config = ExtractorConfig(
        model=args.model,
        k_raw=args.k_raw,
        batch_size=args.batch_size,
        max_sentence_length=args.max_len,
        doc_id=args.doc_id,
    )
    try:
        backend = make_backend(args.model, max_length=args.max_len, batch_size=args.batch_size)
    except BackendError as exc:
        print(f"fatal: {exc}", file=sys.stderr)
        return 1

    with open(args.infile, "r", encoding="utf-8") as fh:
        sentences = [line.split() for line in fh if line.strip()]
    result = extract(sentences, backend, config)

    write_records_jsonl(result.records, args.out)
    write_vocab(result.vocab, args.vocab)
    outputs = {"records": str(args.out), "vocab": str(args.vocab)}
    if args.sentences:
        write_sentences_jsonl(result.sentences, args.sentences)
        outputs["sentences"] = str(args.sentences)
    if args.manifest:
        write_manifest(args.manifest, backend, config, outputs)
    if result.skipped_too_long:
        print(f"warning: skipped {result.skipped_too_long} over-length sentences", file=sys.stderr)
    print(
        f"extract: {len(result.records)} records from {result.positions_eligible} eligible "
        f"of {result.positions_seen} positions; vocab {len(result.vocab)}"
    )
    return 0


def cmd_validate(args) -> int:
    report = validate_output(args.records, args.vocab, args.sentences)
    print(json.dumps(report, indent=2))
    ok = report["schema_violations"] == 0 and report["eligibility_violations"] == 0
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="subsense-extract", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="annotate a text corpus with substitute records")
    p.add_argument("--model", required=True,
                   help='backend: model path/name, "hash", or "hash:<lexicon file>"')
    p.add_argument("--in", dest="infile", required=True, help="input text, one sentence per line")
    p.add_argument("--out", required=True, help="records JSONL output")
    p.add_argument("--vocab", required=True, help="lemma vocabulary output")
    p.add_argument("--sentences", help="sentence-store JSONL output")
    p.add_argument("--manifest", help="extraction manifest JSON output")
    p.add_argument("--k-raw", type=int, default=20, help="candidates kept before normalization")
    p.add_argument("--batch-size", type=int, default=16)
    p.add_argument("--max-len", type=int, default=128)
    p.add_argument("--doc-id", type=int, default=0)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("validate", help="check an output shard against the schema")
    p.add_argument("--records", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--sentences")
    p.set_defaults(func=cmd_validate)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
