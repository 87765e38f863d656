"""Command-line pipeline driver.

Subcommands cover every pipeline stage (synth/index/induce/tag/train),
the evaluation battery (eval-wic, eval-outlier, eval-cluster), ad-hoc
queries (neighbors, induce --lemma) and the HTTP service; ``pipeline``
chains the stages into one run directory.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import artifacts as art
from .embeddings import EmbeddingConfig, EmbeddingMatrix, train_file
from .index import build_index, load_index, save_index
from .induction import (
    InductionConfig,
    build_inventory,
    dump_inventory_text,
    format_inventory_entry,
    induce_senses,
    load_inventory,
    save_inventory,
)
from .records import SentenceStore, read_records, write_records
from .synth import generate_synth_corpus, save_gold, spec_from_json
from .tagging import tag_corpus
from .vocab import load_vocab


def _write_report(report: dict, path: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True)
    if path:
        Path(path).write_text(text + "\n", "utf-8")
    print(text)


def cmd_synth(args) -> int:
    spec = spec_from_json(args.spec)
    if args.seed is not None:
        spec.seed = args.seed
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    corpus = generate_synth_corpus(spec)
    corpus.vocab.save(out / art.VOCAB_FILE)
    vocab_sha = corpus.vocab.sha256()
    corpus.sentences.save(out / art.SENTENCES_FILE)
    write_records(out / art.RECORDS_FILE, corpus.records)
    save_gold(corpus.gold, out / art.GOLD_FILE)
    for name in (art.VOCAB_FILE, art.SENTENCES_FILE, art.RECORDS_FILE, art.GOLD_FILE):
        art.record_artifact(out, name, vocab_sha)
    print(f"synth: {len(corpus.records)} records, vocab {len(corpus.vocab)}, -> {out}")
    return 0


def cmd_index(args) -> int:
    out = Path(args.dir)
    vocab = load_vocab(out / art.VOCAB_FILE)
    record_files = args.records or [str(out / art.RECORDS_FILE)]
    shards = [build_index(read_records(f), vocab_size=len(vocab)) for f in record_files]
    if len(shards) == 1:
        index = shards[0]
    else:
        from .index import merge_indexes

        index = merge_indexes(shards)
    save_index(index, out / art.INDEX_FILE)
    art.record_artifact(out, art.INDEX_FILE, vocab.sha256())
    print(f"index: {index.total_records()} postings over {len(index.lemmas())} lemmas")
    return 0


def _induction_config(args) -> InductionConfig:
    return InductionConfig(
        sample_cap=args.cap,
        min_occurrences=args.min_occurrences,
        resolution=args.resolution,
        seed=args.seed,
    )


def cmd_induce(args) -> int:
    out = Path(args.dir)
    vocab = load_vocab(out / art.VOCAB_FILE)
    index = load_index(out / art.INDEX_FILE)
    config = _induction_config(args)
    if args.lemma is not None:
        lemma = vocab.get(args.lemma)
        if lemma is None:
            print(f"error: {args.lemma!r} is not in the vocabulary", file=sys.stderr)
            return 1
        clusters = induce_senses(lemma, index, config)
        if not clusters:
            print(f"error: {args.lemma!r} has no indexed occurrences", file=sys.stderr)
            return 1
        print(format_inventory_entry(lemma, clusters, vocab))
        return 0
    inventory = build_inventory(index, config, workers=args.workers)
    save_inventory(inventory, out / art.INVENTORY_FILE)
    dump_inventory_text(inventory, vocab, out / art.INVENTORY_TEXT_FILE)
    art.record_artifact(out, art.INVENTORY_FILE, vocab.sha256())
    print(
        f"induce: {len(inventory)} lemmas, "
        f"mean {inventory.mean_senses_per_lemma():.2f} senses/lemma"
    )
    return 0


def cmd_tag(args) -> int:
    out = Path(args.dir)
    vocab = load_vocab(out / art.VOCAB_FILE)
    index = load_index(out / art.INDEX_FILE)
    inventory = load_inventory(out / art.INVENTORY_FILE)
    sentences = SentenceStore.load(out / art.SENTENCES_FILE)
    tagged = tag_corpus(index, inventory, sentences)
    tagged.write_corpus(out / art.TAGGED_FILE)
    tagged.write_sidecar(out / art.SIDECAR_FILE)
    vocab_sha = vocab.sha256()
    art.record_artifact(out, art.TAGGED_FILE, vocab_sha)
    art.record_artifact(out, art.SIDECAR_FILE, vocab_sha)
    print(f"tag: {len(tagged.assignments)} occurrences tagged")
    return 0


def _embedding_config(args) -> EmbeddingConfig:
    return EmbeddingConfig(
        dim=args.dim,
        window=args.window,
        mode=args.mode,
        negatives=args.negatives,
        epochs=args.epochs,
        learning_rate=args.lr,
        min_count=args.min_count,
        subsample=args.subsample,
        seed=args.seed,
        workers=args.workers,
    )


def cmd_train(args) -> int:
    out = Path(args.dir)
    corpus = Path(args.corpus) if args.corpus else out / art.TAGGED_FILE
    emb = train_file(corpus, _embedding_config(args))
    emb.save_text(out / art.VECTORS_FILE)
    if args.binary:
        emb.save_binary(out / (art.VECTORS_FILE + ".bin"))
    vocab_path = out / art.VOCAB_FILE
    if vocab_path.exists():
        art.record_artifact(out, art.VECTORS_FILE, load_vocab(vocab_path).sha256())
    print(f"train: {len(emb)} vectors of dim {emb.dim}")
    return 0


def cmd_eval_wic(args) -> int:
    from .evaluation import load_wic, wic_evaluate, wic_tune_threshold

    emb = EmbeddingMatrix.load(args.emb)
    theta = args.theta
    if args.tune_data:
        dev = load_wic(args.tune_data, args.tune_gold)
        theta = wic_tune_threshold(emb, dev)
        print(f"tuned threshold: {theta:.2f}")
    instances = load_wic(args.data, args.gold)
    report = wic_evaluate(emb, instances, theta)
    _write_report(report, args.report)
    return 0


def cmd_eval_outlier(args) -> int:
    from .evaluation import evaluate_outlier_dataset, load_outlier_dataset

    emb = EmbeddingMatrix.load(args.emb)
    groups = load_outlier_dataset(args.data)
    report = evaluate_outlier_dataset(emb, groups)
    _write_report(report, args.report)
    return 0


def cmd_eval_cluster(args) -> int:
    from .evaluation import best_cluster_label_map, paired_fscore, tagging_f1, v_measure

    gold = json.loads(Path(args.gold).read_text("utf-8"))
    pred = json.loads(Path(args.pred).read_text("utf-8"))
    mapping = best_cluster_label_map(gold, pred)
    report = {
        "paired_fscore": paired_fscore(gold, pred),
        "v_measure": v_measure(gold, pred),
        "tagging_f1_best_map": tagging_f1(gold, pred, mapping),
        "num_instances": len(gold),
    }
    _write_report(report, args.report)
    return 0


def cmd_neighbors(args) -> int:
    emb = EmbeddingMatrix.load(args.emb)
    for token, cos in emb.nearest_neighbors(args.token, args.k, tagged_only=args.tagged_only):
        print(f"{token}\t{cos:.4f}")
    return 0


def cmd_serve(args) -> int:
    from .service import serve

    serve(args.dir, host=args.host, port=args.port, static_dir=args.static)
    return 0


def cmd_pipeline(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.synth:
        rc = cmd_synth(argparse.Namespace(spec=args.synth, out=str(out), seed=args.seed))
        if rc:
            return rc
    else:
        if not (args.records and args.vocab and args.sentences):
            print("error: pipeline needs --synth or all of --records/--vocab/--sentences", file=sys.stderr)
            return 2
        vocab = load_vocab(args.vocab)
        vocab.save(out / art.VOCAB_FILE)
        write_records(out / art.RECORDS_FILE, read_records(args.records))
        SentenceStore.load(args.sentences).save(out / art.SENTENCES_FILE)
        for name in (art.VOCAB_FILE, art.RECORDS_FILE, art.SENTENCES_FILE):
            art.record_artifact(out, name, vocab.sha256())
    steps = [
        lambda: cmd_index(argparse.Namespace(dir=str(out), records=None)),
        lambda: cmd_induce(
            argparse.Namespace(
                dir=str(out),
                lemma=None,
                cap=args.cap,
                min_occurrences=args.min_occurrences,
                resolution=args.resolution,
                seed=args.seed,
                workers=args.workers,
            )
        ),
        lambda: cmd_tag(argparse.Namespace(dir=str(out))),
        lambda: cmd_train(
            argparse.Namespace(
                dir=str(out),
                corpus=None,
                dim=args.dim,
                window=args.window,
                mode=args.mode,
                negatives=args.negatives,
                epochs=args.epochs,
                lr=args.lr,
                min_count=args.min_count,
                subsample=args.subsample,
                seed=args.seed,
                workers=1,
                binary=False,
            )
        ),
    ]
    for step in steps:
        rc = step()
        if rc:
            return rc
    print(f"pipeline: artifacts in {out}")
    return 0


def _add_induce_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--cap", type=int, default=1000, help="occurrence sample cap per lemma")
    p.add_argument("--min-occurrences", type=int, default=20)
    p.add_argument("--resolution", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)


def _add_train_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dim", type=int, default=100)
    p.add_argument("--window", type=int, default=5)
    p.add_argument("--mode", choices=["cbow", "skipgram"], default="cbow")
    p.add_argument("--negatives", type=int, default=5)
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--lr", type=float, default=0.025)
    p.add_argument("--min-count", type=int, default=5)
    p.add_argument("--subsample", type=float, default=1e-3)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="subsense", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a planted-sense corpus")
    p.add_argument("--spec", required=True, help="SynthSpec JSON file")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=None, help="override the seed in the SynthSpec file")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("index", help="build the inverted index")
    p.add_argument("--dir", required=True, help="run directory (vocab.txt inside)")
    p.add_argument("--records", action="append", help="record shard (repeatable); default records.jsonl")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("induce", help="induce sense inventories")
    p.add_argument("--dir", required=True)
    p.add_argument("--lemma", help="print the sense table for one word instead of writing files")
    _add_induce_flags(p)
    p.set_defaults(func=cmd_induce)

    p = sub.add_parser("tag", help="tag the corpus with sense ids")
    p.add_argument("--dir", required=True)
    p.set_defaults(func=cmd_tag)

    p = sub.add_parser("train", help="train sense embeddings on the tagged corpus")
    p.add_argument("--dir", required=True)
    p.add_argument("--corpus", help="tagged corpus path; default <dir>/tagged.txt")
    p.add_argument("--binary", action="store_true", help="also write the binary vector file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    _add_train_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval-wic", help="word-in-context evaluation")
    p.add_argument("--emb", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--gold")
    p.add_argument("--theta", type=float, default=0.68)
    p.add_argument("--tune-data", help="dev TSV for threshold tuning")
    p.add_argument("--tune-gold")
    p.add_argument("--report")
    p.set_defaults(func=cmd_eval_wic)

    p = sub.add_parser("eval-outlier", help="outlier detection evaluation")
    p.add_argument("--emb", required=True)
    p.add_argument("--data", required=True, help="groups JSON")
    p.add_argument("--report")
    p.set_defaults(func=cmd_eval_outlier)

    p = sub.add_parser("eval-cluster", help="clustering metrics for labelings")
    p.add_argument("--gold", required=True, help="JSON {instance: label}")
    p.add_argument("--pred", required=True, help="JSON {instance: cluster}")
    p.add_argument("--report")
    p.set_defaults(func=cmd_eval_cluster)

    p = sub.add_parser("neighbors", help="nearest neighbors of a token")
    p.add_argument("--emb", required=True)
    p.add_argument("--token", required=True)
    p.add_argument("-k", type=int, default=10)
    p.add_argument("--tagged-only", action="store_true")
    p.set_defaults(func=cmd_neighbors)

    p = sub.add_parser("serve", help="run the sense search service")
    p.add_argument("--dir", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--static", help="static frontend directory to serve at /")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("pipeline", help="synth-or-extract -> index -> induce -> tag -> train")
    p.add_argument("--out", required=True)
    p.add_argument("--synth", help="SynthSpec JSON (else supply extractor outputs)")
    p.add_argument("--records", help="extractor records file")
    p.add_argument("--vocab", help="extractor vocab file")
    p.add_argument("--sentences", help="extractor sentence store")
    _add_induce_flags(p)
    _add_train_flags(p)
    p.set_defaults(func=cmd_pipeline)

    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return 0
    except Exception as exc:  # surfaced as a diagnostic, nonzero exit
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
