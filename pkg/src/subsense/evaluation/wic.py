"""Word-in-context classification with sense embeddings.

For each context the target's sense vector is selected by proximity to
the mean context vector; the pair is classified as same-meaning when the
two sense vectors' cosine reaches the threshold (0.68 in the shipped
default, tunable on a dev set).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from ..embeddings import EmbeddingMatrix, OovError

DEFAULT_THRESHOLD = 0.68


@dataclass(frozen=True)
class WicInstance:
    target: str
    pos: str
    index1: int
    index2: int
    context1: tuple[str, ...]
    context2: tuple[str, ...]
    gold: bool | None = None


def load_wic(data_path: str | Path, gold_path: str | Path | None = None) -> list[WicInstance]:
    """TSV rows: word, pos, "i-j" indices, context1, context2; gold file
    has one T/F per line when given."""
    rows: list[WicInstance] = []
    with open(data_path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            word, pos, indices, ctx1, ctx2 = line.split("\t")
            i1, i2 = indices.split("-")
            rows.append(
                WicInstance(
                    target=word,
                    pos=pos,
                    index1=int(i1),
                    index2=int(i2),
                    context1=tuple(ctx1.split()),
                    context2=tuple(ctx2.split()),
                )
            )
    if gold_path is not None:
        golds = [
            line.strip() for line in Path(gold_path).read_text("utf-8").splitlines() if line.strip()
        ]
        if len(golds) != len(rows):
            raise ValueError(f"{len(golds)} gold labels for {len(rows)} instances")
        rows = [
            WicInstance(r.target, r.pos, r.index1, r.index2, r.context1, r.context2, g == "T")
            for r, g in zip(rows, golds)
        ]
    return rows


def _context_without_target(context: Sequence[str], word: str, index: int) -> list[str]:
    # Drop the marked position (covers inflected targets) plus any exact echo.
    return [t for i, t in enumerate(context) if i != index and t != word]


def _sense_vector(emb: EmbeddingMatrix, word: str, context: Sequence[str], index: int):
    ctx_vec = emb.context_vector(_context_without_target(context, word, index))
    if emb.sense_tokens(word):
        return emb.vector(emb.select_sense(word, ctx_vec)), ctx_vec
    if word in emb:
        return emb.vector(word), ctx_vec
    raise OovError(word)


def wic_similarity(emb: EmbeddingMatrix, instance: WicInstance, shared_sense: bool = False) -> float | None:
    """Cosine between the per-context sense vectors (or, with
    shared_sense, between context 1's sense vector and context 2's mean
    vector). None marks an abstention: target or contexts out of vocabulary."""
    try:
        v1, _ = _sense_vector(emb, instance.target, instance.context1, instance.index1)
        if shared_sense:
            ctx2 = emb.context_vector(
                _context_without_target(instance.context2, instance.target, instance.index2)
            )
            n1, n2 = np.linalg.norm(v1), np.linalg.norm(ctx2)
            if n1 == 0 or n2 == 0:
                return 0.0
            return float(v1 @ ctx2 / (n1 * n2))
        v2, _ = _sense_vector(emb, instance.target, instance.context2, instance.index2)
        n1, n2 = np.linalg.norm(v1), np.linalg.norm(v2)
        if n1 == 0 or n2 == 0:
            return 0.0
        return float(v1 @ v2 / (n1 * n2))
    except OovError:
        return None


def wic_classify(
    emb: EmbeddingMatrix,
    instance: WicInstance,
    theta: float = DEFAULT_THRESHOLD,
    abstain_prediction: bool = True,
    shared_sense: bool = False,
) -> bool:
    """True iff the contexts keep one meaning: similarity >= theta.

    Out-of-vocabulary targets abstain and predict ``abstain_prediction``
    (majority class True by default).
    """
    sim = wic_similarity(emb, instance, shared_sense=shared_sense)
    if sim is None:
        return abstain_prediction
    return sim >= theta


def wic_evaluate(
    emb: EmbeddingMatrix,
    instances: Sequence[WicInstance],
    theta: float = DEFAULT_THRESHOLD,
    shared_sense: bool = False,
) -> dict:
    preds = [wic_classify(emb, inst, theta, shared_sense=shared_sense) for inst in instances]
    labeled = [(p, inst.gold) for p, inst in zip(preds, instances) if inst.gold is not None]
    acc = (
        sum(1 for p, g in labeled if p == g) / len(labeled) if labeled else float("nan")
    )
    return {
        "threshold": theta,
        "accuracy": acc,
        "num_instances": len(instances),
        "num_labeled": len(labeled),
        "predictions": ["T" if p else "F" for p in preds],
    }


def wic_tune_threshold(
    emb: EmbeddingMatrix, dev: Sequence[WicInstance], shared_sense: bool = False
) -> float:
    """Grid search (step 0.01 over [-1, 1]) maximizing dev accuracy;
    ties resolve to the smallest threshold."""
    if not dev:
        raise ValueError("empty dev set")
    sims = [wic_similarity(emb, inst, shared_sense=shared_sense) for inst in dev]
    golds = [inst.gold for inst in dev]
    if any(g is None for g in golds):
        raise ValueError("dev instances must carry gold labels")
    best_theta, best_acc = -1.0, -1.0
    for i in range(-100, 101):
        theta = i / 100.0
        correct = 0
        for sim, gold in zip(sims, golds):
            pred = True if sim is None else sim >= theta
            correct += pred == gold
        acc = correct / len(dev)
        if acc > best_acc:
            best_theta, best_acc = theta, acc
    return best_theta
