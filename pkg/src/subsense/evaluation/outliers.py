"""Ambiguity-aware outlier detection over sense embeddings.

Groups carry seven coherent words, one ambiguous distractor (whose
salient sense is out-of-group) and eight candidate outliers. Detection
first resolves each word to one sense vector, then ranks words by
compactness (mean pairwise similarity of the others); the least compact
word is the predicted outlier.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from ..embeddings import EmbeddingMatrix, OovError


class GroupError(ValueError):
    pass


@dataclass(frozen=True)
class OutlierGroup:
    ingroup: tuple[str, ...]   # 7 coherent words
    distractor: str
    outliers: tuple[str, ...]  # 8 candidate outliers

    def __post_init__(self):
        words = [*self.ingroup, self.distractor, *self.outliers]
        if len(self.ingroup) != 7 or len(self.outliers) != 8:
            raise GroupError(f"need 7 ingroup + 1 distractor + 8 outliers, got {len(self.ingroup)}+1+{len(self.outliers)}")
        if len(set(words)) != len(words):
            raise GroupError("group words must be distinct")

    def cases(self) -> list[tuple[list[str], str]]:
        """One test case per outlier: (8 group members, the outlier)."""
        members = [*self.ingroup, self.distractor]
        return [(list(members), o) for o in self.outliers]


def load_outlier_dataset(path: str | Path) -> list[OutlierGroup]:
    data = json.loads(Path(path).read_text("utf-8"))
    return [
        OutlierGroup(tuple(g["ingroup"]), g["distractor"], tuple(g["outliers"])) for g in data
    ]


def _candidates(emb: EmbeddingMatrix, word: str) -> list[str]:
    cands = emb.sense_tokens(word)
    if cands:
        return cands
    if word in emb:
        return [word]
    raise OovError(word)


def resolve_prototypes(emb: EmbeddingMatrix, words: Sequence[str]) -> dict[str, str]:
    """Pick one sense token per word so the set is mutually coherent.

    Starts each word at the sense closest to the centroid of all words'
    default vectors (sense 0, or the plain token), then runs coordinate-
    ascent sweeps in input order, re-choosing each word's sense to
    maximize its mean cosine to the others' current choices. Stops at a
    fixed point or after 10 sweeps.
    """
    cands = {w: _candidates(emb, w) for w in words}
    defaults = np.stack([emb.vector(cands[w][0]) for w in words])
    centroid = defaults.mean(axis=0)

    choice: dict[str, str] = {}
    for w in words:
        best, best_score = cands[w][0], -2.0
        for cand in cands[w]:
            score = emb.cosine_to_vector(cand, centroid)
            if score > best_score:
                best, best_score = cand, score
        choice[w] = best

    for _ in range(10):
        changed = False
        for w in words:
            others = [emb.vector(choice[o]) for o in words if o != w]
            if not others:
                continue
            other_mat = np.stack(others)
            other_unit = other_mat / np.maximum(np.linalg.norm(other_mat, axis=1, keepdims=True), 1e-12)
            best, best_score = choice[w], -2.0
            for cand in cands[w]:
                v = emb.vector(cand)
                norm = np.linalg.norm(v)
                if norm == 0:
                    score = 0.0
                else:
                    score = float((other_unit @ (v / norm)).mean())
                if score > best_score:
                    best, best_score = cand, score
            if best != choice[w]:
                choice[w] = best
                changed = True
        if not changed:
            break
    return choice


def compactness(
    emb: EmbeddingMatrix, words: Sequence[str], resolved: dict[str, str] | None = None
) -> dict[str, float]:
    """c(w): mean cosine over ordered distinct pairs of the set minus w."""
    if len(words) < 3:
        raise GroupError("compactness needs at least 3 words")
    resolved = resolved or resolve_prototypes(emb, words)
    vecs = np.stack([emb.vector(resolved[w]) for w in words]).astype(np.float64)
    unit = vecs / np.maximum(np.linalg.norm(vecs, axis=1, keepdims=True), 1e-12)
    sims = unit @ unit.T
    n = len(words)
    offdiag_total = float(sims.sum() - np.trace(sims))
    out: dict[str, float] = {}
    for i, w in enumerate(words):
        row = float(sims[i].sum() - sims[i, i])
        remaining = offdiag_total - 2.0 * row
        m = n - 1
        out[w] = remaining / (m * m - m)
    return out


def detect_outlier(
    emb: EmbeddingMatrix, members: Sequence[str], outlier: str
) -> tuple[str, int]:
    """Run one 9-word case; returns (predicted outlier, outlier position).

    c(w) averages the similarities of the *other* words, so removing the
    true outlier leaves the most compact rest: high c means likely
    outlier. Words are ranked by ascending c (stable in input order on
    ties); the prediction is the last-ranked word and the position is
    the true outlier's 0-based rank, so |W|-1 = 8 means detected.
    """
    words = [*members, outlier]
    if len(set(words)) != len(words):
        raise GroupError("case words must be distinct")
    try:
        resolved = resolve_prototypes(emb, words)
        scores = compactness(emb, words, resolved)
    except OovError as exc:
        raise GroupError(f"unresolvable word: {exc}") from exc
    ranked = sorted(words, key=lambda w: scores[w])
    return ranked[-1], ranked.index(outlier)


def opp_and_accuracy(results: Sequence[tuple[int, int]]) -> tuple[float, float]:
    """Aggregate (outlier position, group size) cases into (OPP, accuracy),
    both in percent; accuracy counts cases whose outlier ranked last."""
    if not results:
        raise ValueError("no results to aggregate")
    opp = 100.0 * sum(op / (size - 1) for op, size in results) / len(results)
    acc = 100.0 * sum(1 for op, size in results if op == size - 1) / len(results)
    return opp, acc


def evaluate_outlier_dataset(emb: EmbeddingMatrix, groups: Sequence[OutlierGroup]) -> dict:
    """Full dataset run; per-case detail plus aggregate OPP/accuracy."""
    cases = []
    results = []
    for gi, group in enumerate(groups):
        for members, outlier in group.cases():
            predicted, op = detect_outlier(emb, members, outlier)
            size = len(members) + 1
            results.append((op, size))
            cases.append(
                {
                    "group": gi,
                    "outlier": outlier,
                    "predicted": predicted,
                    "position": op,
                    "correct": op == size - 1,
                }
            )
    opp, acc = opp_and_accuracy(results)
    return {"opp": opp, "accuracy": acc, "num_cases": len(results), "cases": cases}
