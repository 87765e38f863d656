"""Jaccard sense assignment and sense-suffixed corpus emission.

Every indexed occurrence is assigned the sense whose representative set
maximizes Jaccard overlap with the occurrence's substitutes, then
sentences are re-emitted with ``surface@senseid`` tokens. A literal "@"
inside a surface token is doubled on output so tag suffixes stay
machine-separable.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from .induction import SenseCluster, SenseInventory
from .records import SentenceStore


class TagError(ValueError):
    """An indexed occurrence has no inventory entry to tag against."""


def jaccard(a: set | frozenset, b: set | frozenset) -> float:
    """|A n B| / |A u B|; defined as 0 for two empty sets."""
    union = len(a | b)
    if union == 0:
        return 0.0
    return len(a & b) / union


def _assign_from_sets(
    subs: frozenset, rep_sets: list[tuple[int, frozenset]]
) -> tuple[int, float, bool]:
    best_id, best_score = 0, -1.0
    for sense_id, reps in rep_sets:
        score = jaccard(subs, reps)
        if score > best_score:
            best_id, best_score = sense_id, score
    if best_score <= 0.0:
        return 0, 0.0, False
    return best_id, best_score, True


def assign_sense(
    substitutes: Iterable[int], clusters: list[SenseCluster]
) -> tuple[int, float, bool]:
    """Argmax-Jaccard sense for one occurrence.

    Ties go to the lowest sense id; when every score is zero the
    most-supported sense (id 0) is returned with confident=False.
    """
    if not clusters:
        raise TagError("empty inventory entry")
    rep_sets = [(c.sense_id, frozenset(c.representatives)) for c in clusters]
    return _assign_from_sets(frozenset(substitutes), rep_sets)


# --------------------------------------------------------------------------
# Token escaping


_TAGGED_RE = re.compile(r"((?:[^@]|@@)*)@(\d+)$")
_PLAIN_RE = re.compile(r"(?:[^@]|@@)*$")


def escape_surface(surface: str) -> str:
    return surface.replace("@", "@@")


def tagged_token(surface: str, sense_id: int) -> str:
    return f"{escape_surface(surface)}@{sense_id}"


def parse_token(token: str) -> tuple[str, int | None]:
    """Inverse of emission: -> (surface, sense id or None)."""
    m = _TAGGED_RE.fullmatch(token)
    if m:
        return m.group(1).replace("@@", "@"), int(m.group(2))
    if _PLAIN_RE.fullmatch(token):
        return token.replace("@@", "@"), None
    raise ValueError(f"malformed token {token!r}")


# --------------------------------------------------------------------------
# Corpus tagging


@dataclass(frozen=True)
class Assignment:
    doc_id: int
    sent_idx: int
    token_idx: int
    lemma: int
    sense: int
    confident: bool

    @property
    def position(self) -> tuple[int, int, int]:
        return (self.doc_id, self.sent_idx, self.token_idx)


@dataclass
class TaggedCorpus:
    assignments: dict[tuple[int, int, int], Assignment]
    sense_counts: dict[tuple[int, int], int]  # (lemma, sense) -> occurrences
    sentences: SentenceStore

    def lines(self) -> Iterator[str]:
        """Tagged corpus text: one sentence per line, space-joined tokens."""
        for (doc, sent), tokens in self.sentences.items():
            out = []
            for ti, tok in enumerate(tokens):
                a = self.assignments.get((doc, sent, ti))
                out.append(tagged_token(tok, a.sense) if a else escape_surface(tok))
            yield " ".join(out)

    def write_corpus(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for line in self.lines():
                fh.write(line + "\n")

    def write_sidecar(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for pos in sorted(self.assignments):
                a = self.assignments[pos]
                fh.write(
                    json.dumps(
                        {
                            "doc": a.doc_id,
                            "sent": a.sent_idx,
                            "tok": a.token_idx,
                            "lemma": a.lemma,
                            "sense": a.sense,
                            "confident": a.confident,
                        },
                        separators=(",", ":"),
                    )
                    + "\n"
                )


def load_sidecar(path: str | Path) -> dict[tuple[int, int, int], Assignment]:
    out: dict[tuple[int, int, int], Assignment] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            o = json.loads(line)
            a = Assignment(o["doc"], o["sent"], o["tok"], o["lemma"], o["sense"], o["confident"])
            out[a.position] = a
    return out


def tag_corpus(index, inventory: SenseInventory, sentences: SentenceStore) -> TaggedCorpus:
    """Assign a sense to every indexed occurrence and package the result.

    Processing is per lemma and order-independent: each occurrence's tag
    depends only on its own substitutes and the lemma's inventory entry.
    """
    assignments: dict[tuple[int, int, int], Assignment] = {}
    counts: dict[tuple[int, int], int] = {}
    for lemma in index.lemmas():
        clusters = inventory.get(lemma)
        if not clusters:
            raise TagError(f"no inventory entry for indexed lemma {lemma}")
        rep_sets = [(c.sense_id, frozenset(c.representatives)) for c in clusters]
        for posting in index.lookup(lemma):
            sense, _, confident = _assign_from_sets(frozenset(posting.substitutes), rep_sets)
            a = Assignment(posting.doc_id, posting.sent_idx, posting.token_idx, lemma, sense, confident)
            assignments[a.position] = a
            counts[(lemma, sense)] = counts.get((lemma, sense), 0) + 1
    return TaggedCorpus(assignments, counts, sentences)
