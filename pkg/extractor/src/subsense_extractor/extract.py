"""Extraction core: raw sentences -> substitute records + sentence store.

Emits exactly the downstream interchange formats (vocab: one lemma per
line; records and sentences: JSONL) so the output plugs into the
indexing pipeline unchanged. The extraction vocabulary is derived
deterministically from the backend's word vocabulary, which keeps
data-parallel shards id-compatible without coordination.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .backends import Backend
from .lemmatizer import lemmatize

MAX_SUBSTITUTES = 5


def load_stopwords() -> set[str]:
    text = resources.files("subsense_extractor.assets").joinpath("stopwords_en.txt").read_text("utf-8")
    return {w.strip() for w in text.splitlines() if w.strip() and not w.startswith("#")}


def stopword_asset_sha() -> str:
    text = resources.files("subsense_extractor.assets").joinpath("stopwords_en.txt").read_text("utf-8")
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


@dataclass
class ExtractorConfig:
    model: str = "hash"
    k_raw: int = 20
    batch_size: int = 16
    max_sentence_length: int = 128
    doc_id: int = 0
    stopwords: set[str] = field(default_factory=load_stopwords)

    def validate(self) -> None:
        if self.k_raw < MAX_SUBSTITUTES:
            raise ValueError(f"k_raw must be >= {MAX_SUBSTITUTES}")
        if self.max_sentence_length < 1:
            raise ValueError("max_sentence_length must be >= 1")


def is_punctuation(token: str) -> bool:
    return not any(c.isalnum() for c in token)


def eligible(token: str, word_vocab: set[str], stopwords: set[str]) -> bool:
    """Single-token vocabulary word, not a single character, stopword or
    punctuation."""
    if len(token) <= 1 or is_punctuation(token):
        return False
    if token.lower() in stopwords:
        return False
    return token in word_vocab


def normalize_candidates(
    raw: Iterable[str], target_lemma: str, stopwords: set[str]
) -> list[str]:
    """Dedup (keep first), drop stopwords / single characters / the target,
    keep the first five survivors. Mirrors the downstream contract."""
    out: list[str] = []
    seen: set[str] = set()
    for lemma in raw:
        if lemma in seen:
            continue
        seen.add(lemma)
        if lemma == target_lemma or len(lemma) <= 1:
            continue
        if lemma in stopwords or lemma.lower() in stopwords:
            continue
        out.append(lemma)
        if len(out) == MAX_SUBSTITUTES:
            break
    return out


def build_extraction_vocab(backend: Backend, stopwords: set[str]) -> list[str]:
    """Sorted lemma alphabet covering every possible target and substitute."""
    lemmas = {lemmatize(w) for w in backend.word_vocab()}
    lemmas = {l for l in lemmas if l and len(l) > 1 and not is_punctuation(l)}
    # Targets may be stopword-free, but substitutes of any case can appear
    # post-lemmatization; keep non-stopword lemmas only, matching filters.
    lemmas = {l for l in lemmas if l not in stopwords and l.lower() not in stopwords}
    return sorted(lemmas)


@dataclass
class ExtractionResult:
    vocab: list[str]
    sentences: list[tuple[int, int, list[str]]]      # (doc, sent, tokens)
    records: list[dict]                              # corpus interchange dicts
    skipped_too_long: int = 0
    positions_seen: int = 0
    positions_eligible: int = 0


def extract(sentences: Iterable[Sequence[str]], backend: Backend, config: ExtractorConfig) -> ExtractionResult:
    """Run the backend over tokenized sentences and build records.

    One backend call per sentence; a position yields a record only when
    it is eligible and at least one substitute survives normalization.
    """
    config.validate()
    stopwords = config.stopwords
    vocab = build_extraction_vocab(backend, stopwords)
    ids = {lemma: i for i, lemma in enumerate(vocab)}
    word_vocab = backend.word_vocab()

    result = ExtractionResult(vocab=vocab, sentences=[], records=[])
    for sent_idx, tokens in enumerate(sentences):
        tokens = list(tokens)
        result.sentences.append((config.doc_id, sent_idx, tokens))
        if len(tokens) > config.max_sentence_length:
            result.skipped_too_long += 1
            continue
        predictions = backend.predict(tokens, config.k_raw)
        for tok_idx, token in enumerate(tokens):
            result.positions_seen += 1
            if not eligible(token, word_vocab, stopwords):
                continue
            result.positions_eligible += 1
            target_lemma = lemmatize(token)
            target_id = ids.get(target_lemma)
            if target_id is None:
                continue
            raw = predictions[tok_idx] if tok_idx < len(predictions) else []
            candidates = [
                lemmatize(w)
                for w in raw
                if w and "##" not in w and not is_punctuation(w)
            ]
            subs = normalize_candidates(candidates, target_lemma, stopwords)
            sub_ids = [ids[s] for s in subs if s in ids]
            if not sub_ids:
                continue
            result.records.append(
                {
                    "doc": config.doc_id,
                    "sent": sent_idx,
                    "tok": tok_idx,
                    "target": target_id,
                    "subs": sub_ids,
                }
            )
    return result


# --------------------------------------------------------------------------
# Interchange-format writers (documented formats, no library dependency)


def write_vocab(vocab: list[str], path: str | Path) -> None:
    Path(path).write_bytes("".join(l + "\n" for l in vocab).encode("utf-8"))


def write_records_jsonl(records: list[dict], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, separators=(",", ":")) + "\n")


def write_sentences_jsonl(rows: list[tuple[int, int, list[str]]], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc, sent, tokens in rows:
            fh.write(
                json.dumps({"doc": doc, "sent": sent, "tokens": tokens},
                           separators=(",", ":"), ensure_ascii=False) + "\n"
            )


def write_manifest(path: str | Path, backend: Backend, config: ExtractorConfig, outputs: dict[str, str]) -> None:
    describe = getattr(backend, "describe", lambda: config.model)
    manifest = {
        "backend": describe(),
        "k_raw": config.k_raw,
        "stopword_asset_sha256": stopword_asset_sha(),
        "lemmatizer": "builtin-rule-lemmatizer-v1",
        "outputs": outputs,
    }
    Path(path).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", "utf-8")
