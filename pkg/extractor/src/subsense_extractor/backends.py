"""Prediction backends: a real masked-LM and a deterministic stand-in.

A backend exposes the model's single-token word vocabulary and, per
sentence, a ranked candidate-word list for every token position from
one forward pass (no per-position masking).
"""

from __future__ import annotations

import hashlib
from pathlib import Path
from typing import Protocol, Sequence


class Backend(Protocol):
    def word_vocab(self) -> set[str]: ...

    def predict(self, tokens: Sequence[str], k: int) -> list[list[str]]: ...


class BackendError(RuntimeError):
    """Model could not be loaded or queried; fatal for the extraction run."""


_DEFAULT_LEXICON = [
    # Compact synthetic lexicon spanning a few crude topic clusters; the
    # hash backend draws in-cluster candidates from it.
    "guitar", "drum", "rhythm", "bassist", "chord", "melody", "band", "song",
    "fish", "perch", "trout", "river", "lake", "angler", "boat", "catching",
    "voice", "tenor", "singer", "choir", "opera", "soprano", "baritone", "alto",
    "code", "bug", "patch", "software", "program", "compiler", "server", "script",
    "tree", "leaf", "branch", "forest", "root", "bark", "trunk", "wood",
    "bank", "money", "loan", "credit", "account", "deposit", "coin", "market",
    "cat", "dog", "horse", "mouse", "bird", "goat", "sheep", "cow",
    "run", "walk", "jump", "swim", "climb", "ride", "race", "chase",
]


class HashContextBackend:
    """Deterministic fake MLM used by tests and offline runs.

    Candidates for a position mix the sentence's other content words
    (imitating in-context substitutability) with lexicon words selected
    by a stable hash of (token, neighbors). Includes a leading stopword
    and the target itself so the normalization path is exercised.
    """

    def __init__(self, lexicon: Sequence[str] | None = None):
        self._lexicon = list(lexicon) if lexicon is not None else list(_DEFAULT_LEXICON)
        self._vocab = set(self._lexicon)

    @classmethod
    def from_file(cls, path: str | Path) -> "HashContextBackend":
        words = [w.strip() for w in Path(path).read_text("utf-8").splitlines() if w.strip()]
        return cls(words)

    def word_vocab(self) -> set[str]:
        return self._vocab

    def describe(self) -> str:
        h = hashlib.sha256("\n".join(self._lexicon).encode()).hexdigest()[:12]
        return f"hash-context:{h}"

    def _hash_words(self, token: str, salt: str, n: int) -> list[str]:
        out = []
        for i in range(n):
            digest = hashlib.sha256(f"{token}|{salt}|{i}".encode()).digest()
            out.append(self._lexicon[int.from_bytes(digest[:4], "big") % len(self._lexicon)])
        return out

    def predict(self, tokens: Sequence[str], k: int) -> list[list[str]]:
        content = [t for t in tokens if t in self._vocab]
        rows: list[list[str]] = []
        for i, tok in enumerate(tokens):
            neighbors = [t for t in content if t != tok]
            hashed = self._hash_words(tok, ",".join(neighbors[:3]), k)
            # Ranked list: a stopword, the token itself (echo), in-sentence
            # words, then hash picks; duplicates are fine pre-normalization.
            row = ["the", tok, *neighbors, *hashed]
            rows.append(row[:k])
        return rows


class TransformersBackend:
    """Real masked-LM predictions via transformers (local model path).

    One forward pass per sentence over the unmasked input; per word-level
    position the top-k vocabulary words by logit are returned. Words that
    tokenize to more than one piece have no single position and get no
    predictions.
    """

    def __init__(self, model_name_or_path: str, max_length: int = 512, batch_size: int = 16):
        try:
            import torch
            from transformers import AutoModelForMaskedLM, AutoTokenizer
        except ImportError as exc:
            raise BackendError(f"transformers backend unavailable: {exc}") from exc
        try:
            self._tokenizer = AutoTokenizer.from_pretrained(model_name_or_path)
            self._model = AutoModelForMaskedLM.from_pretrained(model_name_or_path)
        except Exception as exc:
            raise BackendError(f"cannot load model {model_name_or_path!r}: {exc}") from exc
        self._model.eval()
        self._torch = torch
        self._max_length = max_length
        self._batch_size = batch_size
        vocab = self._tokenizer.get_vocab()
        self._id_to_token = {i: t for t, i in vocab.items()}
        self._word_vocab = {
            t for t in vocab if t.isalpha() and not t.startswith("##") and len(t) > 1
        }
        self._name = str(model_name_or_path)

    def word_vocab(self) -> set[str]:
        return self._word_vocab

    def describe(self) -> str:
        return f"transformers:{self._name}"

    def predict(self, tokens: Sequence[str], k: int) -> list[list[str]]:
        torch = self._torch
        enc = self._tokenizer(
            list(tokens),
            is_split_into_words=True,
            return_tensors="pt",
            truncation=True,
            max_length=self._max_length,
        )
        with torch.no_grad():
            logits = self._model(**enc).logits[0]
        word_ids = enc.word_ids(0)
        # Word index -> its subword positions.
        pieces: dict[int, list[int]] = {}
        for pos, wid in enumerate(word_ids):
            if wid is not None:
                pieces.setdefault(wid, []).append(pos)
        rows: list[list[str]] = []
        for i in range(len(tokens)):
            locs = pieces.get(i, [])
            if len(locs) != 1:
                rows.append([])  # multi-piece word: not a single-token position
                continue
            top = torch.topk(logits[locs[0]], k * 2).indices.tolist()
            words = [self._id_to_token[j] for j in top]
            rows.append([w for w in words if w.isalpha() and not w.startswith("##")][:k])
        return rows


def make_backend(spec: str, max_length: int = 512, batch_size: int = 16) -> Backend:
    """Backend factory: "hash", "hash:<lexicon file>" or a model path/name."""
    if spec == "hash":
        return HashContextBackend()
    if spec.startswith("hash:"):
        return HashContextBackend.from_file(spec.split(":", 1)[1])
    return TransformersBackend(spec, max_length=max_length, batch_size=batch_size)
