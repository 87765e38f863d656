"""Lemma vocabulary: a dense, case-sensitive string <-> id table.

The table is the shared alphabet for every artifact in the pipeline;
ids are line numbers in the vocab file and stay stable across runs.
"""

from __future__ import annotations

import hashlib
from pathlib import Path
from typing import Iterable


class DuplicateLemma(ValueError):
    """A lemma string occurs twice in the vocabulary source."""


class MalformedVocab(ValueError):
    """The vocabulary file violates the one-lemma-per-line format."""


class VocabTable:
    """Bijective mapping between lemma strings and dense u32 ids.

    Immutable after construction; ids are 0..N-1 in entry order and
    cased forms are distinct entries.
    """

    __slots__ = ("entries", "_ids")

    def __init__(self, entries: Iterable[str]):
        self.entries: tuple[str, ...] = tuple(entries)
        self._ids: dict[str, int] = {}
        for i, lemma in enumerate(self.entries):
            if lemma in self._ids:
                raise DuplicateLemma(f"duplicate lemma {lemma!r} (ids {self._ids[lemma]} and {i})")
            if not lemma:
                raise MalformedVocab(f"empty lemma at id {i}")
            if "\n" in lemma:
                raise MalformedVocab(f"lemma at id {i} contains a newline")
            self._ids[lemma] = i

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, lemma: str) -> bool:
        return lemma in self._ids

    def id_of(self, lemma: str) -> int:
        return self._ids[lemma]

    def get(self, lemma: str) -> int | None:
        return self._ids.get(lemma)

    def lemma_of(self, lemma_id: int) -> str:
        return self.entries[lemma_id]

    def sha256(self) -> str:
        """Content hash used to check that artifacts share one vocabulary."""
        h = hashlib.sha256()
        for lemma in self.entries:
            h.update(lemma.encode("utf-8"))
            h.update(b"\n")
        return h.hexdigest()

    def save(self, path: str | Path) -> None:
        """Write one lemma per line, UTF-8, LF."""
        data = "".join(lemma + "\n" for lemma in self.entries)
        Path(path).write_bytes(data.encode("utf-8"))


def load_vocab(path: str | Path) -> VocabTable:
    """Load a vocab file (one UTF-8 lemma per line; line number = id)."""
    raw = Path(path).read_bytes().decode("utf-8")
    if raw == "":
        return VocabTable(())
    if not raw.endswith("\n"):
        raise MalformedVocab(f"{path}: missing trailing newline")
    lines = raw[:-1].split("\n")
    for i, line in enumerate(lines):
        if line == "":
            raise MalformedVocab(f"{path}: empty line at id {i}")
    return VocabTable(lines)
