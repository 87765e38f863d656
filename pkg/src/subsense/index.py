"""Inverted index: target lemma id -> corpus occurrences with their substitutes.

The random-access backbone for induction, tagging and search. On disk
(magic ``WSIX1``) a directory of per-lemma block extents precedes the
posting blocks, so a loaded index can seek straight to one lemma's
postings without parsing the rest.
"""

from __future__ import annotations

import mmap
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .records import SubstituteRecord

_MAGIC = b"WSIX1"
_DIR_ENTRY = 4 + 4 + 8 + 8  # lemma u32, count u32, offset u64, nbytes u64


class IndexBuildError(ValueError):
    pass


class CorruptIndex(ValueError):
    pass


@dataclass(frozen=True)
class Posting:
    doc_id: int
    sent_idx: int
    token_idx: int
    substitutes: tuple[int, ...]

    @property
    def position(self) -> tuple[int, int, int]:
        return (self.doc_id, self.sent_idx, self.token_idx)

    def sort_key(self):
        return (self.doc_id, self.sent_idx, self.token_idx, self.substitutes)


class InvertedIndex:
    """In-memory index; postings per lemma are kept sorted by position."""

    def __init__(self, postings: dict[int, list[Posting]] | None = None):
        self._postings: dict[int, list[Posting]] = postings or {}

    def lemmas(self) -> list[int]:
        return sorted(self._postings)

    def count(self, lemma: int) -> int:
        plist = self._postings.get(lemma)
        return len(plist) if plist else 0

    def lookup(self, lemma: int) -> list[Posting]:
        return list(self._postings.get(lemma, ()))

    def total_records(self) -> int:
        return sum(len(p) for p in self._postings.values())

    def add(self, rec: SubstituteRecord, vocab_size: int | None = None) -> None:
        if rec.target < 0 or (vocab_size is not None and rec.target >= vocab_size):
            raise IndexBuildError(f"target lemma id {rec.target} invalid")
        if not rec.substitutes:
            raise IndexBuildError(f"record at {rec.position} has no substitutes")
        if vocab_size is not None:
            for lid in rec.substitutes:
                if not 0 <= lid < vocab_size:
                    raise IndexBuildError(f"substitute lemma id {lid} invalid")
        self._postings.setdefault(rec.target, []).append(
            Posting(rec.doc_id, rec.sent_idx, rec.token_idx, rec.substitutes)
        )

    def finalize(self) -> "InvertedIndex":
        for plist in self._postings.values():
            plist.sort(key=Posting.sort_key)
        return self


def build_index(
    records: Iterable[SubstituteRecord], vocab_size: int | None = None
) -> InvertedIndex:
    """One posting per record, keyed by the record's target lemma.

    The result is deterministic regardless of input order (postings are
    sorted), so sharded builds merge to the same index.
    """
    index = InvertedIndex()
    for rec in records:
        index.add(rec, vocab_size)
    return index.finalize()


def merge_indexes(parts: Iterable[InvertedIndex]) -> InvertedIndex:
    merged: dict[int, list[Posting]] = {}
    for part in parts:
        for lemma in part.lemmas():
            merged.setdefault(lemma, []).extend(part.lookup(lemma))
    return InvertedIndex(merged).finalize()


def lookup(index, lemma: int) -> list[Posting]:
    return index.lookup(lemma)


def sample_occurrences(index, lemma: int, cap: int = 1000, seed: int = 0) -> list[Posting]:
    """Uniform sample of min(count, cap) postings, without replacement.

    The RNG stream is derived from (seed, lemma), so per-lemma samples do
    not depend on which other lemmas were processed or in what order.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    postings = index.lookup(lemma)
    if len(postings) <= cap:
        return postings
    rng = np.random.default_rng(np.random.SeedSequence([seed, lemma]))
    picks = rng.choice(len(postings), size=cap, replace=False)
    picks.sort()
    return [postings[i] for i in picks]


# --------------------------------------------------------------------------
# Persistence


def _posting_bytes(p: Posting) -> bytes:
    out = bytearray()
    out += p.doc_id.to_bytes(8, "little")
    out += p.sent_idx.to_bytes(4, "little")
    out += p.token_idx.to_bytes(4, "little")
    out += len(p.substitutes).to_bytes(4, "little")
    for lid in p.substitutes:
        out += lid.to_bytes(4, "little")
    return bytes(out)


def _parse_postings(buf: bytes, offset: int, nbytes: int, count: int) -> list[Posting]:
    end = offset + nbytes
    pos = offset
    out: list[Posting] = []
    for _ in range(count):
        if pos + 20 > end:
            raise CorruptIndex(f"posting block truncated at byte {pos}")
        doc = int.from_bytes(buf[pos : pos + 8], "little")
        sent = int.from_bytes(buf[pos + 8 : pos + 12], "little")
        tok = int.from_bytes(buf[pos + 12 : pos + 16], "little")
        nsubs = int.from_bytes(buf[pos + 16 : pos + 20], "little")
        pos += 20
        if pos + 4 * nsubs > end:
            raise CorruptIndex(f"posting block truncated at byte {pos}")
        subs = tuple(int.from_bytes(buf[pos + 4 * i : pos + 4 * i + 4], "little") for i in range(nsubs))
        pos += 4 * nsubs
        out.append(Posting(doc, sent, tok, subs))
    if pos != end:
        raise CorruptIndex(f"posting block has {end - pos} unparsed trailing bytes")
    return out


def save_index(index, path: str | Path) -> None:
    """Serialize; lemmas in ascending id order, postings in stored order."""
    lemmas = index.lemmas()
    blocks: list[bytes] = []
    entries: list[tuple[int, int, int]] = []  # lemma, count, nbytes
    for lemma in lemmas:
        plist = index.lookup(lemma)
        block = b"".join(_posting_bytes(p) for p in plist)
        blocks.append(block)
        entries.append((lemma, len(plist), len(block)))

    header_len = len(_MAGIC) + 4 + 8 + _DIR_ENTRY * len(lemmas)
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(len(lemmas).to_bytes(4, "little"))
        fh.write(index.total_records().to_bytes(8, "little"))
        offset = header_len
        for (lemma, count, nbytes) in entries:
            fh.write(lemma.to_bytes(4, "little"))
            fh.write(count.to_bytes(4, "little"))
            fh.write(offset.to_bytes(8, "little"))
            fh.write(nbytes.to_bytes(8, "little"))
            offset += nbytes
        for block in blocks:
            fh.write(block)


class MappedIndex:
    """Read-only index over an mmapped file; blocks parsed per lemma on demand."""

    def __init__(self, path: str | Path):
        self._path = Path(path)
        self._fh = open(self._path, "rb")
        try:
            self._buf = mmap.mmap(self._fh.fileno(), 0, access=mmap.ACCESS_READ)
        except ValueError as exc:  # zero-length file
            self._fh.close()
            raise CorruptIndex(f"{path}: {exc}") from exc
        buf = self._buf
        if len(buf) < len(_MAGIC) + 12 or buf[: len(_MAGIC)] != _MAGIC:
            self.close()
            raise CorruptIndex(f"{path}: bad or missing index magic")
        n_lemmas = int.from_bytes(buf[5:9], "little")
        self._total = int.from_bytes(buf[9:17], "little")
        dir_end = 17 + _DIR_ENTRY * n_lemmas
        if len(buf) < dir_end:
            self.close()
            raise CorruptIndex(f"{path}: directory truncated")
        self._dir: dict[int, tuple[int, int, int]] = {}
        pos = 17
        for _ in range(n_lemmas):
            lemma = int.from_bytes(buf[pos : pos + 4], "little")
            count = int.from_bytes(buf[pos + 4 : pos + 8], "little")
            offset = int.from_bytes(buf[pos + 8 : pos + 16], "little")
            nbytes = int.from_bytes(buf[pos + 16 : pos + 24], "little")
            if offset + nbytes > len(buf):
                self.close()
                raise CorruptIndex(f"{path}: block for lemma {lemma} overruns the file")
            self._dir[lemma] = (count, offset, nbytes)
            pos += _DIR_ENTRY
        self._cache: dict[int, list[Posting]] = {}

    def close(self) -> None:
        if getattr(self, "_buf", None) is not None:
            self._buf.close()
            self._buf = None
        if getattr(self, "_fh", None) is not None:
            self._fh.close()
            self._fh = None

    def lemmas(self) -> list[int]:
        return sorted(self._dir)

    def count(self, lemma: int) -> int:
        entry = self._dir.get(lemma)
        return entry[0] if entry else 0

    def total_records(self) -> int:
        return self._total

    def lookup(self, lemma: int) -> list[Posting]:
        entry = self._dir.get(lemma)
        if entry is None:
            return []
        if lemma not in self._cache:
            count, offset, nbytes = entry
            self._cache[lemma] = _parse_postings(self._buf, offset, nbytes, count)
        return list(self._cache[lemma])


def load_index(path: str | Path, eager: bool = False):
    """Open an index file. ``eager=True`` materializes a plain InvertedIndex."""
    mapped = MappedIndex(path)
    if not eager:
        return mapped
    try:
        postings = {lemma: mapped.lookup(lemma) for lemma in mapped.lemmas()}
        return InvertedIndex(postings)
    finally:
        mapped.close()


def iter_postings(index) -> Iterator[tuple[int, Posting]]:
    """All (lemma, posting) pairs in lemma-id order."""
    for lemma in index.lemmas():
        for p in index.lookup(lemma):
            yield lemma, p
