"""Substitute records: the per-occurrence unit of the whole pipeline.

A record ties one eligible token occurrence (doc, sentence, position) to
its target lemma id and its <=5 substitute lemma ids, ordered by
descending model probability. Two interchangeable encodings:

* ``.jsonl``  — one object per line: {"doc","sent","tok","target","subs"}
* ``.subbin`` — magic ``SUBB1``, then varint-length-prefixed binary
  records (doc u64 LE; sent, tok, target, nsubs, subs[] u32 LE)
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator

MAX_SUBSTITUTES = 5

_BIN_MAGIC = b"SUBB1"


class CorruptRecord(ValueError):
    """A record could not be decoded; carries the byte offset."""

    def __init__(self, offset: int, reason: str):
        super().__init__(f"corrupt record at byte {offset}: {reason}")
        self.offset = offset


class UnknownFormat(ValueError):
    """File does not start with a recognized record-format magic."""


class InvalidRecord(ValueError):
    """A record violates a structural invariant."""


@dataclass(frozen=True)
class SubstituteRecord:
    doc_id: int
    sent_idx: int
    token_idx: int
    target: int
    substitutes: tuple[int, ...]

    def validate(self, vocab_size: int | None = None) -> None:
        subs = self.substitutes
        if not 1 <= len(subs) <= MAX_SUBSTITUTES:
            raise InvalidRecord(f"{len(subs)} substitutes (need 1..{MAX_SUBSTITUTES})")
        if len(set(subs)) != len(subs):
            raise InvalidRecord(f"duplicate substitutes {subs}")
        if self.target in subs:
            raise InvalidRecord(f"target {self.target} echoed in substitutes")
        if vocab_size is not None:
            for lid in (self.target, *subs):
                if not 0 <= lid < vocab_size:
                    raise InvalidRecord(f"lemma id {lid} outside vocab of size {vocab_size}")

    @property
    def position(self) -> tuple[int, int, int]:
        return (self.doc_id, self.sent_idx, self.token_idx)


def normalize_substitutes(
    raw: Iterable[str], target: str, stopwords: set[str]
) -> list[str]:
    """Reduce a ranked candidate-lemma list to the stored top-5.

    Keeps first occurrence of each lemma, drops stopwords (exact or
    lowercased form in the set), single-character entries and the target
    itself, and truncates to 5 survivors. Entries are assumed to be
    lemmatized already. May return an empty list.
    """
    out: list[str] = []
    seen: set[str] = set()
    for lemma in raw:
        if lemma in seen:
            continue
        seen.add(lemma)
        if lemma == target:
            continue
        if len(lemma) <= 1:
            continue
        if lemma in stopwords or lemma.lower() in stopwords:
            continue
        out.append(lemma)
        if len(out) == MAX_SUBSTITUTES:
            break
    return out


def default_stopwords() -> set[str]:
    """The checked-in English stopword asset (one word per line)."""
    text = resources.files("subsense.assets").joinpath("stopwords_en.txt").read_text("utf-8")
    return {line.strip() for line in text.splitlines() if line.strip() and not line.startswith("#")}


# --------------------------------------------------------------------------
# JSONL encoding


def _record_to_json(rec: SubstituteRecord) -> str:
    return json.dumps(
        {
            "doc": rec.doc_id,
            "sent": rec.sent_idx,
            "tok": rec.token_idx,
            "target": rec.target,
            "subs": list(rec.substitutes),
        },
        separators=(",", ":"),
    )


def _record_from_json(line: str, offset: int) -> SubstituteRecord:
    try:
        obj = json.loads(line)
        return SubstituteRecord(
            doc_id=obj["doc"],
            sent_idx=obj["sent"],
            token_idx=obj["tok"],
            target=obj["target"],
            substitutes=tuple(obj["subs"]),
        )
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise CorruptRecord(offset, str(exc)) from exc


# --------------------------------------------------------------------------
# Binary encoding (varint length prefix, fixed-width LE integers)


def _write_varint(value: int, out: bytearray) -> None:
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return


def _read_varint(buf: bytes, pos: int) -> tuple[int, int]:
    result = 0
    shift = 0
    start = pos
    while True:
        if pos >= len(buf):
            raise CorruptRecord(start, "truncated varint")
        byte = buf[pos]
        pos += 1
        result |= (byte & 0x7F) << shift
        if not byte & 0x80:
            return result, pos
        shift += 7
        if shift > 63:
            raise CorruptRecord(start, "varint too long")


def _record_to_bytes(rec: SubstituteRecord) -> bytes:
    payload = bytearray()
    payload += rec.doc_id.to_bytes(8, "little")
    payload += rec.sent_idx.to_bytes(4, "little")
    payload += rec.token_idx.to_bytes(4, "little")
    payload += rec.target.to_bytes(4, "little")
    payload += len(rec.substitutes).to_bytes(4, "little")
    for lid in rec.substitutes:
        payload += lid.to_bytes(4, "little")
    framed = bytearray()
    _write_varint(len(payload), framed)
    framed += payload
    return bytes(framed)


def _record_from_bytes(buf: bytes, pos: int) -> tuple[SubstituteRecord, int]:
    length, body = _read_varint(buf, pos)
    if body + length > len(buf):
        raise CorruptRecord(pos, f"record of {length} bytes overruns file")
    if length < 24:
        raise CorruptRecord(pos, f"record of {length} bytes is shorter than the fixed header")
    doc = int.from_bytes(buf[body : body + 8], "little")
    sent = int.from_bytes(buf[body + 8 : body + 12], "little")
    tok = int.from_bytes(buf[body + 12 : body + 16], "little")
    target = int.from_bytes(buf[body + 16 : body + 20], "little")
    nsubs = int.from_bytes(buf[body + 20 : body + 24], "little")
    if 24 + 4 * nsubs != length:
        raise CorruptRecord(pos, f"length {length} inconsistent with {nsubs} substitutes")
    subs = tuple(
        int.from_bytes(buf[body + 24 + 4 * i : body + 28 + 4 * i], "little") for i in range(nsubs)
    )
    return SubstituteRecord(doc, sent, tok, target, subs), body + length


# --------------------------------------------------------------------------
# File-level API


def write_records(path: str | Path, records: Iterable[SubstituteRecord]) -> int:
    """Write a record stream; format chosen by extension (.subbin = binary,
    anything else = JSONL). Returns the number of records written."""
    path = Path(path)
    n = 0
    if path.suffix == ".subbin":
        with open(path, "wb") as fh:
            fh.write(_BIN_MAGIC)
            for rec in records:
                fh.write(_record_to_bytes(rec))
                n += 1
    else:
        with open(path, "w", encoding="utf-8") as fh:
            for rec in records:
                fh.write(_record_to_json(rec) + "\n")
                n += 1
    return n


def read_records(path: str | Path) -> Iterator[SubstituteRecord]:
    """Stream records from a file, sniffing the format from its magic."""
    path = Path(path)
    head = b""
    with open(path, "rb") as fh:
        head = fh.read(5)
    if head == _BIN_MAGIC:
        buf = path.read_bytes()
        pos = len(_BIN_MAGIC)
        while pos < len(buf):
            rec, pos = _record_from_bytes(buf, pos)
            yield rec
    elif head[:1] in (b"{", b""):
        with open(path, "r", encoding="utf-8") as fh:
            offset = 0
            for line in fh:
                if line.strip():
                    yield _record_from_json(line, offset)
                offset += len(line.encode("utf-8"))
    else:
        raise UnknownFormat(f"{path}: unrecognized leading bytes {head!r}")


# --------------------------------------------------------------------------
# Sentence store


class SentenceStore:
    """(doc_id, sent_idx) -> surface tokens, for display and corpus emission."""

    def __init__(self) -> None:
        self._sentences: dict[tuple[int, int], tuple[str, ...]] = {}

    def add(self, doc_id: int, sent_idx: int, tokens: Iterable[str]) -> None:
        self._sentences[(doc_id, sent_idx)] = tuple(tokens)

    def get(self, doc_id: int, sent_idx: int) -> tuple[str, ...]:
        return self._sentences[(doc_id, sent_idx)]

    def __len__(self) -> int:
        return len(self._sentences)

    def __contains__(self, key: tuple[int, int]) -> bool:
        return key in self._sentences

    def items(self) -> Iterator[tuple[tuple[int, int], tuple[str, ...]]]:
        return iter(sorted(self._sentences.items()))

    def token_at(self, doc_id: int, sent_idx: int, token_idx: int) -> str:
        return self._sentences[(doc_id, sent_idx)][token_idx]

    def resolves(self, rec: SubstituteRecord) -> bool:
        toks = self._sentences.get((rec.doc_id, rec.sent_idx))
        return toks is not None and rec.token_idx < len(toks)

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for (doc, sent), tokens in self.items():
                fh.write(
                    json.dumps(
                        {"doc": doc, "sent": sent, "tokens": list(tokens)},
                        separators=(",", ":"),
                        ensure_ascii=False,
                    )
                    + "\n"
                )

    @classmethod
    def load(cls, path: str | Path) -> "SentenceStore":
        store = cls()
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                obj = json.loads(line)
                store.add(obj["doc"], obj["sent"], obj["tokens"])
        return store
