"""Run-directory layout: artifact names, manifest bookkeeping, loading.

Every pipeline step records the artifact it wrote together with the
sha256 of the vocabulary it was built against; the search service
refuses to start when those hashes disagree (mixed-run directories).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from .embeddings import EmbeddingMatrix
from .index import load_index
from .induction import SenseInventory, load_inventory
from .records import SentenceStore
from .tagging import Assignment, load_sidecar
from .vocab import VocabTable, load_vocab

MANIFEST_NAME = "manifest.json"

VOCAB_FILE = "vocab.txt"
RECORDS_FILE = "records.jsonl"
SENTENCES_FILE = "sentences.jsonl"
GOLD_FILE = "gold.jsonl"
INDEX_FILE = "index.wsix"
INVENTORY_FILE = "inventory.jsonl"
INVENTORY_TEXT_FILE = "inventory.txt"
TAGGED_FILE = "tagged.txt"
SIDECAR_FILE = "sidecar.jsonl"
VECTORS_FILE = "vectors.txt"


class ArtifactMismatch(RuntimeError):
    """Artifacts in one directory were built against different vocabularies."""


def file_sha256(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def load_manifest(dirpath: str | Path) -> dict:
    path = Path(dirpath) / MANIFEST_NAME
    if not path.exists():
        return {"artifacts": {}}
    return json.loads(path.read_text("utf-8"))


def record_artifact(dirpath: str | Path, name: str, vocab_sha256: str, extra: dict | None = None) -> None:
    """Note one produced artifact in the directory manifest."""
    dirpath = Path(dirpath)
    manifest = load_manifest(dirpath)
    entry = {"sha256": file_sha256(dirpath / name), "vocab_sha256": vocab_sha256}
    if extra:
        entry.update(extra)
    manifest.setdefault("artifacts", {})[name] = entry
    (dirpath / MANIFEST_NAME).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", "utf-8")


@dataclass
class Artifacts:
    directory: Path
    vocab: VocabTable
    index: object
    inventory: SenseInventory
    sidecar: dict[tuple[int, int, int], Assignment]
    sentences: SentenceStore
    embeddings: EmbeddingMatrix | None
    hashes: dict[str, str]


def load_artifacts(dirpath: str | Path, need_embeddings: bool = False) -> Artifacts:
    """Load a pipeline output directory, verifying vocab-hash agreement."""
    dirpath = Path(dirpath)
    vocab = load_vocab(dirpath / VOCAB_FILE)
    vocab_sha = vocab.sha256()

    manifest = load_manifest(dirpath)
    for name, entry in manifest.get("artifacts", {}).items():
        recorded = entry.get("vocab_sha256")
        if recorded and recorded != vocab_sha:
            raise ArtifactMismatch(
                f"{name} was built against vocab {recorded[:12]}..., "
                f"directory vocab is {vocab_sha[:12]}..."
            )

    index = load_index(dirpath / INDEX_FILE)
    inventory = load_inventory(dirpath / INVENTORY_FILE)
    sidecar = load_sidecar(dirpath / SIDECAR_FILE)
    sentences = SentenceStore.load(dirpath / SENTENCES_FILE)

    for lemma in (*index.lemmas(), *inventory.lemmas()):
        if lemma >= len(vocab):
            raise ArtifactMismatch(f"lemma id {lemma} outside the vocabulary (size {len(vocab)})")

    embeddings = None
    vectors_path = dirpath / VECTORS_FILE
    if vectors_path.exists():
        embeddings = EmbeddingMatrix.load(vectors_path)
    elif need_embeddings:
        raise FileNotFoundError(f"{vectors_path} is required but missing")

    hashes = {VOCAB_FILE: vocab_sha}
    for name in (INDEX_FILE, INVENTORY_FILE, SIDECAR_FILE, SENTENCES_FILE, VECTORS_FILE):
        p = dirpath / name
        if p.exists():
            hashes[name] = file_sha256(p)
    return Artifacts(dirpath, vocab, index, inventory, sidecar, sentences, embeddings, hashes)
