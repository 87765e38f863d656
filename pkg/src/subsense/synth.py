"""Planted-sense synthetic corpus generator.

Every target word gets a few disjoint substitute pools, one per planted
sense. Each occurrence samples a sense, draws its substitutes (and its
sentence context) from that pool with per-slot noise, and the planted
label is recorded. Running the real pipeline over this corpus gives an
end-to-end accuracy oracle: induced sense counts and per-occurrence tags
can be scored against the plant.

Noise slots draw uniformly from the word's *other* senses' pools
(confusion noise) so the corruption actively pulls tagging toward the
wrong sense; words with a single pool fall back to a junk lexicon.
Junk noise is deliberately not mixed into multi-sense words: rare junk
lemmas that co-occur inside one instance form small, genuinely
modularity-optimal communities of their own, which would make planted
sense counts unrecoverable by construction rather than by pipeline error.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .records import SubstituteRecord, SentenceStore
from .vocab import VocabTable


class InvalidSpec(ValueError):
    pass


@dataclass
class SynthSpec:
    num_words: int = 10
    senses_low: int = 2
    senses_high: int = 4
    pool_size: int = 12
    noise_rate: float = 0.0
    instances_per_word: int = 200
    seed: int = 0
    noise_vocab_size: int = 120
    context_radius: int = 4
    # Explicit pools override the generated ones: word -> list of sense pools.
    pools: dict[str, list[list[str]]] | None = None

    def validate(self) -> None:
        if not 0.0 <= self.noise_rate < 0.5:
            raise InvalidSpec(f"noise_rate {self.noise_rate} outside [0, 0.5)")
        if self.pools is None:
            if self.num_words < 1:
                raise InvalidSpec("num_words must be >= 1")
            if not 1 <= self.senses_low <= self.senses_high:
                raise InvalidSpec(f"bad senses range [{self.senses_low}, {self.senses_high}]")
            if self.pool_size < 5:
                raise InvalidSpec("pool_size must be >= 5 (records carry up to 5 substitutes)")
        else:
            for word, pools in self.pools.items():
                seen: set[str] = set()
                for pool in pools:
                    if len(pool) < 5:
                        raise InvalidSpec(f"pool for {word!r} smaller than 5")
                    for lemma in pool:
                        if lemma == word:
                            raise InvalidSpec(f"pool for {word!r} contains the target itself")
                        if lemma in seen:
                            raise InvalidSpec(f"pools for {word!r} are not disjoint: {lemma!r}")
                        seen.add(lemma)
        if self.instances_per_word < 1:
            raise InvalidSpec("instances_per_word must be >= 1")
        if self.noise_vocab_size < 5:
            raise InvalidSpec("noise_vocab_size must be >= 5")
        if self.context_radius < 1:
            raise InvalidSpec("context_radius must be >= 1")


@dataclass
class SynthCorpus:
    """Everything a test needs to score the pipeline against the plant."""

    vocab: VocabTable
    sentences: SentenceStore
    records: list[SubstituteRecord]
    gold: dict[tuple[int, int, int], int]
    planted_senses: dict[int, int]          # target lemma id -> planted sense count
    pools_by_word: dict[int, list[list[int]]] = field(repr=False, default_factory=dict)

    def gold_for(self, rec: SubstituteRecord) -> int:
        return self.gold[rec.position]


def generate_synth_corpus(spec: SynthSpec) -> SynthCorpus:
    """Deterministically generate the corpus described by ``spec``."""
    spec.validate()
    rng = np.random.default_rng(spec.seed)

    if spec.pools is not None:
        words = list(spec.pools.keys())
        pools_str = [spec.pools[w] for w in words]
    else:
        words = [f"word{i:03d}" for i in range(spec.num_words)]
        counts = rng.integers(spec.senses_low, spec.senses_high + 1, size=spec.num_words)
        pools_str = [
            [
                [f"{w}.s{s}.{j:02d}" for j in range(spec.pool_size)]
                for s in range(int(counts[i]))
            ]
            for i, w in enumerate(words)
        ]
    noise_lemmas = [f"noise.{j:04d}" for j in range(spec.noise_vocab_size)]

    entries: list[str] = []
    entries.extend(words)
    for pools in pools_str:
        for pool in pools:
            entries.extend(pool)
    entries.extend(noise_lemmas)
    vocab = VocabTable(entries)

    noise_ids = np.array([vocab.id_of(x) for x in noise_lemmas], dtype=np.int64)
    store = SentenceStore()
    records: list[SubstituteRecord] = []
    gold: dict[tuple[int, int, int], int] = {}
    planted: dict[int, int] = {}
    pools_by_word: dict[int, list[list[int]]] = {}

    radius = spec.context_radius
    for wi, word in enumerate(words):
        wid = vocab.id_of(word)
        pools = pools_str[wi]
        pool_ids = [np.array([vocab.id_of(x) for x in pool], dtype=np.int64) for pool in pools]
        planted[wid] = len(pools)
        pools_by_word[wid] = [list(map(int, p)) for p in pool_ids]
        for inst in range(spec.instances_per_word):
            sense = int(rng.integers(0, len(pools)))
            pool = pool_ids[sense]
            others = [p for s, p in enumerate(pool_ids) if s != sense]
            confusion = np.concatenate(others) if others else noise_ids

            subs = pool[rng.choice(len(pool), size=5, replace=False)].copy()
            noisy = np.flatnonzero(rng.random(5) < spec.noise_rate)
            if noisy.size:
                subs[noisy] = confusion[rng.choice(len(confusion), size=noisy.size, replace=False)]

            ctx = pool[rng.choice(len(pool), size=2 * radius, replace=True)].copy()
            ctx_noisy = np.flatnonzero(rng.random(2 * radius) < spec.noise_rate)
            if ctx_noisy.size:
                ctx[ctx_noisy] = confusion[rng.integers(0, len(confusion), size=ctx_noisy.size)]

            tokens = (
                [vocab.lemma_of(int(t)) for t in ctx[:radius]]
                + [word]
                + [vocab.lemma_of(int(t)) for t in ctx[radius:]]
            )
            store.add(wi, inst, tokens)
            rec = SubstituteRecord(
                doc_id=wi,
                sent_idx=inst,
                token_idx=radius,
                target=wid,
                substitutes=tuple(int(s) for s in subs),
            )
            rec.validate(len(vocab))
            records.append(rec)
            gold[rec.position] = sense

    return SynthCorpus(vocab, store, records, gold, planted, pools_by_word)


def save_gold(gold: dict[tuple[int, int, int], int], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for (doc, sent, tok), sense in sorted(gold.items()):
            fh.write(
                json.dumps({"doc": doc, "sent": sent, "tok": tok, "gold": sense}, separators=(",", ":"))
                + "\n"
            )


def load_gold(path: str | Path) -> dict[tuple[int, int, int], int]:
    gold: dict[tuple[int, int, int], int] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                obj = json.loads(line)
                gold[(obj["doc"], obj["sent"], obj["tok"])] = obj["gold"]
    return gold


def spec_from_json(path: str | Path) -> SynthSpec:
    """Read a SynthSpec from a JSON file (keys match the dataclass fields)."""
    obj = json.loads(Path(path).read_text("utf-8"))
    return SynthSpec(**obj)
