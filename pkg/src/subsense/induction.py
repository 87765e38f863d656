"""Per-lemma sense induction: sample occurrences, cluster the substitute
graph into communities, keep degree-ranked representatives, order senses
by how many sampled instances they attract.

Sense ids are stable for fixed (records, seed, config): sampling and the
clustering RNG are derived per lemma, and senses are numbered by
descending support with deterministic tie-breaks, so sense 0 is always
the most-supported sense.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .graph import SubstituteGraph, build_graph
from .index import sample_occurrences
from .louvain import Partition, louvain
from .vocab import VocabTable


@dataclass
class InductionConfig:
    sample_cap: int = 1000
    min_occurrences: int = 20
    max_representatives: int = 100
    resolution: float = 1.0
    gain_threshold: float = 1e-7
    max_passes: int = 50
    seed: int = 0


@dataclass
class SenseCluster:
    sense_id: int
    representatives: tuple[int, ...]  # lemma ids, descending intra-community degree
    support: int = 0
    fallback: bool = False


class SenseInventory:
    """lemma id -> ordered SenseClusters (sense 0 = most supported)."""

    def __init__(self, entries: dict[int, list[SenseCluster]] | None = None):
        self.entries: dict[int, list[SenseCluster]] = entries or {}

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, lemma: int) -> bool:
        return lemma in self.entries

    def get(self, lemma: int) -> list[SenseCluster] | None:
        return self.entries.get(lemma)

    def senses(self, lemma: int) -> list[SenseCluster]:
        return self.entries[lemma]

    def lemmas(self) -> list[int]:
        return sorted(self.entries)

    def mean_senses_per_lemma(self) -> float:
        if not self.entries:
            return 0.0
        return sum(len(v) for v in self.entries.values()) / len(self.entries)


def intra_community_degrees(graph: SubstituteGraph, partition) -> dict[int, int]:
    """Weighted degree restricted to same-community neighbors."""
    labels = getattr(partition, "mapping", partition)
    degrees: dict[int, int] = {}
    for u, nbrs in graph.adj.items():
        cu = labels[u]
        degrees[u] = sum(w for v, w in nbrs.items() if labels[v] == cu)
    return degrees


def extract_representatives(
    graph: SubstituteGraph, partition: Partition, cap: int = 100
) -> list[SenseCluster]:
    """Top-``cap`` nodes per community by intra-community weighted degree,
    ties broken by ascending lemma id. Clusters come out in community-id
    order; support is filled in by the caller."""
    degrees = intra_community_degrees(graph, partition)
    clusters: list[SenseCluster] = []
    for cid, members in enumerate(partition.communities()):
        ranked = sorted(members, key=lambda u: (-degrees[u], u))
        clusters.append(SenseCluster(sense_id=cid, representatives=tuple(ranked[:cap])))
    return clusters


def _jaccard_argmax(substitutes: frozenset, rep_sets: list[frozenset]) -> int:
    best, best_score = 0, -1.0
    for i, reps in enumerate(rep_sets):
        union = len(substitutes | reps)
        score = (len(substitutes & reps) / union) if union else 0.0
        if score > best_score:
            best, best_score = i, score
    return best


def _fallback_entry(postings) -> list[SenseCluster]:
    counts = Counter(lid for p in postings for lid in p.substitutes)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    reps = tuple(lid for lid, _ in ranked[:5])
    return [SenseCluster(sense_id=0, representatives=reps, support=len(postings), fallback=True)]


def induce_senses(lemma: int, index, config: InductionConfig | None = None) -> list[SenseCluster]:
    """Induce the sense clusters for one lemma from its indexed occurrences.

    Below ``min_occurrences`` (or when the substitute graph has no edges)
    a single fallback sense is emitted whose representatives are the
    top-5 most frequent substitutes overall.
    """
    config = config or InductionConfig()
    postings = index.lookup(lemma)
    if not postings:
        return []
    if len(postings) < config.min_occurrences:
        return _fallback_entry(postings)

    sample = sample_occurrences(index, lemma, cap=config.sample_cap, seed=config.seed)
    graph = build_graph(p.substitutes for p in sample)
    if graph.total_weight == 0:
        return _fallback_entry(sample)

    louvain_seed = int(np.random.SeedSequence([config.seed, lemma, 1]).generate_state(1)[0])
    partition = louvain(
        graph,
        seed=louvain_seed,
        resolution=config.resolution,
        gain_threshold=config.gain_threshold,
        max_passes=config.max_passes,
    )
    clusters = extract_representatives(graph, partition, cap=config.max_representatives)

    rep_sets = [frozenset(c.representatives) for c in clusters]
    support = [0] * len(clusters)
    for p in sample:
        support[_jaccard_argmax(frozenset(p.substitutes), rep_sets)] += 1
    for c, s in zip(clusters, support):
        c.support = s

    clusters.sort(key=lambda c: (-c.support, min(c.representatives)))
    for new_id, c in enumerate(clusters):
        c.sense_id = new_id
    return clusters


def build_inventory(
    index, config: InductionConfig | None = None, lemmas: list[int] | None = None, workers: int = 1
) -> SenseInventory:
    """Induce senses for every (or the given) indexed lemma.

    Per-lemma tasks are independent and deterministic, so the optional
    process pool changes wall time only; results merge in lemma-id order.
    """
    config = config or InductionConfig()
    todo = sorted(lemmas) if lemmas is not None else index.lemmas()
    entries: dict[int, list[SenseCluster]] = {}
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        global _POOL_INDEX, _POOL_CONFIG
        _POOL_INDEX, _POOL_CONFIG = index, config
        try:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                for lemma, clusters in zip(todo, pool.map(_induce_in_pool, todo, chunksize=16)):
                    if clusters:
                        entries[lemma] = clusters
        finally:
            _POOL_INDEX = _POOL_CONFIG = None
    else:
        for lemma in todo:
            clusters = induce_senses(lemma, index, config)
            if clusters:
                entries[lemma] = clusters
    return SenseInventory(entries)


_POOL_INDEX = None
_POOL_CONFIG = None


def _induce_in_pool(lemma: int) -> list[SenseCluster]:
    # Workers inherit the index via fork; runs the same deterministic code.
    return induce_senses(lemma, _POOL_INDEX, _POOL_CONFIG)


# --------------------------------------------------------------------------
# Persistence


def save_inventory(inventory: SenseInventory, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for lemma in inventory.lemmas():
            senses = []
            for c in inventory.senses(lemma):
                obj = {"id": c.sense_id, "support": c.support, "reps": list(c.representatives)}
                if c.fallback:
                    obj["fallback"] = True
                senses.append(obj)
            fh.write(json.dumps({"lemma": lemma, "senses": senses}, separators=(",", ":")) + "\n")


def load_inventory(path: str | Path) -> SenseInventory:
    entries: dict[int, list[SenseCluster]] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            entries[obj["lemma"]] = [
                SenseCluster(
                    sense_id=s["id"],
                    representatives=tuple(s["reps"]),
                    support=s["support"],
                    fallback=s.get("fallback", False),
                )
                for s in obj["senses"]
            ]
    return SenseInventory(entries)


def format_inventory_entry(
    lemma: int, clusters: list[SenseCluster], vocab: VocabTable, top: int = 5
) -> str:
    """Human-readable sense table for one lemma."""
    word = vocab.lemma_of(lemma)
    lines = [f"{word}  ({len(clusters)} senses)"]
    for c in clusters:
        reps = ", ".join(vocab.lemma_of(r) for r in c.representatives[:top])
        flag = "  [fallback]" if c.fallback else ""
        lines.append(f"  {word}@{c.sense_id}  support={c.support}{flag}: {reps}")
    return "\n".join(lines)


def dump_inventory_text(inventory: SenseInventory, vocab: VocabTable, path: str | Path, top: int = 5) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for lemma in inventory.lemmas():
            fh.write(format_inventory_entry(lemma, inventory.senses(lemma), vocab, top) + "\n\n")
