import numpy as np

from subsense.graph import build_graph
from subsense.index import build_index
from subsense.induction import (
    InductionConfig,
    build_inventory,
    extract_representatives,
    format_inventory_entry,
    induce_senses,
    load_inventory,
    save_inventory,
)
from subsense.louvain import Partition
from subsense.synth import SynthSpec, generate_synth_corpus

# Table-style fixture: five clearly separated usage families of one word.
BASS_POOLS = {
    "bass": [
        ["bassist", "guitar", "lead", "drum", "rhythm"],
        ["double", "second", "tail", "steel", "electric"],
        ["fish", "bottom", "perch", "shark", "add"],
        ["tenor", "baritone", "voice", "soprano", "singer"],
        ["trap", "swing", "heavy", "dub", "dance"],
    ]
}


def _corpus_index(spec):
    corpus = generate_synth_corpus(spec)
    return corpus, build_index(corpus.records, vocab_size=len(corpus.vocab))


class TestExtractRepresentatives:
    def test_sort_and_truncate(self):
        g = build_graph([["a", "b"], ["a", "b"], ["a", "c"], ["d", "e"]])
        # Intra degrees within {a,b,c}: a=3, b=2, c=1.
        part = Partition({"a": 0, "b": 0, "c": 0, "d": 1, "e": 1}, 2)
        clusters = extract_representatives(g, part, cap=2)
        assert clusters[0].representatives == ("a", "b")
        assert clusters[1].representatives == ("d", "e")

    def test_cap_covers_all_sorted(self):
        g = build_graph([[1, 2], [1, 2], [2, 3]])
        part = Partition({1: 0, 2: 0, 3: 0}, 1)
        [cluster] = extract_representatives(g, part, cap=100)
        assert cluster.representatives == (2, 1, 3)

    def test_degree_ties_ascending_lemma_id(self):
        g = build_graph([[4, 9], [2, 7]])
        part = Partition({4: 0, 9: 0, 2: 0, 7: 0}, 1)
        [cluster] = extract_representatives(g, part, cap=100)
        assert cluster.representatives == (2, 4, 7, 9)


class TestInduceSenses:
    def test_two_planted_senses_recovered(self):
        spec = SynthSpec(num_words=1, senses_low=2, senses_high=2, pool_size=10,
                         noise_rate=0.0, instances_per_word=200, seed=4)
        corpus, ix = _corpus_index(spec)
        wid = next(iter(corpus.planted_senses))
        clusters = induce_senses(wid, ix, InductionConfig(seed=0))
        assert len(clusters) == 2
        pools = [set(p) for p in corpus.pools_by_word[wid]]
        for c in clusters:
            reps = set(c.representatives)
            assert any(reps <= pool for pool in pools)

    def test_below_min_occurrences_fallback(self):
        spec = SynthSpec(num_words=1, senses_low=2, senses_high=2, instances_per_word=10, seed=1)
        corpus, ix = _corpus_index(spec)
        wid = next(iter(corpus.planted_senses))
        clusters = induce_senses(wid, ix, InductionConfig(min_occurrences=20))
        assert len(clusters) == 1
        assert clusters[0].fallback
        assert 1 <= len(clusters[0].representatives) <= 5
        # Fallback representatives are the most frequent substitutes.
        from collections import Counter

        counts = Counter(s for p in ix.lookup(wid) for s in p.substitutes)
        expected = [l for l, _ in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:5]]
        assert list(clusters[0].representatives) == expected

    def test_sense_order_by_support(self):
        spec = SynthSpec(num_words=6, senses_low=2, senses_high=4, noise_rate=0.05,
                         instances_per_word=150, seed=8)
        corpus, ix = _corpus_index(spec)
        for wid in corpus.planted_senses:
            clusters = induce_senses(wid, ix, InductionConfig(seed=0))
            supports = [c.support for c in clusters]
            assert supports == sorted(supports, reverse=True)
            assert [c.sense_id for c in clusters] == list(range(len(clusters)))

    def test_mean_senses_close_to_plant(self):
        spec = SynthSpec(num_words=30, senses_low=2, senses_high=4, noise_rate=0.1,
                         instances_per_word=300, seed=13)
        corpus, ix = _corpus_index(spec)
        config = InductionConfig(seed=0)
        inventory = build_inventory(ix, config, lemmas=list(corpus.planted_senses))
        planted_mean = float(np.mean(list(corpus.planted_senses.values())))
        induced_mean = float(
            np.mean([len(inventory.senses(w)) for w in corpus.planted_senses])
        )
        assert abs(induced_mean - planted_mean) <= 0.5

    def test_unseen_lemma_empty(self):
        spec = SynthSpec(num_words=1, instances_per_word=30, seed=0)
        _, ix = _corpus_index(spec)
        assert induce_senses(10**6, ix) == []

    def test_deterministic(self):
        spec = SynthSpec(num_words=3, instances_per_word=120, noise_rate=0.1, seed=21)
        corpus, ix = _corpus_index(spec)
        config = InductionConfig(seed=5)
        a = [induce_senses(w, ix, config) for w in corpus.planted_senses]
        b = [induce_senses(w, ix, config) for w in corpus.planted_senses]
        assert a == b


class TestBassFixture:
    def test_five_usage_families_recovered(self):
        spec = SynthSpec(pools=BASS_POOLS, noise_rate=0.0, instances_per_word=250, seed=6)
        corpus, ix = _corpus_index(spec)
        wid = corpus.vocab.id_of("bass")
        clusters = induce_senses(wid, ix, InductionConfig(seed=0))
        assert len(clusters) == 5
        pools = [set(p) for p in corpus.pools_by_word[wid]]
        matched = set()
        for c in clusters:
            reps = set(c.representatives)
            owners = [i for i, pool in enumerate(pools) if reps == pool]
            assert owners, f"representatives {reps} match no pool"
            matched.add(owners[0])
        assert matched == {0, 1, 2, 3, 4}

    def test_human_readable_table(self):
        spec = SynthSpec(pools=BASS_POOLS, noise_rate=0.0, instances_per_word=250, seed=6)
        corpus, ix = _corpus_index(spec)
        wid = corpus.vocab.id_of("bass")
        clusters = induce_senses(wid, ix, InductionConfig(seed=0))
        table = format_inventory_entry(wid, clusters, corpus.vocab)
        assert table.startswith("bass")
        assert "bass@0" in table and "bass@4" in table
        assert "fish" in table  # a representative rendered as a string


def test_in_community_instance_does_not_lower_support():
    # Re-tagging with one extra instance whose substitutes sit entirely
    # inside one community must not decrease that community's support.
    from subsense.tagging import _assign_from_sets

    spec = SynthSpec(num_words=2, senses_low=3, senses_high=3, noise_rate=0.0,
                     instances_per_word=150, seed=10)
    corpus = generate_synth_corpus(spec)
    ix = build_index(corpus.records, vocab_size=len(corpus.vocab))
    wid = next(iter(corpus.planted_senses))
    clusters = induce_senses(wid, ix, InductionConfig(seed=0))
    rep_sets = [(c.sense_id, frozenset(c.representatives)) for c in clusters]

    def support(postings):
        counts = {c.sense_id: 0 for c in clusters}
        for subs in postings:
            counts[_assign_from_sets(frozenset(subs), rep_sets)[0]] += 1
        return counts

    base_postings = [p.substitutes for p in ix.lookup(wid)]
    before = support(base_postings)
    target = clusters[1]
    extra = tuple(sorted(target.representatives)[:5])
    after = support(base_postings + [extra])
    assert after[target.sense_id] >= before[target.sense_id]
    for c in clusters:
        if c.sense_id != target.sense_id:
            assert after[c.sense_id] == before[c.sense_id]


class TestInventory:
    def test_save_load_round_trip(self, tmp_path):
        spec = SynthSpec(num_words=4, instances_per_word=100, noise_rate=0.1, seed=3)
        corpus, ix = _corpus_index(spec)
        inventory = build_inventory(ix, InductionConfig(seed=0), lemmas=list(corpus.planted_senses))
        p1, p2 = tmp_path / "inv1.jsonl", tmp_path / "inv2.jsonl"
        save_inventory(inventory, p1)
        save_inventory(load_inventory(p1), p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_worker_pool_matches_serial(self, tmp_path):
        spec = SynthSpec(num_words=6, instances_per_word=80, noise_rate=0.1, seed=3)
        corpus, ix = _corpus_index(spec)
        config = InductionConfig(seed=0)
        serial = build_inventory(ix, config)
        pooled = build_inventory(ix, config, workers=2)
        p1, p2 = tmp_path / "s.jsonl", tmp_path / "p.jsonl"
        save_inventory(serial, p1)
        save_inventory(pooled, p2)
        assert p1.read_bytes() == p2.read_bytes()
