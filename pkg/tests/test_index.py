import numpy as np
import pytest

from subsense.index import (
    CorruptIndex,
    IndexBuildError,
    build_index,
    load_index,
    lookup,
    merge_indexes,
    sample_occurrences,
    save_index,
)
from subsense.records import SubstituteRecord


def _random_records(rng, n, n_lemmas=20, vocab=200):
    out = []
    for i in range(n):
        target = int(rng.integers(0, n_lemmas))
        k = int(rng.integers(1, 6))
        subs = tuple(int(x) for x in rng.choice(np.arange(n_lemmas, vocab), size=k, replace=False))
        out.append(
            SubstituteRecord(int(rng.integers(0, 50)), int(rng.integers(0, 100)), i % 30, target, subs)
        )
    return out


def test_counts_per_lemma():
    recs = [
        SubstituteRecord(0, 0, 0, 7, (1,)),
        SubstituteRecord(0, 0, 1, 7, (2,)),
        SubstituteRecord(0, 1, 0, 7, (3,)),
        SubstituteRecord(1, 0, 0, 9, (1,)),
        SubstituteRecord(1, 0, 2, 9, (4,)),
    ]
    ix = build_index(recs)
    assert ix.count(7) == 3 and ix.count(9) == 2
    assert ix.total_records() == 5


def test_empty_stream_empty_index():
    ix = build_index([])
    assert ix.lemmas() == [] and ix.total_records() == 0


def test_total_count_invariant(rng):
    recs = _random_records(rng, 500)
    ix = build_index(recs)
    assert sum(ix.count(l) for l in ix.lemmas()) == len(recs)


def test_binary_and_jsonl_records_index_identically(tmp_path, rng):
    # The two record encodings are interchangeable inputs: indexing either
    # yields byte-identical index files.
    from subsense.records import read_records, write_records

    recs = _random_records(rng, 300)
    write_records(tmp_path / "r.jsonl", recs)
    write_records(tmp_path / "r.subbin", recs)
    ix_a = build_index(read_records(tmp_path / "r.jsonl"))
    ix_b = build_index(read_records(tmp_path / "r.subbin"))
    save_index(ix_a, tmp_path / "a.wsix")
    save_index(ix_b, tmp_path / "b.wsix")
    assert (tmp_path / "a.wsix").read_bytes() == (tmp_path / "b.wsix").read_bytes()


def test_sharded_build_identical_bytes(tmp_path, rng):
    recs = _random_records(rng, 400)
    whole = build_index(recs)
    quarters = [build_index(recs[i::4]) for i in range(4)]
    merged = merge_indexes(quarters)
    p1, p2 = tmp_path / "whole.wsix", tmp_path / "merged.wsix"
    save_index(whole, p1)
    save_index(merged, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_lookup_sorted_and_unseen_empty(rng):
    recs = _random_records(rng, 300)
    ix = build_index(recs)
    assert lookup(ix, 10**6) == []
    for lemma in ix.lemmas():
        keys = [p.position for p in lookup(ix, lemma)]
        assert keys == sorted(keys)


def test_build_rejects_invalid_ids():
    with pytest.raises(IndexBuildError):
        build_index([SubstituteRecord(0, 0, 0, 99, (1,))], vocab_size=10)
    with pytest.raises(IndexBuildError):
        build_index([SubstituteRecord(0, 0, 0, 1, ())])


class TestSampling:
    def test_below_cap_returns_all_in_order(self, rng):
        recs = _random_records(rng, 500)
        ix = build_index(recs)
        lemma = ix.lemmas()[0]
        assert sample_occurrences(ix, lemma, cap=1000, seed=0) == ix.lookup(lemma)

    def test_above_cap_exact_size_distinct(self):
        recs = [SubstituteRecord(0, i, 0, 5, (i + 10,)) for i in range(5000)]
        ix = build_index(recs)
        sample = sample_occurrences(ix, 5, cap=1000, seed=0)
        assert len(sample) == 1000
        assert len({p.position for p in sample}) == 1000

    def test_deterministic_per_lemma_seed(self):
        recs = [SubstituteRecord(0, i, 0, 5, (i + 10,)) for i in range(3000)]
        ix = build_index(recs)
        a = sample_occurrences(ix, 5, cap=100, seed=42)
        b = sample_occurrences(ix, 5, cap=100, seed=42)
        c = sample_occurrences(ix, 5, cap=100, seed=43)
        assert a == b
        assert a != c

    def test_inclusion_frequency_uniform(self):
        # Monte-Carlo oracle: inclusion probability of a fixed posting is
        # cap/count = 0.2; over 2000 seeds the observed frequency must be
        # within 3 sigma of the binomial mean.
        count, cap, seeds = 5000, 1000, 2000
        recs = [SubstituteRecord(0, i, 0, 5, (i + 10,)) for i in range(count)]
        ix = build_index(recs)
        target_pos = (0, 123, 0)
        hits = 0
        for seed in range(seeds):
            sample = sample_occurrences(ix, 5, cap=cap, seed=seed)
            hits += any(p.position == target_pos for p in sample)
        p = cap / count
        sigma = (p * (1 - p) / seeds) ** 0.5
        assert abs(hits / seeds - p) <= 3 * sigma


class TestPersistence:
    def test_round_trip_bytes(self, tmp_path, rng):
        ix = build_index(_random_records(rng, 300))
        p1, p2 = tmp_path / "a.wsix", tmp_path / "b.wsix"
        save_index(ix, p1)
        save_index(load_index(p1, eager=True), p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_lookup_after_load_matches(self, tmp_path, rng):
        ix = build_index(_random_records(rng, 300))
        path = tmp_path / "a.wsix"
        save_index(ix, path)
        mapped = load_index(path)
        for lemma in rng.choice(ix.lemmas(), size=10):
            assert mapped.lookup(int(lemma)) == ix.lookup(int(lemma))
        assert mapped.lookup(10**6) == []

    def test_truncated_file_raises(self, tmp_path, rng):
        ix = build_index(_random_records(rng, 100))
        path = tmp_path / "a.wsix"
        save_index(ix, path)
        data = path.read_bytes()
        path.write_bytes(data[: len(data) // 2])
        with pytest.raises(CorruptIndex):
            load_index(path)

    def test_bad_magic_raises(self, tmp_path):
        path = tmp_path / "a.wsix"
        path.write_bytes(b"JUNKJUNKJUNKJUNKJUNK")
        with pytest.raises(CorruptIndex):
            load_index(path)

    def test_sampling_equal_through_mapped_index(self, tmp_path):
        recs = [SubstituteRecord(0, i, 0, 5, (i + 10,)) for i in range(3000)]
        ix = build_index(recs)
        path = tmp_path / "a.wsix"
        save_index(ix, path)
        mapped = load_index(path)
        assert sample_occurrences(mapped, 5, cap=50, seed=9) == sample_occurrences(ix, 5, cap=50, seed=9)
