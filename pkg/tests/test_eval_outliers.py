import numpy as np
import pytest

from oracles import compactness_triple_loop
from subsense.embeddings import EmbeddingMatrix
from subsense.evaluation import (
    GroupError,
    OutlierGroup,
    compactness,
    detect_outlier,
    evaluate_outlier_dataset,
    opp_and_accuracy,
    resolve_prototypes,
)


def _emb(tokens_vectors: dict[str, np.ndarray]) -> EmbeddingMatrix:
    tokens = list(tokens_vectors)
    return EmbeddingMatrix(tokens, np.stack([tokens_vectors[t] for t in tokens]).astype(np.float32))


def _coherent_group_embedding(n_group=8, dim=16, seed=0):
    """8 words tightly clustered around one direction + 1 orthogonal outlier."""
    rng = np.random.default_rng(seed)
    base = np.zeros(dim)
    base[0] = 1.0
    vectors = {}
    for i in range(n_group):
        vectors[f"g{i}"] = base + 0.05 * rng.normal(size=dim)
    ortho = np.zeros(dim)
    ortho[1] = 1.0
    vectors["odd"] = ortho
    return _emb(vectors)


class TestCompactness:
    def test_constant_similarity_gives_constant_score(self):
        # All pairwise cosines equal: four identical unit vectors.
        vecs = {w: np.array([1.0, 0.0]) for w in ("a", "b", "c", "d")}
        emb = _emb(vecs)
        scores = compactness(emb, ["a", "b", "c", "d"], {w: w for w in vecs})
        for w in vecs:
            assert scores[w] == pytest.approx(1.0)

    def test_three_words_score_is_other_pair(self):
        vecs = {
            "a": np.array([1.0, 0.0]),
            "b": np.array([1.0, 1.0]),
            "c": np.array([0.0, 1.0]),
        }
        emb = _emb(vecs)
        scores = compactness(emb, ["a", "b", "c"], {w: w for w in vecs})
        assert scores["a"] == pytest.approx(emb.cosine("b", "c"), abs=1e-6)
        assert scores["b"] == pytest.approx(emb.cosine("a", "c"), abs=1e-6)
        assert scores["c"] == pytest.approx(emb.cosine("a", "b"), abs=1e-6)

    def test_matches_triple_loop_oracle(self):
        rng = np.random.default_rng(5)
        for _ in range(30):
            n = int(rng.integers(3, 10))
            vecs = {f"w{i}": rng.normal(size=6) for i in range(n)}
            emb = _emb(vecs)
            words = list(vecs)
            got = compactness(emb, words, {w: w for w in words})
            want = compactness_triple_loop(vecs, words)
            for w in words:
                assert got[w] == pytest.approx(want[w], abs=1e-6)

    def test_too_small_group_rejected(self):
        emb = _coherent_group_embedding()
        with pytest.raises(GroupError):
            compactness(emb, ["g0", "g1"])


class TestDetectOutlier:
    def test_orthogonal_outlier_detected(self):
        emb = _coherent_group_embedding()
        predicted, op = detect_outlier(emb, [f"g{i}" for i in range(8)], "odd")
        assert predicted == "odd"
        assert op == 8

    def test_outlier_ranked_first_scores_zero(self):
        # The "outlier" is the group's own centroid-ish word; a genuine
        # group member passed as the outlier ranks near the top.
        emb = _coherent_group_embedding()
        members = [f"g{i}" for i in range(7)] + ["odd"]
        predicted, op = detect_outlier(emb, members, "g7")
        assert predicted == "odd"
        assert op < 8

    def test_permutation_invariant(self):
        emb = _coherent_group_embedding(seed=3)
        members = [f"g{i}" for i in range(8)]
        base = detect_outlier(emb, members, "odd")
        import random

        for s in range(5):
            shuffled = members[:]
            random.Random(s).shuffle(shuffled)
            assert detect_outlier(emb, shuffled, "odd") == base

    def test_distinctness_enforced(self):
        emb = _coherent_group_embedding()
        with pytest.raises(GroupError):
            detect_outlier(emb, ["g0"] * 8, "odd")


class TestOppAndAccuracy:
    def test_all_correct(self):
        results = [(8, 9)] * 10
        assert opp_and_accuracy(results) == (100.0, 100.0)

    def test_single_half_way(self):
        opp, acc = opp_and_accuracy([(4, 9)])
        assert opp == pytest.approx(50.0)
        assert acc == 0.0

    def test_perfect_opp_iff_perfect_accuracy(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            results = [(int(rng.integers(0, 9)), 9) for _ in range(20)]
            opp, acc = opp_and_accuracy(results)
            assert (opp == 100.0) == (acc == 100.0)


class TestResolvePrototypes:
    def test_single_sense_identity(self):
        emb = _coherent_group_embedding()
        words = ["g0", "g1", "g2"]
        assert resolve_prototypes(emb, words) == {w: w for w in words}

    def test_ambiguous_distractor_resolved_to_group_sense(self):
        # Seven coherent words; "nike" has a salient off-group sense 0 and
        # an in-group sense 1. Resolution must pick sense 1.
        rng = np.random.default_rng(1)
        dim = 12
        god = np.zeros(dim)
        god[0] = 1.0
        shoe = np.zeros(dim)
        shoe[1] = 1.0
        vectors = {f"god{i}": god + 0.03 * rng.normal(size=dim) for i in range(7)}
        vectors["nike@0"] = shoe
        vectors["nike@1"] = god + 0.03 * rng.normal(size=dim)
        emb = _emb(vectors)
        words = [f"god{i}" for i in range(7)] + ["nike"]
        resolved = resolve_prototypes(emb, words)
        assert resolved["nike"] == "nike@1"

    def test_fixed_point_stable(self):
        emb = _coherent_group_embedding()
        words = [f"g{i}" for i in range(8)]
        once = resolve_prototypes(emb, words)
        again = resolve_prototypes(emb, [once[w] if once[w] in emb.tokens else w for w in words])
        assert set(again.values()) == set(once.values())

    def test_converged_choices_are_coordinatewise_optimal(self):
        # At the fixed point no word can improve its mean cosine to the
        # others' chosen vectors by switching to another of its senses.
        rng = np.random.default_rng(7)
        dim = 10
        god = np.zeros(dim)
        god[0] = 1.0
        shoe = np.zeros(dim)
        shoe[1] = 1.0
        vectors = {f"god{i}": god + 0.05 * rng.normal(size=dim) for i in range(5)}
        vectors["nike@0"] = shoe
        vectors["nike@1"] = god + 0.05 * rng.normal(size=dim)
        vectors["ares@0"] = god + 0.05 * rng.normal(size=dim)
        vectors["ares@1"] = shoe + 0.05 * rng.normal(size=dim)
        emb = _emb(vectors)
        words = [f"god{i}" for i in range(5)] + ["nike", "ares"]
        resolved = resolve_prototypes(emb, words)

        def mean_cos(tok, others):
            vecs = np.stack([emb.vector(o) for o in others])
            unit = vecs / np.linalg.norm(vecs, axis=1, keepdims=True)
            v = emb.vector(tok)
            return float((unit @ (v / np.linalg.norm(v))).mean())

        for w in words:
            others = [resolved[o] for o in words if o != w]
            chosen_score = mean_cos(resolved[w], others)
            candidates = emb.sense_tokens(w) or [w]
            for cand in candidates:
                assert mean_cos(cand, others) <= chosen_score + 1e-9


class TestDistractorScenario:
    def _vectors(self):
        rng = np.random.default_rng(2)
        dim = 12
        god = np.zeros(dim)
        god[0] = 1.0
        shoe = np.zeros(dim)
        shoe[1] = 1.0
        city = np.zeros(dim)
        city[2] = 1.0
        vectors = {f"god{i}": god + 0.03 * rng.normal(size=dim) for i in range(7)}
        vectors["rome"] = city
        return vectors, god, shoe

    def test_sense_aware_embedding_keeps_distractor(self):
        vectors, god, shoe = self._vectors()
        vectors["nike@0"] = shoe
        vectors["nike@1"] = god + np.append([0.02], np.zeros(11))
        emb = _emb(vectors)
        members = [f"god{i}" for i in range(7)] + ["nike"]
        predicted, op = detect_outlier(emb, members, "rome")
        assert predicted == "rome" and op == 8

    def test_single_prototype_embedding_fooled(self):
        vectors, god, shoe = self._vectors()
        vectors["nike"] = shoe  # only the salient, off-group sense exists
        emb = _emb(vectors)
        members = [f"god{i}" for i in range(7)] + ["nike"]
        predicted, op = detect_outlier(emb, members, "rome")
        assert predicted == "nike"
        assert op < 8


class TestDatasetRun:
    def test_group_shape_validated(self):
        with pytest.raises(GroupError):
            OutlierGroup(("a", "b"), "d", tuple("efghijkl"))
        with pytest.raises(GroupError):
            OutlierGroup(tuple("abcdefg"), "a", tuple("hijklmno"))

    def test_dataset_report(self):
        emb = _coherent_group_embedding()
        # One group reusing the coherent fixture: 7 ingroup + distractor
        # g7, with 8 outliers that are all copies of "odd"-like vectors.
        rng = np.random.default_rng(9)
        extra = {f"odd{i}": np.append([0.0, 1.0], 0.01 * rng.normal(size=14)) for i in range(8)}
        merged = {t: emb.vector(t) for t in emb.tokens} | extra
        emb2 = _emb(merged)
        group = OutlierGroup(
            tuple(f"g{i}" for i in range(7)), "g7", tuple(extra)
        )
        report = evaluate_outlier_dataset(emb2, [group])
        assert report["num_cases"] == 8
        assert report["opp"] == 100.0 and report["accuracy"] == 100.0
