import random

import pytest

from oracles import micro_f1_confusion, paired_f_enumeration, v_measure_direct
from subsense.evaluation import best_cluster_label_map, paired_fscore, tagging_f1, v_measure


def _random_labelings(rng, n=40, k_gold=4, k_pred=5):
    gold = {i: rng.randrange(k_gold) for i in range(n)}
    pred = {i: rng.randrange(k_pred) for i in range(n)}
    return gold, pred


class TestPairedFScore:
    def test_identical_partitions(self):
        gold = {i: i % 3 for i in range(30)}
        assert paired_fscore(gold, dict(gold)) == 1.0

    def test_singletons_vs_one_cluster(self):
        gold = {i: 0 for i in range(10)}
        pred = {i: i for i in range(10)}
        assert paired_fscore(gold, pred) == 0.0

    def test_both_all_singletons(self):
        gold = {i: i for i in range(5)}
        assert paired_fscore(gold, dict(gold)) == 1.0

    def test_matches_pair_enumeration(self):
        rng = random.Random(3)
        for _ in range(60):
            gold, pred = _random_labelings(rng, n=rng.randint(2, 50))
            assert paired_fscore(gold, pred) == pytest.approx(
                paired_f_enumeration(gold, pred), abs=1e-9
            )

    def test_relabeling_invariance(self):
        rng = random.Random(4)
        gold, pred = _random_labelings(rng)
        renamed = {i: f"cluster-{c}" for i, c in pred.items()}
        assert paired_fscore(gold, pred) == paired_fscore(gold, renamed)

    def test_mismatched_instances_rejected(self):
        with pytest.raises(ValueError):
            paired_fscore({1: 0}, {2: 0})


class TestVMeasure:
    def test_identical_partitions(self):
        gold = {i: i % 4 for i in range(40)}
        assert v_measure(gold, dict(gold)) == pytest.approx(1.0)

    def test_one_cluster_over_two_classes(self):
        gold = {i: i % 2 for i in range(20)}
        pred = {i: 0 for i in range(20)}
        assert v_measure(gold, pred) == 0.0

    def test_matches_direct_entropy_oracle(self):
        rng = random.Random(9)
        for _ in range(60):
            gold, pred = _random_labelings(rng, n=rng.randint(2, 60))
            assert v_measure(gold, pred) == pytest.approx(
                v_measure_direct(gold, pred), abs=1e-9
            )

    def test_matches_sklearn(self):
        from sklearn.metrics import v_measure_score

        rng = random.Random(10)
        for _ in range(20):
            gold, pred = _random_labelings(rng)
            keys = sorted(gold)
            sk = v_measure_score([gold[i] for i in keys], [pred[i] for i in keys])
            assert v_measure(gold, pred) == pytest.approx(sk, abs=1e-9)

    def test_relabeling_invariance(self):
        rng = random.Random(11)
        gold, pred = _random_labelings(rng)
        renamed = {i: str(100 + c) for i, c in pred.items()}
        assert v_measure(gold, pred) == pytest.approx(v_measure(gold, renamed), abs=1e-12)


class TestTaggingF1:
    def test_perfect_identity_map(self):
        gold = {i: i % 3 for i in range(30)}
        assert tagging_f1(gold, dict(gold), {0: 0, 1: 1, 2: 2}) == 1.0

    def test_all_to_majority_label(self):
        gold = {i: "a" if i < 10 else "b" for i in range(20)}
        pred = {i: 0 for i in range(20)}
        assert tagging_f1(gold, pred, {0: "a"}) == pytest.approx(0.5)

    def test_matches_confusion_oracle(self):
        rng = random.Random(12)
        for _ in range(40):
            gold, pred = _random_labelings(rng, n=rng.randint(2, 50))
            mapping = best_cluster_label_map(gold, pred)
            mapped = {i: mapping[c] for i, c in pred.items()}
            assert tagging_f1(gold, pred, mapping) == pytest.approx(
                micro_f1_confusion(gold, mapped), abs=1e-12
            )

    def test_best_map_is_majority(self):
        gold = {0: "x", 1: "x", 2: "y", 3: "y", 4: "y"}
        pred = {0: 7, 1: 7, 2: 7, 3: 8, 4: 8}
        assert best_cluster_label_map(gold, pred) == {7: "x", 8: "y"}

    def test_incomplete_map_rejected(self):
        with pytest.raises(ValueError):
            tagging_f1({0: "a"}, {0: 5}, {})
