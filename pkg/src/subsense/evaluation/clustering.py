"""Clustering agreement metrics: paired F-score, V-measure, tagging F1.

All three take instance -> label mappings over the same instance set and
are invariant to relabeling of cluster ids.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Hashable, Mapping


def _contingency(gold: Mapping, pred: Mapping) -> dict[tuple[Hashable, Hashable], int]:
    if set(gold) != set(pred):
        raise ValueError("gold and predicted labelings cover different instances")
    cells: dict[tuple[Hashable, Hashable], int] = {}
    for inst, g in gold.items():
        key = (g, pred[inst])
        cells[key] = cells.get(key, 0) + 1
    return cells


def paired_fscore(gold: Mapping, pred: Mapping) -> float:
    """F1 over unordered instance pairs that are co-clustered.

    Precision: co-clustered pairs of the prediction that are also
    co-clustered in gold; recall symmetric. Computed from contingency
    counts, so it is O(instances) rather than O(pairs).
    """
    cells = _contingency(gold, pred)
    gold_sizes = Counter(gold.values())
    pred_sizes = Counter(pred.values())

    def pairs(n: int) -> int:
        return n * (n - 1) // 2

    both = sum(pairs(n) for n in cells.values())
    in_pred = sum(pairs(n) for n in pred_sizes.values())
    in_gold = sum(pairs(n) for n in gold_sizes.values())
    precision = both / in_pred if in_pred else (1.0 if in_gold == 0 else 0.0)
    recall = both / in_gold if in_gold else (1.0 if in_pred == 0 else 0.0)
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def v_measure(gold: Mapping, pred: Mapping) -> float:
    """Harmonic mean of homogeneity and completeness (natural-log entropies)."""
    cells = _contingency(gold, pred)
    n = len(gold)
    gold_sizes = Counter(gold.values())
    pred_sizes = Counter(pred.values())

    h_gold = -sum((c / n) * math.log(c / n) for c in gold_sizes.values())
    h_pred = -sum((c / n) * math.log(c / n) for c in pred_sizes.values())
    # Conditional entropies from the contingency table.
    h_gold_given_pred = 0.0
    h_pred_given_gold = 0.0
    for (g, p), c in cells.items():
        h_gold_given_pred -= (c / n) * math.log(c / pred_sizes[p])
        h_pred_given_gold -= (c / n) * math.log(c / gold_sizes[g])

    homogeneity = 1.0 if h_gold == 0 else 1.0 - h_gold_given_pred / h_gold
    completeness = 1.0 if h_pred == 0 else 1.0 - h_pred_given_gold / h_pred
    if homogeneity + completeness == 0:
        return 0.0
    return 2 * homogeneity * completeness / (homogeneity + completeness)


def best_cluster_label_map(gold: Mapping, pred: Mapping) -> dict:
    """Many-to-one map: each predicted cluster -> its majority gold label
    (ties broken by sorted label order for determinism)."""
    if set(gold) != set(pred):
        raise ValueError("gold and predicted labelings cover different instances")
    votes: dict[Hashable, Counter] = {}
    for inst, cluster in pred.items():
        votes.setdefault(cluster, Counter())[gold[inst]] += 1
    return {
        cluster: sorted(counter.items(), key=lambda kv: (-kv[1], repr(kv[0])))[0][0]
        for cluster, counter in votes.items()
    }


def tagging_f1(gold: Mapping, pred: Mapping, cluster_map: Mapping) -> float:
    """Micro-averaged F1 of mapped cluster labels against gold labels.

    ``cluster_map`` must cover every predicted cluster. With exactly one
    prediction and one gold label per instance the micro F1 equals
    accuracy, but it is computed from summed per-class TP/FP/FN so the
    formula stays honest if that ever changes.
    """
    missing = {c for c in set(pred.values()) if c not in cluster_map}
    if missing:
        raise ValueError(f"cluster map does not cover clusters {sorted(map(repr, missing))}")
    if set(gold) != set(pred):
        raise ValueError("gold and predicted labelings cover different instances")
    tp: Counter = Counter()
    fp: Counter = Counter()
    fn: Counter = Counter()
    for inst, g in gold.items():
        mapped = cluster_map[pred[inst]]
        if mapped == g:
            tp[g] += 1
        else:
            fp[mapped] += 1
            fn[g] += 1
    tp_sum, fp_sum, fn_sum = sum(tp.values()), sum(fp.values()), sum(fn.values())
    if tp_sum == 0:
        return 0.0
    precision = tp_sum / (tp_sum + fp_sum)
    recall = tp_sum / (tp_sum + fn_sum)
    return 2 * precision * recall / (precision + recall)
