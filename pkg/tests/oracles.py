"""Independent oracle implementations used to check the library.

Everything here is deliberately written the slow, direct way (pair
enumeration, exhaustive partition search, finite differences, triple
loops) and shares no code with the implementations under test.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter

import numpy as np


def set_partitions(items):
    """All partitions of ``items`` via restricted-growth strings."""
    items = list(items)
    n = len(items)
    if n == 0:
        yield []
        return
    rgs = [0] * n
    maxes = [0] * n

    def emit():
        groups: dict[int, list] = {}
        for i, c in enumerate(rgs):
            groups.setdefault(c, []).append(items[i])
        return [groups[c] for c in sorted(groups)]

    yield emit()
    while True:
        i = n - 1
        while i > 0 and rgs[i] == maxes[i - 1] + 1:
            i -= 1
        if i == 0:
            return
        rgs[i] += 1
        maxes[i] = max(maxes[i - 1], rgs[i])
        for j in range(i + 1, n):
            rgs[j] = 0
            maxes[j] = maxes[i]
        yield emit()


def modularity_direct(weights: dict[tuple[int, int], int], nodes, labels, resolution=1.0):
    """Q from the ordered-pair double sum, straight off the definition."""
    w = {}
    for (u, v), x in weights.items():
        w[(u, v)] = w.get((u, v), 0) + x
        w[(v, u)] = w.get((v, u), 0) + x
    k = {u: 0 for u in nodes}
    for (u, _), x in w.items():
        k[u] += x
    two_m = sum(k.values())
    q = 0.0
    for u in nodes:
        for v in nodes:
            if labels[u] == labels[v]:
                q += w.get((u, v), 0) - resolution * k[u] * k[v] / two_m
    return q / two_m


def best_partition_exhaustive(weights, nodes, resolution=1.0):
    """(best Q, best labels) over every partition of ``nodes``."""
    best_q, best_labels = -math.inf, None
    for groups in set_partitions(nodes):
        labels = {u: ci for ci, group in enumerate(groups) for u in group}
        q = modularity_direct(weights, nodes, labels, resolution)
        if q > best_q:
            best_q, best_labels = q, labels
    return best_q, best_labels


def paired_f_enumeration(gold: dict, pred: dict) -> float:
    """Paired F-score by explicit O(n^2) pair enumeration."""
    insts = sorted(gold, key=repr)
    gold_pairs = set()
    pred_pairs = set()
    for a, b in itertools.combinations(insts, 2):
        if gold[a] == gold[b]:
            gold_pairs.add((a, b))
        if pred[a] == pred[b]:
            pred_pairs.add((a, b))
    both = len(gold_pairs & pred_pairs)
    p = both / len(pred_pairs) if pred_pairs else (1.0 if not gold_pairs else 0.0)
    r = both / len(gold_pairs) if gold_pairs else (1.0 if not pred_pairs else 0.0)
    return 0.0 if p + r == 0 else 2 * p * r / (p + r)


def v_measure_direct(gold: dict, pred: dict) -> float:
    """V-measure from joint/marginal probability dictionaries."""
    n = len(gold)
    joint = Counter((gold[i], pred[i]) for i in gold)
    pg = Counter(gold.values())
    pp = Counter(pred.values())

    def entropy(counter):
        return -sum((c / n) * math.log(c / n) for c in counter.values())

    h_g, h_p = entropy(pg), entropy(pp)
    h_g_given_p = -sum(
        (c / n) * math.log((c / n) / (pp[p_lab] / n)) for (g_lab, p_lab), c in joint.items()
    )
    h_p_given_g = -sum(
        (c / n) * math.log((c / n) / (pg[g_lab] / n)) for (g_lab, p_lab), c in joint.items()
    )
    hom = 1.0 if h_g == 0 else 1 - h_g_given_p / h_g
    com = 1.0 if h_p == 0 else 1 - h_p_given_g / h_p
    return 0.0 if hom + com == 0 else 2 * hom * com / (hom + com)


def compactness_triple_loop(vectors: dict[str, np.ndarray], words: list[str]) -> dict[str, float]:
    """c(w) via the O(n^3) definition, one cosine at a time."""

    def cos(a, b):
        na, nb = np.linalg.norm(a), np.linalg.norm(b)
        if na == 0 or nb == 0:
            return 0.0
        return float(np.dot(a, b) / (na * nb))

    out = {}
    for w in words:
        rest = [x for x in words if x != w]
        total = 0.0
        count = 0
        for wi in rest:
            for wj in rest:
                if wi != wj:
                    total += cos(vectors[wi], vectors[wj])
                    count += 1
        out[w] = total / count
    return out


def jaccard_argmax_brute(subs: set, rep_sets: list[set]) -> tuple[int, float, bool]:
    """Best sense by recomputing Jaccard with explicit loops."""
    scores = []
    for reps in rep_sets:
        inter = sum(1 for x in subs if x in reps)
        union = len(set(list(subs) + list(reps)))
        scores.append(inter / union if union else 0.0)
    best = max(scores)
    if best <= 0:
        return 0, 0.0, False
    for i, s in enumerate(scores):
        if s == best:
            return i, s, True
    raise AssertionError


def fd_gradient(f, x: np.ndarray, h: float = 1e-6) -> np.ndarray:
    """Central finite differences of scalar f at x."""
    x = np.asarray(x, dtype=np.float64)
    g = np.zeros_like(x)
    it = np.nditer(x, flags=["multi_index"])
    while not it.finished:
        ix = it.multi_index
        xp = x.copy()
        xm = x.copy()
        xp[ix] += h
        xm[ix] -= h
        g[ix] = (f(xp) - f(xm)) / (2 * h)
        it.iternext()
    return g


def micro_f1_confusion(gold: dict, mapped_pred: dict) -> float:
    """Micro F1 from an explicit confusion matrix."""
    labels = sorted({*gold.values(), *mapped_pred.values()}, key=repr)
    tp = {l: 0 for l in labels}
    fp = {l: 0 for l in labels}
    fn = {l: 0 for l in labels}
    for inst in gold:
        g, p = gold[inst], mapped_pred[inst]
        if g == p:
            tp[g] += 1
        else:
            fp[p] += 1
            fn[g] += 1
    tps, fps, fns = sum(tp.values()), sum(fp.values()), sum(fn.values())
    if tps == 0:
        return 0.0
    prec = tps / (tps + fps)
    rec = tps / (tps + fns)
    return 2 * prec * rec / (prec + rec)
