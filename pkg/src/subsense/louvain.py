"""Greedy modularity maximization: local moves + graph aggregation.

Deterministic given a seed: node visit order comes from the seeded RNG,
move ties break by highest gain then lowest community id, aggregation
renumbers communities in ascending id order. After the aggregation
passes converge, one more local-move phase runs on the *original* graph
so the returned partition cannot be improved by any single-node move.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .graph import SubstituteGraph, UndefinedModularity


@dataclass
class Partition:
    """Node -> community id; ids are dense 0..num_communities-1."""

    mapping: dict[int, int]
    num_communities: int

    def communities(self) -> list[list[int]]:
        groups: list[list[int]] = [[] for _ in range(self.num_communities)]
        for node in sorted(self.mapping):
            groups[self.mapping[node]].append(node)
        return groups

    def __getitem__(self, node: int) -> int:
        return self.mapping[node]


def _local_move(
    adj: list[dict[int, int]],
    k: list[int],
    two_m: int,
    labels: list[int],
    rng: np.random.Generator,
    resolution: float,
    threshold_scaled: float,
    max_sweeps: int,
) -> bool:
    """Sweep nodes, greedily reassigning each to its best community.

    Gains are computed in units of modularity * m (monotone rescaling),
    against the baseline of the node sitting in a singleton community.
    Mutates ``labels``; returns whether any node changed community.
    """
    n = len(adj)
    comm_tot = [0.0] * n
    comm_size = [0] * n
    for u in range(n):
        comm_tot[labels[u]] += k[u]
        comm_size[labels[u]] += 1
    empties = [c for c in range(n) if comm_size[c] == 0]
    heapq.heapify(empties)

    order = [int(x) for x in rng.permutation(n)]
    inv_two_m = resolution / two_m
    moved_any = False
    for _ in range(max_sweeps):
        sweep_gain = 0.0
        sweep_moved = False
        for u in order:
            c_old = labels[u]
            comm_tot[c_old] -= k[u]
            comm_size[c_old] -= 1

            links: dict[int, int] = {}
            for v, w in adj[u].items():
                if v != u:
                    cv = labels[v]
                    links[cv] = links.get(cv, 0) + w

            if comm_size[c_old] == 0:
                alone_id = c_old
            else:
                alone_id = empties[0]

            best_c = alone_id
            best_gain = 0.0
            for c in sorted(links):
                gain = links[c] - comm_tot[c] * k[u] * inv_two_m
                if gain > best_gain or (gain == best_gain and c < best_c):
                    best_c = c
                    best_gain = gain
            old_gain = links.get(c_old, 0) - comm_tot[c_old] * k[u] * inv_two_m if comm_size[c_old] else 0.0

            if best_c != c_old:
                sweep_moved = True
                moved_any = True
                sweep_gain += best_gain - old_gain
                if best_c == alone_id and comm_size[best_c] == 0 and best_c != c_old:
                    if empties and empties[0] == best_c:
                        heapq.heappop(empties)
                if comm_size[c_old] == 0:
                    heapq.heappush(empties, c_old)
            labels[u] = best_c
            comm_tot[best_c] += k[u]
            comm_size[best_c] += 1
        if not sweep_moved or sweep_gain < threshold_scaled:
            break
    return moved_any


def _aggregate(
    adj: list[dict[int, int]], labels: list[int]
) -> tuple[list[dict[int, int]], list[int], dict[int, int]]:
    """Collapse communities to nodes; intra-community weight becomes the
    diagonal entry (ordered-pair convention), preserving degrees and 2m."""
    dense = {c: i for i, c in enumerate(sorted(set(labels)))}
    n_new = len(dense)
    adj_new: list[dict[int, int]] = [{} for _ in range(n_new)]
    for u, nbrs in enumerate(adj):
        cu = dense[labels[u]]
        row = adj_new[cu]
        for v, w in nbrs.items():
            cv = dense[labels[v]]
            row[cv] = row.get(cv, 0) + w
    k_new = [sum(row.values()) for row in adj_new]
    return adj_new, k_new, dense


def louvain(
    graph: SubstituteGraph,
    seed: int = 0,
    resolution: float = 1.0,
    gain_threshold: float = 1e-7,
    max_passes: int = 50,
) -> Partition:
    """Community detection on a substitute graph.

    Raises UndefinedModularity when the graph has no edges (isolated
    nodes carry no co-occurrence signal to cluster on).
    """
    nodes = graph.nodes
    if not nodes:
        raise ValueError("empty graph")
    if graph.total_weight == 0:
        raise UndefinedModularity("graph has no edges")
    node_ix = {u: i for i, u in enumerate(nodes)}
    n = len(nodes)
    adj0: list[dict[int, int]] = [
        {node_ix[v]: w for v, w in graph.adj[u].items()} for u in nodes
    ]
    k0 = [sum(row.values()) for row in adj0]
    two_m = sum(k0)
    threshold_scaled = gain_threshold * (two_m / 2)
    max_sweeps = max(2 * n + 10, 100)

    rng = np.random.default_rng(seed)
    proj = list(range(n))  # original node -> current-level node
    adj, k = adj0, k0
    for _ in range(max_passes):
        labels = list(range(len(adj)))
        moved = _local_move(adj, k, two_m, labels, rng, resolution, threshold_scaled, max_sweeps)
        if not moved:
            break
        adj, k, dense = _aggregate(adj, labels)
        proj = [dense[labels[p]] for p in proj]
        if len(adj) == len(labels):
            break

    # Refinement at the original level: guarantees single-node-move optimality.
    dense0 = {c: i for i, c in enumerate(sorted(set(proj)))}
    labels0 = [dense0[c] for c in proj]
    _local_move(adj0, k0, two_m, labels0, rng, resolution, threshold_scaled, max_sweeps)

    seen: dict[int, int] = {}
    mapping: dict[int, int] = {}
    for i, u in enumerate(nodes):
        c = labels0[i]
        if c not in seen:
            seen[c] = len(seen)
        mapping[u] = seen[c]
    return Partition(mapping, len(seen))
