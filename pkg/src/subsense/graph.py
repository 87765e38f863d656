"""Weighted substitute co-occurrence graph and its modularity score.

Nodes are substitute lemma ids; an edge connects two lemmas each time
they appear together in one occurrence's substitute set, so the weight
counts co-predicting instances. Edge weights, degrees and the total
weight stay integers, which keeps modularity arithmetic exact in the
degenerate cases (single community, disjoint components).
"""

from __future__ import annotations

from typing import Iterable, Mapping


class UndefinedModularity(ValueError):
    """Modularity is undefined on a graph with zero total edge weight."""


class SubstituteGraph:
    """Undirected integer-weighted graph without self-loops."""

    def __init__(self) -> None:
        self.adj: dict[int, dict[int, int]] = {}
        self._m: int | None = None

    def add_node(self, u: int) -> None:
        self.adj.setdefault(u, {})

    def add_edge(self, u: int, v: int, weight: int = 1) -> None:
        if u == v:
            raise ValueError("self-loops are not allowed (substitute sets are duplicate-free)")
        self.adj.setdefault(u, {})[v] = self.adj.get(u, {}).get(v, 0) + weight
        self.adj.setdefault(v, {})[u] = self.adj[u][v]
        self._m = None

    @property
    def nodes(self) -> list[int]:
        return sorted(self.adj)

    def __len__(self) -> int:
        return len(self.adj)

    def neighbors(self, u: int) -> dict[int, int]:
        return self.adj[u]

    def weight(self, u: int, v: int) -> int:
        return self.adj.get(u, {}).get(v, 0)

    def degree(self, u: int) -> int:
        """Weighted degree: sum of incident edge weights."""
        return sum(self.adj[u].values())

    @property
    def total_weight(self) -> int:
        """Sum of all edge weights, each undirected edge counted once."""
        if self._m is None:
            self._m = sum(sum(nbrs.values()) for nbrs in self.adj.values()) // 2
        return self._m

    @property
    def num_edges(self) -> int:
        return sum(len(nbrs) for nbrs in self.adj.values()) // 2


def build_graph(substitute_sets: Iterable[Iterable[int]]) -> SubstituteGraph:
    """Accumulate the co-occurrence graph over per-instance substitute sets.

    Every unordered pair inside one set contributes weight 1; nodes of
    singleton sets are kept (isolated).
    """
    graph = SubstituteGraph()
    for subs in substitute_sets:
        members = list(subs)
        for u in members:
            graph.add_node(u)
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                graph.add_edge(members[i], members[j])
    return graph


def _as_mapping(partition) -> Mapping[int, int]:
    return getattr(partition, "mapping", partition)


def modularity(graph: SubstituteGraph, partition, resolution: float = 1.0) -> float:
    """Density of intra-community edges against the degree null model.

    Computed from exact integer community sums:
    sum_c [ in_c/(2m) - resolution * (tot_c/(2m))^2 ], where in_c counts
    ordered intra-community endpoint pairs and tot_c sums member degrees.
    """
    labels = _as_mapping(partition)
    two_m = 2 * graph.total_weight
    if two_m == 0:
        raise UndefinedModularity("graph has no edges")
    for u in graph.adj:
        if u not in labels:
            raise ValueError(f"partition does not cover node {u}")

    sigma_in: dict[int, int] = {}
    sigma_tot: dict[int, int] = {}
    for u, nbrs in graph.adj.items():
        cu = labels[u]
        deg = 0
        intra = 0
        for v, w in nbrs.items():
            deg += w
            if labels[v] == cu:
                intra += w
        sigma_in[cu] = sigma_in.get(cu, 0) + intra
        sigma_tot[cu] = sigma_tot.get(cu, 0) + deg

    q = 0.0
    for c in sigma_in:
        q += sigma_in[c] / two_m - resolution * (sigma_tot[c] / two_m) ** 2
    return q
