"""Bipartite entity graph over the index: components, exact diameter, and
SimRank-based same-type similarity.

Nodes are entity classes that appear in at least one relation key; edges are
distinct keys, so every edge connects a chemical to a protein. SimRank is
the usual fixed point
    s(a, b) = C / (|N(a)| |N(b)|) * sum over (u, v) in N(a) x N(b) of s(u, v)
with s(a, a) = 1, iterated from the identity until the largest elementwise
change drops below the tolerance or the iteration cap is hit. Scores are
computed per connected component (cross-component similarity is identically
zero), which keeps the quadratic score tables small.
"""

from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .corpus import EType
from .errors import BipartitenessError, UnknownClassError
from .index import InvertedIndex


@dataclass
class BipartiteGraph:
    etypes: dict[int, EType]
    canonical: dict[int, str]
    adj: dict[int, tuple[int, ...]]

    @property
    def nodes(self) -> list[int]:
        return sorted(self.adj)

    @property
    def n_edges(self) -> int:
        return sum(len(nbrs) for nbrs in self.adj.values()) // 2

    def __contains__(self, class_id: int) -> bool:
        return class_id in self.adj

    def degree(self, class_id: int) -> int:
        return len(self.adj.get(class_id, ()))


@dataclass(frozen=True)
class GraphStats:
    n_nodes: int
    n_chemical: int
    n_protein: int
    n_edges: int
    n_components: int
    largest_component_nodes: int
    largest_component_edges: int
    largest_component_diameter: int


@dataclass(frozen=True)
class SimRankParams:
    c: float = 0.8
    max_iterations: int = 20
    tolerance: float = 1e-4

    def __post_init__(self) -> None:
        if not 0.0 < self.c < 1.0:
            raise ValueError(f"decay must be in (0,1), got {self.c}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.tolerance <= 0.0:
            raise ValueError("tolerance must be > 0")


@dataclass
class SimRankScores:
    """Symmetric pairwise scores; absent pairs (and cross-component pairs)
    score 0, the diagonal scores 1."""

    graph: BipartiteGraph
    pair_scores: dict[tuple[int, int], float]
    iterations: int
    converged: bool

    def get(self, a: int, b: int) -> float:
        if a not in self.graph.adj or b not in self.graph.adj:
            raise UnknownClassError(a if a not in self.graph.adj else b)
        if a == b:
            return 1.0
        return self.pair_scores.get((min(a, b), max(a, b)), 0.0)


def build_bipartite(index: InvertedIndex) -> BipartiteGraph:
    """One node per class with at least one relation, one edge per key."""
    etypes: dict[int, EType] = {}
    canonical: dict[int, str] = {}
    adj: dict[int, set[int]] = {}
    for key in index.postings:
        chem = index.class_of(key.chem_class_id)
        prot = index.class_of(key.prot_class_id)
        if chem.etype == prot.etype:
            raise BipartitenessError(
                f"key ({key.chem_class_id}, {key.prot_class_id}) joins two "
                f"{chem.etype.value} classes")
        for cls in (chem, prot):
            etypes[cls.class_id] = cls.etype
            canonical[cls.class_id] = cls.canonical
            adj.setdefault(cls.class_id, set())
        adj[key.chem_class_id].add(key.prot_class_id)
        adj[key.prot_class_id].add(key.chem_class_id)
    return BipartiteGraph(
        etypes=etypes, canonical=canonical,
        adj={node: tuple(sorted(nbrs)) for node, nbrs in adj.items()},
    )


def connected_components(graph: BipartiteGraph) -> list[list[int]]:
    """Components as sorted node lists, discovered in ascending node order."""
    seen: set[int] = set()
    components: list[list[int]] = []
    for start in graph.nodes:
        if start in seen:
            continue
        queue = deque([start])
        seen.add(start)
        comp = []
        while queue:
            node = queue.popleft()
            comp.append(node)
            for nbr in graph.adj[node]:
                if nbr not in seen:
                    seen.add(nbr)
                    queue.append(nbr)
        components.append(sorted(comp))
    return components


def _bfs_eccentricity(graph: BipartiteGraph, start: int) -> int:
    dist = {start: 0}
    queue = deque([start])
    ecc = 0
    while queue:
        node = queue.popleft()
        for nbr in graph.adj[node]:
            if nbr not in dist:
                dist[nbr] = dist[node] + 1
                ecc = max(ecc, dist[nbr])
                queue.append(nbr)
    return ecc


def graph_stats(graph: BipartiteGraph) -> GraphStats:
    """Node/edge/component counts plus the exact diameter of the largest
    component (breadth-first search from every node in it; O(V*E) there)."""
    components = connected_components(graph)
    n_nodes = len(graph.adj)
    n_chem = sum(1 for t in graph.etypes.values() if t is EType.CHEMICAL)
    if not components:
        return GraphStats(0, 0, 0, 0, 0, 0, 0, 0)
    largest = max(components, key=lambda comp: (len(comp), -comp[0]))
    largest_edges = sum(graph.degree(node) for node in largest) // 2
    diameter = max(_bfs_eccentricity(graph, node) for node in largest)
    return GraphStats(
        n_nodes=n_nodes, n_chemical=n_chem, n_protein=n_nodes - n_chem,
        n_edges=graph.n_edges, n_components=len(components),
        largest_component_nodes=len(largest),
        largest_component_edges=largest_edges,
        largest_component_diameter=diameter,
    )


# ---------------------------------------------------------------------------
# SimRank
# ---------------------------------------------------------------------------

def _simrank_component(graph: BipartiteGraph, nodes: Sequence[int],
                       params: SimRankParams) -> tuple[np.ndarray, int, bool]:
    n = len(nodes)
    if n == 1:
        return np.ones((1, 1)), 0, True
    slot = {node: i for i, node in enumerate(nodes)}
    adjacency = np.zeros((n, n))
    for node in nodes:
        for nbr in graph.adj[node]:
            adjacency[slot[node], slot[nbr]] = 1.0
    degree = adjacency.sum(axis=1)
    denom = np.outer(degree, degree)
    denom[denom == 0.0] = 1.0  # isolated nodes keep score 0 off-diagonal
    zero_degree = degree == 0.0

    scores = np.eye(n)
    iterations = 0
    converged = False
    for iterations in range(1, params.max_iterations + 1):
        updated = params.c * (adjacency @ scores @ adjacency.T) / denom
        updated[zero_degree, :] = 0.0
        updated[:, zero_degree] = 0.0
        np.fill_diagonal(updated, 1.0)
        delta = float(np.max(np.abs(updated - scores)))
        scores = updated
        if delta < params.tolerance:
            converged = True
            break
    return scores, iterations, converged


def simrank(graph: BipartiteGraph,
            params: SimRankParams | None = None) -> SimRankScores:
    """Fixed-point SimRank for the whole graph, component by component."""
    params = params or SimRankParams()
    pair_scores: dict[tuple[int, int], float] = {}
    iterations = 0
    converged = True
    for comp in connected_components(graph):
        matrix, iters, conv = _simrank_component(graph, comp, params)
        iterations = max(iterations, iters)
        converged = converged and conv
        _collect_pairs(pair_scores, comp, matrix)
    return SimRankScores(graph=graph, pair_scores=pair_scores,
                         iterations=iterations, converged=converged)


def _collect_pairs(pair_scores: dict[tuple[int, int], float],
                   nodes: Sequence[int], matrix: np.ndarray) -> None:
    for i, a in enumerate(nodes):
        for j in range(i + 1, len(nodes)):
            value = float(matrix[i, j])
            if value > 0.0:
                pair_scores[(a, nodes[j])] = value


def top_similar(scores: SimRankScores, class_id: int,
                k: int = 5) -> list[tuple[int, float]]:
    """The k same-type entities most similar to ``class_id``.

    Zero-score and cross-type candidates are excluded, as is the query node
    itself; ties break on canonical surface.
    """
    graph = scores.graph
    if class_id not in graph.adj:
        raise UnknownClassError(class_id)
    etype = graph.etypes[class_id]
    candidates = [
        (other, scores.get(class_id, other))
        for other in graph.adj
        if other != class_id and graph.etypes[other] is etype
    ]
    candidates = [(other, s) for other, s in candidates if s > 0.0]
    candidates.sort(key=lambda pair: (-pair[1], graph.canonical[pair[0]]))
    return candidates[:k]


class SimRankCache:
    """Per-component lazy SimRank with memoization.

    The graph is immutable, so results never need invalidation; a lock keeps
    the single-writer discipline when the service fans requests out across
    threads.
    """

    def __init__(self, graph: BipartiteGraph, params: SimRankParams | None = None):
        self.graph = graph
        self.params = params or SimRankParams()
        self._component_of: dict[int, int] = {}
        self._components: list[list[int]] = connected_components(graph)
        for idx, comp in enumerate(self._components):
            for node in comp:
                self._component_of[node] = idx
        self._results: dict[int, SimRankScores] = {}
        self._lock = threading.Lock()

    def scores_for(self, class_id: int) -> SimRankScores:
        if class_id not in self.graph.adj:
            raise UnknownClassError(class_id)
        idx = self._component_of[class_id]
        with self._lock:
            result = self._results.get(idx)
            if result is None:
                comp = self._components[idx]
                matrix, iters, conv = _simrank_component(self.graph, comp, self.params)
                pair_scores: dict[tuple[int, int], float] = {}
                _collect_pairs(pair_scores, comp, matrix)
                result = SimRankScores(graph=self.graph, pair_scores=pair_scores,
                                       iterations=iters, converged=conv)
                self._results[idx] = result
        return result

    def warm(self) -> None:
        for comp in self._components:
            if comp:
                self.scores_for(comp[0])
