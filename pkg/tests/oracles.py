"""Independent brute-force implementations used as test oracles.

Everything here is deliberately written from the documented contracts with
naive algorithms (per-key loops, dense iteration, Floyd-Warshall) and never
imports the corresponding engine code paths.
"""

import re
import unicodedata

from relsearch.corpus import EType
from relsearch.graph import BipartiteGraph


# --- trigram / generalized Jaccard ----------------------------------------

def oracle_trigrams(s: str) -> dict[str, int]:
    norm = unicodedata.normalize("NFC", s.casefold())
    norm = re.sub(r"\s+", " ", norm).strip()
    if not norm:
        return {}
    if len(norm) < 3:
        return {norm: 1}
    grams: dict[str, int] = {}
    for i in range(len(norm) - 2):
        gram = norm[i:i + 3]
        grams[gram] = grams.get(gram, 0) + 1
    return grams


def oracle_jaccard(a: str, b: str) -> float:
    qa, qb = oracle_trigrams(a), oracle_trigrams(b)
    keys = set(qa) | set(qb)
    numerator = sum(min(qa.get(k, 0), qb.get(k, 0)) for k in keys)
    denominator = sum(max(qa.get(k, 0), qb.get(k, 0)) for k in keys)
    return numerator / denominator if denominator else 0.0


# --- graphs ----------------------------------------------------------------

def make_bipartite(n_chem: int, n_prot: int,
                   edges: list[tuple[int, int]]) -> BipartiteGraph:
    """Graph with chemical nodes 0..n_chem-1 and protein nodes
    n_chem..n_chem+n_prot-1; edges are (chem, prot) index pairs."""
    etypes = {i: EType.CHEMICAL for i in range(n_chem)}
    etypes.update({n_chem + j: EType.PROTEIN for j in range(n_prot)})
    adj: dict[int, set[int]] = {}
    for chem, prot in edges:
        a, b = chem, n_chem + prot
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    return BipartiteGraph(
        etypes={n: etypes[n] for n in adj},
        canonical={n: f"n{n:04d}" for n in adj},
        adj={n: tuple(sorted(nbrs)) for n, nbrs in adj.items()},
    )


def random_bipartite(rng, max_chem: int = 6, max_prot: int = 6,
                     edge_prob: float = 0.35) -> BipartiteGraph:
    n_chem = rng.randint(1, max_chem)
    n_prot = rng.randint(1, max_prot)
    edges = [(i, j) for i in range(n_chem) for j in range(n_prot)
             if rng.random() < edge_prob]
    if not edges:
        edges = [(rng.randrange(n_chem), rng.randrange(n_prot))]
    return make_bipartite(n_chem, n_prot, edges)


def oracle_simrank(graph: BipartiteGraph, c: float,
                   iterations: int) -> dict[tuple[int, int], float]:
    """Dense whole-graph fixed-point iteration with per-pair loops."""
    nodes = sorted(graph.adj)
    scores = {(a, b): (1.0 if a == b else 0.0) for a in nodes for b in nodes}
    for _ in range(iterations):
        updated = {}
        for a in nodes:
            for b in nodes:
                if a == b:
                    updated[(a, b)] = 1.0
                    continue
                na, nb = graph.adj[a], graph.adj[b]
                if not na or not nb:
                    updated[(a, b)] = 0.0
                    continue
                total = 0.0
                for u in na:
                    for v in nb:
                        total += scores[(u, v)]
                updated[(a, b)] = c * total / (len(na) * len(nb))
        scores = updated
    return scores


def oracle_components(graph: BipartiteGraph) -> int:
    """Component count via union-find over the edge list."""
    parent = {n: n for n in graph.adj}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for node, nbrs in graph.adj.items():
        for nbr in nbrs:
            ra, rb = find(node), find(nbr)
            if ra != rb:
                parent[ra] = rb
    return len({find(n) for n in graph.adj})


def oracle_diameter(graph: BipartiteGraph, nodes: list[int]) -> int:
    """Exact diameter of the induced subgraph via Floyd-Warshall."""
    if len(nodes) <= 1:
        return 0
    idx = {n: i for i, n in enumerate(nodes)}
    inf = float("inf")
    n = len(nodes)
    dist = [[0 if i == j else inf for j in range(n)] for i in range(n)]
    for node in nodes:
        for nbr in graph.adj[node]:
            if nbr in idx:
                dist[idx[node]][idx[nbr]] = 1
    for k in range(n):
        dk = dist[k]
        for i in range(n):
            dik = dist[i][k]
            if dik == inf:
                continue
            di = dist[i]
            for j in range(n):
                alt = dik + dk[j]
                if alt < di[j]:
                    di[j] = alt
    return max(max(row) for row in dist)
