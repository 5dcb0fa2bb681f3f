"""Scale-free network generation and structural metrics.

Two growth models are supported: classical preferential attachment (BA),
which produces low clustering, and edge-duplication growth (DMS), which
produces the same degree exponent and mean degree but much higher
clustering. Both yield connected simple graphs with average degree close
to 4 at the default parameters.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

BA = "BA"
DMS = "DMS"

_MODELS = (BA, DMS)


class InvalidConfigError(ValueError):
    """Raised when a network configuration cannot produce a valid graph."""


@dataclass(frozen=True)
class NetworkConfig:
    """Parameters for one generated network.

    m0 and m only apply to the BA model; DMS always seeds from a triangle
    and adds two edges per node.
    """

    model: str
    n: int
    m0: int = 2
    m: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.model not in _MODELS:
            raise InvalidConfigError(f"unknown network model: {self.model!r}")
        if self.n < 3:
            raise InvalidConfigError(f"need at least 3 nodes, got n={self.n}")
        if self.model == BA:
            if self.m0 < 2:
                raise InvalidConfigError(f"BA initial core needs m0 >= 2, got {self.m0}")
            if not 1 <= self.m <= self.m0:
                raise InvalidConfigError(f"BA needs 1 <= m <= m0, got m={self.m}, m0={self.m0}")
            if self.n < self.m0 + 1:
                raise InvalidConfigError(f"BA needs n >= m0 + 1, got n={self.n}, m0={self.m0}")


@dataclass(frozen=True)
class Graph:
    """Immutable undirected simple connected graph.

    Neighbor ids are stored in CSR form (indptr/indices) with each node's
    neighbor list sorted ascending; edges holds the canonical (u < v) edge
    list. model/seed record provenance when the graph was generated here.
    """

    n: int
    edges: np.ndarray    # shape (E, 2), u < v, lexicographically sorted
    indptr: np.ndarray   # shape (n + 1,)
    indices: np.ndarray  # shape (2E,)
    degrees: np.ndarray  # shape (n,)
    model: str | None = None
    seed: int | None = None

    @classmethod
    def from_edges(cls, n, edges, model=None, seed=None) -> "Graph":
        """Build and structurally validate a graph from an undirected edge list."""
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if n < 2 or len(edges) == 0:
            raise InvalidConfigError("graph needs at least 2 nodes and 1 edge")
        if edges.min() < 0 or edges.max() >= n:
            raise InvalidConfigError("edge endpoint out of range")
        if np.any(edges[:, 0] == edges[:, 1]):
            raise InvalidConfigError("self-loops are not allowed")

        canon = np.sort(edges, axis=1)
        order = np.lexsort((canon[:, 1], canon[:, 0]))
        canon = canon[order]
        if len(canon) > 1 and np.any(np.all(canon[1:] == canon[:-1], axis=1)):
            raise InvalidConfigError("parallel edges are not allowed")

        both = np.concatenate([canon, canon[:, ::-1]])
        degrees = np.bincount(both[:, 0], minlength=n)
        if degrees.min() < 1:
            raise InvalidConfigError("isolated node: every node needs degree >= 1")

        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(degrees, out=indptr[1:])
        order = np.lexsort((both[:, 1], both[:, 0]))
        indices = both[order, 1]

        g = cls(n=n, edges=canon, indptr=indptr, indices=indices,
                degrees=degrees, model=model, seed=seed)
        if not g._is_connected():
            raise InvalidConfigError("graph is not connected")
        for arr in (g.edges, g.indptr, g.indices, g.degrees):
            arr.setflags(write=False)
        return g

    def neighbors(self, i: int) -> np.ndarray:
        """Sorted neighbor ids of node i."""
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def average_degree(self) -> float:
        return 2.0 * self.n_edges / self.n

    def _is_connected(self) -> bool:
        seen = np.zeros(self.n, dtype=bool)
        stack = [0]
        seen[0] = True
        while stack:
            u = stack.pop()
            for v in self.indices[self.indptr[u]:self.indptr[u + 1]]:
                if not seen[v]:
                    seen[v] = True
                    stack.append(int(v))
        return bool(seen.all())

    def diameter(self) -> int:
        """Longest shortest path, by BFS from every node."""
        best = 0
        dist = np.empty(self.n, dtype=np.int64)
        for src in range(self.n):
            dist.fill(-1)
            dist[src] = 0
            frontier = [src]
            while frontier:
                nxt = []
                for u in frontier:
                    for v in self.indices[self.indptr[u]:self.indptr[u + 1]]:
                        if dist[v] < 0:
                            dist[v] = dist[u] + 1
                            nxt.append(int(v))
                frontier = nxt
            best = max(best, int(dist.max()))
        return best


@dataclass(frozen=True)
class NodeMetrics:
    """Per-node degree percentile rank: fraction of other nodes with strictly lower degree."""

    percentile: np.ndarray


def generate_ba(config: NetworkConfig, rng: np.random.Generator) -> Graph:
    """Grow a BA graph: m0-node core joined by a single edge, then one node per
    step attached to m distinct targets sampled proportionally to degree."""
    if config.model != BA:
        raise InvalidConfigError(f"generate_ba needs model=BA, got {config.model}")
    n, m0, m = config.n, config.m0, config.m

    edges = [(i, i + 1) for i in range(m0 - 1)]  # minimal connected core
    # One entry per degree unit; sampling uniformly from it is degree-proportional.
    repeated = [u for e in edges for u in e]
    for new in range(m0, n):
        targets = set()
        while len(targets) < m:
            targets.add(repeated[rng.integers(len(repeated))])
        for t in sorted(targets):
            edges.append((t, new))
            repeated.append(t)
            repeated.append(new)
    return Graph.from_edges(n, edges, model=BA, seed=config.seed)


def generate_dms(config: NetworkConfig, rng: np.random.Generator) -> Graph:
    """Grow a DMS graph: triangle seed, then each new node attaches to both
    endpoints of a uniformly chosen existing edge."""
    if config.model != DMS:
        raise InvalidConfigError(f"generate_dms needs model=DMS, got {config.model}")
    n = config.n

    edges = [(0, 1), (0, 2), (1, 2)]
    for new in range(3, n):
        u, v = edges[rng.integers(len(edges))]
        edges.append((u, new))
        edges.append((v, new))
    return Graph.from_edges(n, edges, model=DMS, seed=config.seed)


def generate(config: NetworkConfig, rng: np.random.Generator | None = None) -> Graph:
    """Generate a graph for config, seeding a fresh RNG from config.seed by default."""
    if rng is None:
        rng = np.random.default_rng(config.seed)
    if config.model == BA:
        return generate_ba(config, rng)
    return generate_dms(config, rng)


def global_transitivity(g: Graph) -> float:
    """3 * triangles / connected triples; 0 for graphs with no connected triple."""
    degs = g.degrees.astype(np.int64)
    triples = int(np.sum(degs * (degs - 1) // 2))
    if triples == 0:
        return 0.0
    adj = [set(g.neighbors(i).tolist()) for i in range(g.n)]
    # Each triangle is counted once per edge.
    closed = sum(len(adj[u] & adj[v]) for u, v in g.edges)
    return closed / triples


def degree_percentiles(g: Graph) -> NodeMetrics:
    """Percentile rank of each node's degree among all other nodes."""
    sorted_degs = np.sort(g.degrees)
    lower = np.searchsorted(sorted_degs, g.degrees, side="left")
    q = lower / (g.n - 1)
    q.setflags(write=False)
    return NodeMetrics(percentile=q)


def fit_degree_exponent(degrees, k_min: int = 2) -> float:
    """Maximum-likelihood power-law exponent of a degree sequence.

    Discrete MLE approximation: alpha = 1 + n / sum(ln(k / (k_min - 1/2)))
    over degrees >= k_min.
    """
    k = np.asarray(degrees, dtype=np.float64)
    k = k[k >= k_min]
    if len(k) == 0:
        raise ValueError(f"no degrees >= k_min={k_min}")
    return 1.0 + len(k) / float(np.sum(np.log(k / (k_min - 0.5))))


def save_graph(g: Graph, path) -> None:
    """Write graph JSON: {model, n, seed, edges}."""
    payload = {
        "model": g.model,
        "n": g.n,
        "seed": g.seed,
        "edges": g.edges.tolist(),
    }
    with open(path, "w") as fh:
        json.dump(payload, fh)
        fh.write("\n")


def load_graph(path) -> Graph:
    """Read and validate a graph JSON file."""
    with open(path) as fh:
        payload = json.load(fh)
    return Graph.from_edges(payload["n"], payload["edges"],
                            model=payload.get("model"), seed=payload.get("seed"))
