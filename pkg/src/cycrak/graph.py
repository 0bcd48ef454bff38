"""Immutable undirected simple graphs, edge-list I/O and set-level metrics."""

from __future__ import annotations

import logging
import re
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import DisconnectedError, DomainError, EmptyGraphError, ParseError

log = logging.getLogger(__name__)

_SPLIT = re.compile(r"[,\s]+")


class Graph:
    """Undirected simple graph over contiguous node ids ``0..n-1``.

    Parameters
    ----------
    n : int
        Number of nodes.
    edges : iterable of (int, int)
        Edge endpoints as internal ids. Self-loops and repeated edges are
        dropped silently; use :func:`parse_edge_list` when the counts matter.
    labels : sequence of str, optional
        External label of each node. Defaults to ``str(i)``.
    """

    __slots__ = ("_n", "_m", "_adj", "_adjset", "_labels", "_index", "_csr", "_degrees")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = (), labels: Sequence[str] | None = None):
        if n < 0:
            raise DomainError("node count must be non-negative")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise DomainError(f"edge ({u}, {v}) references a node outside 0..{n - 1}")
            if u == v:
                continue
            nbrs[u].add(v)
            nbrs[v].add(u)
        self._n = n
        self._adj = tuple(tuple(sorted(s)) for s in nbrs)
        self._adjset = tuple(frozenset(s) for s in nbrs)
        self._m = sum(len(a) for a in self._adj) // 2
        if labels is None:
            labels = [str(i) for i in range(n)]
        if len(labels) != n:
            raise DomainError("one label per node is required")
        self._labels = tuple(str(x) for x in labels)
        self._index = {lab: i for i, lab in enumerate(self._labels)}
        if len(self._index) != n:
            raise DomainError("labels must be unique")
        self._csr = None
        self._degrees = None

    # -- basic structure -------------------------------------------------
    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return self._m

    @property
    def labels(self) -> tuple[str, ...]:
        return self._labels

    def __len__(self) -> int:
        return self._n

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={self._m})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._adj == other._adj and self._labels == other._labels

    def __hash__(self) -> int:
        return hash((self._adj, self._labels))

    def neighbors(self, i: int) -> tuple[int, ...]:
        return self._adj[i]

    def neighbor_set(self, i: int) -> frozenset[int]:
        return self._adjset[i]

    def degree(self, i: int) -> int:
        return len(self._adj[i])

    @property
    def degrees(self) -> np.ndarray:
        if self._degrees is None:
            deg = np.fromiter((len(a) for a in self._adj), dtype=np.int64, count=self._n)
            deg.setflags(write=False)
            self._degrees = deg
        return self._degrees

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adjset[u]

    def edges(self):
        """Yield every edge once as ``(u, v)`` with ``u < v``, in id order."""
        for u, nb in enumerate(self._adj):
            for v in nb:
                if u < v:
                    yield u, v

    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(indptr, indices)`` of the symmetric adjacency structure."""
        if self._csr is None:
            indptr = np.zeros(self._n + 1, dtype=np.int64)
            np.cumsum(self.degrees, out=indptr[1:])
            indices = np.fromiter(
                (v for nb in self._adj for v in nb), dtype=np.int64, count=int(indptr[-1])
            )
            indptr.setflags(write=False)
            indices.setflags(write=False)
            self._csr = (indptr, indices)
        return self._csr

    def adjacency_matrix(self):
        """Sparse CSR adjacency matrix (float64)."""
        from scipy import sparse

        indptr, indices = self.csr()
        data = np.ones(len(indices), dtype=np.float64)
        return sparse.csr_matrix((data, indices, indptr), shape=(self._n, self._n))

    def label(self, i: int) -> str:
        return self._labels[i]

    def index(self, label) -> int:
        try:
            return self._index[str(label)]
        except KeyError:
            raise DomainError(f"unknown node label {label!r}") from None

    def check_node(self, i: int) -> None:
        if not isinstance(i, (int, np.integer)) or not 0 <= i < self._n:
            raise DomainError(f"node {i!r} is not in the graph")

    def subgraph(self, nodes: Iterable[int]) -> "Graph":
        """Induced subgraph, relabeled contiguously in ascending id order."""
        keep = sorted(set(nodes))
        new_id = {v: i for i, v in enumerate(keep)}
        edges = [
            (new_id[u], new_id[v])
            for u in keep
            for v in self._adj[u]
            if u < v and v in new_id
        ]
        return Graph(len(keep), edges, [self._labels[v] for v in keep])


@dataclass(frozen=True)
class LoadStats:
    lines: int
    edges_read: int
    self_loops: int
    duplicates: int


def parse_edge_list(text: str) -> tuple[Graph, LoadStats]:
    """Parse edge-list text into a graph plus load diagnostics.

    Each non-blank line not starting with ``#`` must hold exactly two labels
    separated by whitespace and/or a comma. Node ids follow first-seen order.
    """
    index: dict[str, int] = {}
    labels: list[str] = []
    seen: set[tuple[int, int]] = set()
    edges: list[tuple[int, int]] = []
    loops = dups = read = nlines = 0

    def node(tok: str) -> int:
        if tok not in index:
            index[tok] = len(labels)
            labels.append(tok)
        return index[tok]

    for lineno, raw in enumerate(text.splitlines(), start=1):
        nlines += 1
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = [t for t in _SPLIT.split(line) if t]
        if len(toks) != 2:
            raise ParseError(f"expected two node labels, got {len(toks)}: {raw!r}", lineno)
        read += 1
        u, v = node(toks[0]), node(toks[1])
        if u == v:
            loops += 1
            continue
        key = (u, v) if u < v else (v, u)
        if key in seen:
            dups += 1
            continue
        seen.add(key)
        edges.append(key)

    if not edges:
        raise EmptyGraphError("edge list contains no usable edges")
    return Graph(len(labels), edges, labels), LoadStats(nlines, read, loops, dups)


def load_edge_list(text: str) -> Graph:
    g, stats = parse_edge_list(text)
    if stats.self_loops or stats.duplicates:
        log.warning(
            "dropped %d self-loop(s) and %d duplicate edge(s)", stats.self_loops, stats.duplicates
        )
    return g


def read_edge_list(path) -> tuple[Graph, LoadStats]:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def format_edge_list(g: Graph) -> str:
    """Serialize ``g`` in the edge-list format using external labels."""
    lab = g.labels
    return "".join(f"{lab[u]} {lab[v]}\n" for u, v in g.edges())


def connected_components(g: Graph) -> list[list[int]]:
    """Components as sorted id lists, ordered by their smallest id."""
    comp = np.full(g.n, -1, dtype=np.int64)
    out = []
    for start in range(g.n):
        if comp[start] >= 0:
            continue
        cid = len(out)
        comp[start] = cid
        members = [start]
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in g.neighbors(u):
                if comp[v] < 0:
                    comp[v] = cid
                    members.append(v)
                    queue.append(v)
        out.append(sorted(members))
    return out


def is_connected(g: Graph) -> bool:
    return g.n > 0 and len(connected_components(g)[0]) == g.n


def largest_connected_component(g: Graph) -> Graph:
    """Induced subgraph on the largest component.

    Ties go to the component holding the smallest original id. Surviving
    nodes keep their relative order and their labels.
    """
    if g.n == 0:
        raise EmptyGraphError("graph has no nodes")
    comps = connected_components(g)
    best = max(comps, key=len)  # max() keeps the first maximum: smallest-id component
    if len(best) == g.n:
        return g
    return g.subgraph(best)


def bfs_distances(g: Graph, source: int) -> np.ndarray:
    """Unweighted distances from ``source``; ``-1`` marks unreachable nodes."""
    dist = np.full(g.n, -1, dtype=np.int64)
    dist[source] = 0
    frontier = [source]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for u in frontier:
            for v in g.neighbors(u):
                if dist[v] < 0:
                    dist[v] = d
                    nxt.append(v)
        frontier = nxt
    return dist


def shortest_path_lengths(g: Graph, source: int) -> dict[int, int]:
    g.check_node(source)
    dist = bfs_distances(g, source)
    return {int(v): int(d) for v, d in enumerate(dist) if d >= 0}


def degree_moments(g: Graph) -> tuple[float, float]:
    """Return ``(<k>, <k^2>)``."""
    if g.n < 1:
        raise EmptyGraphError("graph has no nodes")
    deg = g.degrees
    return int(deg.sum()) / g.n, int((deg * deg).sum()) / g.n


def _check_set(g: Graph, s) -> list[int]:
    members = list(dict.fromkeys(int(v) for v in s))
    for v in members:
        g.check_node(v)
    if len(members) < 2:
        raise DomainError("pairwise averages need at least two nodes")
    return members


def average_pairwise_distance(g: Graph, s: Iterable[int]) -> float:
    """Mean shortest-path length over unordered pairs of ``s``."""
    members = _check_set(g, s)
    total = 0
    for a, i in enumerate(members[:-1]):
        dist = bfs_distances(g, i)
        for j in members[a + 1:]:
            if dist[j] < 0:
                raise DisconnectedError(f"nodes {i} and {j} are disconnected")
            total += int(dist[j])
    npairs = len(members) * (len(members) - 1) // 2
    return total / npairs


def jaccard_similarity(g: Graph, i: int, j: int) -> float:
    g.check_node(i)
    g.check_node(j)
    if i == j:
        raise DomainError("similarity needs two distinct nodes")
    a, b = g.neighbor_set(i), g.neighbor_set(j)
    union = len(a | b)
    if union == 0:
        return 0.0
    return len(a & b) / union


def average_pairwise_similarity(g: Graph, s: Iterable[int]) -> float:
    members = _check_set(g, s)
    pairs = list(combinations(members, 2))
    return sum(jaccard_similarity(g, i, j) for i, j in pairs) / len(pairs)
