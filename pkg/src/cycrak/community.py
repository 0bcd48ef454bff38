"""Modularity and seeded Louvain community detection."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, EmptyGraphError
from .graph import Graph

GAIN_THRESHOLD = 1e-9


@dataclass(frozen=True)
class Partition:
    """Hard partition with contiguous community ids and its modularity."""

    assignment: tuple[int, ...]
    q: float
    seed: int | None = None

    @property
    def n_communities(self) -> int:
        return max(self.assignment) + 1 if self.assignment else 0

    def __getitem__(self, node: int) -> int:
        return self.assignment[node]

    def communities(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n_communities)]
        for v, c in enumerate(self.assignment):
            out[c].append(v)
        return out


def _canonical(assignment: Sequence[int]) -> tuple[int, ...]:
    # ids renumbered by first appearance in node order
    remap: dict[int, int] = {}
    return tuple(remap.setdefault(c, len(remap)) for c in assignment)


def modularity(g: Graph, assignment) -> float:
    """Newman-Girvan modularity of a hard partition (resolution 1).

    ``assignment`` is a :class:`Partition` or a per-node sequence of
    community ids.
    """
    if isinstance(assignment, Partition):
        assignment = assignment.assignment
    if len(assignment) != g.n or any(c is None for c in assignment):
        raise DomainError("partition must assign every node of the graph")
    if g.m == 0:
        raise DomainError("modularity is undefined on a graph without edges")
    comm = np.asarray(assignment, dtype=np.int64)
    if comm.min() < 0:
        raise DomainError("community ids must be non-negative")
    ncom = int(comm.max()) + 1
    internal = np.zeros(ncom)
    for u, v in g.edges():
        if comm[u] == comm[v]:
            internal[comm[u]] += 1
    deg_tot = np.bincount(comm, weights=g.degrees.astype(float), minlength=ncom)
    m = float(g.m)
    return float(np.sum(internal / m - (deg_tot / (2 * m)) ** 2))


def make_partition(g: Graph, assignment: Sequence[int], seed: int | None = None) -> Partition:
    canon = _canonical(assignment)
    return Partition(canon, modularity(g, canon), seed)


class _LevelGraph:
    """Weighted graph used inside Louvain; internal weight stored as self-loops."""

    def __init__(self, n, weights, self_w):
        self.n = n
        self.w = weights  # list[dict[int, float]] without self entries
        self.self_w = self_w
        self.k = [sum(weights[i].values()) + 2 * self_w[i] for i in range(n)]

    @classmethod
    def from_graph(cls, g: Graph):
        weights = [{v: 1.0 for v in g.neighbors(u)} for u in range(g.n)]
        return cls(g.n, weights, [0.0] * g.n)

    def aggregate(self, comm: list[int]):
        ncom = max(comm) + 1
        weights = [defaultdict(float) for _ in range(ncom)]
        self_w = [0.0] * ncom
        for i in range(self.n):
            ci = comm[i]
            self_w[ci] += self.self_w[i]
            for j, wij in self.w[i].items():
                cj = comm[j]
                if ci == cj:
                    if i < j:
                        self_w[ci] += wij
                else:
                    weights[ci][cj] += wij
        return _LevelGraph(ncom, [dict(d) for d in weights], self_w)


def _move_nodes(lg: _LevelGraph, comm: list[int], order, m: float) -> bool:
    """Greedy single-node moves until a full sweep makes none. Returns moved?"""
    tot = defaultdict(float)
    for i in range(lg.n):
        tot[comm[i]] += lg.k[i]
    two_m2 = 2.0 * m * m
    any_move = False
    while True:
        moved = False
        for i in order:
            ci = comm[i]
            ki = lg.k[i]
            links = defaultdict(float)
            for j, wij in lg.w[i].items():
                links[comm[j]] += wij
            tot[ci] -= ki
            stay = links.get(ci, 0.0) / m - tot[ci] * ki / two_m2
            best, best_gain = ci, stay
            for c in sorted(links):
                if c == ci:
                    continue
                gain = links[c] / m - tot[c] * ki / two_m2
                if gain - best_gain > GAIN_THRESHOLD:
                    best, best_gain = c, gain
            tot[best] += ki
            if best != ci:
                comm[i] = best
                moved = any_move = True
        if not moved:
            return any_move


def _renumber(comm: list[int]) -> list[int]:
    return list(_canonical(comm))


def louvain(g: Graph, seed: int = 0, init: Sequence[int] | None = None) -> Partition:
    """Seeded Louvain modularity optimisation.

    The node sweep order of each level is a permutation drawn once from
    ``seed``. The hierarchy is re-run from its own output until a pass
    moves no node at any level, so the result is a local optimum with
    respect to single-node moves on ``g`` itself.

    Parameters
    ----------
    g : Graph
        Input graph; must have at least one node.
    seed : int
        Seed for the sweep orders.
    init : sequence of int, optional
        Starting assignment for the first pass (singletons by default).
    """
    if g.n == 0:
        raise EmptyGraphError("graph has no nodes")
    if g.m == 0:
        return Partition(tuple(range(g.n)), 0.0, seed)
    rng = np.random.default_rng(seed)
    m = float(g.m)
    base = _LevelGraph.from_graph(g)
    node_comm = list(range(g.n)) if init is None else _renumber(list(init))

    while True:
        changed = False
        lg = base
        comm = list(node_comm)
        mapping = list(range(g.n))  # original node -> current level node
        level = 0
        while True:
            order = rng.permutation(lg.n).tolist()
            if level > 0:
                comm = list(range(lg.n))
            moved = _move_nodes(lg, comm, order, m)
            changed = changed or moved
            comm = _renumber(comm)
            mapping = [comm[x] for x in mapping]
            if level > 0 and not moved:
                break
            lg = lg.aggregate(comm)
            level += 1
            if lg.n == 1:
                break
        node_comm = mapping
        if not changed:
            break

    return make_partition(g, node_comm, seed)


def best_single_move_gain(g: Graph, p: Partition) -> float:
    """Largest modularity gain obtainable by moving one node (<= 0 at a local optimum)."""
    m = float(g.m)
    deg = g.degrees
    comm = p.assignment
    tot = defaultdict(float)
    for v in range(g.n):
        tot[comm[v]] += deg[v]
    best = -np.inf
    for i in range(g.n):
        ci, ki = comm[i], float(deg[i])
        links = defaultdict(float)
        for j in g.neighbors(i):
            links[comm[j]] += 1.0
        rest = tot[ci] - ki
        stay = links.get(ci, 0.0) / m - rest * ki / (2 * m * m)
        for c, l in links.items():
            if c != ci:
                best = max(best, (l / m - tot[c] * ki / (2 * m * m)) - stay)
    return float(best)
