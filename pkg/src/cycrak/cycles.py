"""Fundamental cycle bases and cycle importance scoring."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .centrality import EdgeBetweennessMap
from .community import Partition
from .errors import DisconnectedError, DomainError
from .graph import Graph, is_connected


@dataclass(frozen=True)
class BasicCycle:
    """Simple cycle given as a closed node walk; ``edges[i]`` joins ``nodes[i]`` and ``nodes[i+1]``."""

    nodes: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    chord: tuple[int, int]

    @property
    def length(self) -> int:
        return len(self.nodes)

    def __len__(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class CycleBasis:
    cycles: tuple[BasicCycle, ...]
    n: int
    root: int
    strategy: str
    seed: int | None
    tree_edges: frozenset

    def __len__(self) -> int:
        return len(self.cycles)

    def __iter__(self):
        return iter(self.cycles)

    def __getitem__(self, i) -> BasicCycle:
        return self.cycles[i]


def _edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def spanning_tree(g: Graph, strategy: str = "bfs", seed: int | None = None):
    """BFS spanning tree as ``(root, parent, depth)``; ``parent[root] == -1``.

    ``strategy="bfs"`` roots at node 0 and visits neighbours in id order;
    ``"random"`` draws the root and shuffles each neighbour list from ``seed``.
    """
    if strategy == "bfs":
        rng = None
        root = 0
    elif strategy == "random":
        rng = np.random.default_rng(seed)
        root = int(rng.integers(g.n))
    else:
        raise DomainError(f"unknown spanning-tree strategy {strategy!r}")
    parent = np.full(g.n, -2, dtype=np.int64)
    depth = np.zeros(g.n, dtype=np.int64)
    parent[root] = -1
    queue = deque([root])
    while queue:
        u = queue.popleft()
        nbrs = g.neighbors(u)
        if rng is not None:
            nbrs = [nbrs[i] for i in rng.permutation(len(nbrs))]
        for v in nbrs:
            if parent[v] == -2:
                parent[v] = u
                depth[v] = depth[u] + 1
                queue.append(v)
    return root, parent, depth


def basic_cycles(g: Graph, strategy: str = "bfs", seed: int | None = None) -> CycleBasis:
    """Fundamental cycles of a BFS spanning tree, one per non-tree edge.

    Cycles follow the order of their non-tree edges in ``g.edges()``. Each
    cycle runs from ``u`` up to the lowest common ancestor and back down
    to ``v``, closing through the non-tree edge ``(u, v)``.
    """
    if not is_connected(g):
        raise DisconnectedError("basic cycles are taken over a connected graph")
    root, parent, depth = spanning_tree(g, strategy, seed)
    tree = frozenset(_edge(v, int(parent[v])) for v in range(g.n) if parent[v] >= 0)
    cycles = []
    for u, v in g.edges():
        if (u, v) in tree:
            continue
        up, down = [u], [v]
        a, b = u, v
        while depth[a] > depth[b]:
            a = int(parent[a])
            up.append(a)
        while depth[b] > depth[a]:
            b = int(parent[b])
            down.append(b)
        while a != b:
            a, b = int(parent[a]), int(parent[b])
            up.append(a)
            down.append(b)
        nodes = tuple(up + down[-2::-1])
        k = len(nodes)
        edges = tuple(_edge(nodes[i], nodes[(i + 1) % k]) for i in range(k))
        cycles.append(BasicCycle(nodes, edges, (u, v)))
    return CycleBasis(tuple(cycles), g.n, root, strategy, seed, tree)


def node_cycle_participation(basis: CycleBasis) -> np.ndarray:
    """Number of basis cycles through each node."""
    counts = np.zeros(basis.n, dtype=np.int64)
    for c in basis.cycles:
        counts[list(c.nodes)] += 1
    return counts


@dataclass(frozen=True)
class CycleScore:
    i_com: float
    i_pth: float
    i_lc: float
    i_lc_raw: float
    i_b: float


def community_score(g: Graph, nodes, p: Partition, counting: str = "distinct") -> float:
    """Macroscopic term: community spread of the cycle and of its outer neighbourhood.

    ``counting="distinct"`` counts distinct communities; ``"per_node"`` sums
    one community per node (the literal reading, under which both counts
    equal the node counts).
    """
    members = set(nodes)
    outer = set()
    for i in members:
        outer.update(g.neighbor_set(i))
    outer -= members
    n = len(members)
    if counting == "distinct":
        n_c = len({p[i] for i in members})
        n_cn = len({p[j] for j in outer})
    elif counting == "per_node":
        n_c, n_cn = n, len(outer)
    else:
        raise DomainError(f"unknown community counting {counting!r}")
    if not outer:
        return 0.0
    return (n_c / n) * (n_cn / len(outer))


def cycle_scores(
    g: Graph,
    basis: CycleBasis,
    b: BasicCycle,
    p: Partition,
    eb: EdgeBetweennessMap,
    participation: np.ndarray | None = None,
    counting: str = "distinct",
    normalize_lc: bool = True,
) -> CycleScore:
    if participation is None:
        participation = node_cycle_participation(basis)
    n = b.length
    i_com = community_score(g, b.nodes, p, counting)
    i_pth = sum(eb[e] for e in b.edges) / n
    raw = float(participation[list(b.nodes)].sum()) / n
    i_lc = raw / len(basis) if normalize_lc else raw
    return CycleScore(i_com, i_pth, i_lc, raw, i_com * i_pth * i_lc)


def score_basis(g, basis, p, eb, counting="distinct", normalize_lc=True) -> list[CycleScore]:
    part = node_cycle_participation(basis)
    return [cycle_scores(g, basis, b, p, eb, part, counting, normalize_lc) for b in basis.cycles]


def rank_cycles(scores, basis: CycleBasis) -> list[int]:
    """Cycle indices by descending importance.

    Ties go to the shorter cycle, then to the lexicographically smaller
    sorted node-id tuple. Importances equal to 12 significant digits tie.
    """
    if len(scores) != len(basis):
        raise DomainError("need exactly one score per basis cycle")
    return sorted(
        range(len(scores)),
        key=lambda i: (-_tie_key(scores[i].i_b), basis[i].length, tuple(sorted(basis[i].nodes))),
    )


def _tie_key(x: float) -> float:
    # products of the three factors pick up last-bit noise; keep such values tied
    return float(f"{x:.12g}")


def length_importance_profile(scores, basis: CycleBasis) -> list[tuple[int, float]]:
    return [(c.length, s.i_b) for c, s in zip(basis.cycles, scores)]
