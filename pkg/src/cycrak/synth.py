"""Seeded Barabasi-Albert, Watts-Strogatz and Erdos-Renyi generators."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .graph import Graph

MODELS = ("ba", "ws", "er")


def barabasi_albert(n: int, m: int, seed: int | None = None) -> Graph:
    """Preferential attachment with an ``m``-node edgeless core.

    Node ``m`` links to every core node; each later node links to ``m``
    distinct existing nodes drawn proportionally to degree (repeat draws
    are rejected). The result has exactly ``(n - m) * m`` edges.
    """
    if not 1 <= m < n:
        raise DomainError(f"BA needs 1 <= m < n, got m={m}, n={n}")
    rng = np.random.default_rng(seed)
    edges = [(v, m) for v in range(m)]
    ends = [v for e in edges for v in e]  # each node appears once per incident edge
    for new in range(m + 1, n):
        targets: set[int] = set()
        while len(targets) < m:
            targets.add(ends[int(rng.integers(len(ends)))])
        for t in sorted(targets):
            edges.append((t, new))
            ends.extend((t, new))
    return Graph(n, edges)


def watts_strogatz(n: int, k: int, p: float, seed: int | None = None) -> Graph:
    """Ring lattice of even degree ``k`` with each edge rewired with probability ``p``.

    Lattice edges ``(i, i + j)`` are scanned for ``j = 1..k/2`` and, within
    each ``j``, in ring order. A rewired edge keeps ``i`` and moves its far
    end to a uniform node that is neither ``i`` nor already adjacent to it.
    """
    if k % 2 or not 0 <= k < n:
        raise DomainError(f"WS needs an even k with 0 <= k < n, got k={k}, n={n}")
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"rewiring probability {p} outside [0, 1]")
    rng = np.random.default_rng(seed)
    adj = [set() for _ in range(n)]
    for j in range(1, k // 2 + 1):
        for i in range(n):
            t = (i + j) % n
            adj[i].add(t)
            adj[t].add(i)
    for j in range(1, k // 2 + 1):
        for i in range(n):
            t = (i + j) % n
            if rng.random() >= p or len(adj[i]) >= n - 1:
                continue
            w = int(rng.integers(n))
            while w == i or w in adj[i]:
                w = int(rng.integers(n))
            adj[i].discard(t)
            adj[t].discard(i)
            adj[i].add(w)
            adj[w].add(i)
    return Graph(n, [(i, j) for i in range(n) for j in adj[i] if i < j])


def erdos_renyi(n: int, p: float, seed: int | None = None) -> Graph:
    """G(n, p): every unordered pair is an edge independently with probability ``p``."""
    if n < 0 or not 0.0 <= p <= 1.0:
        raise DomainError(f"ER needs n >= 0 and p in [0, 1], got n={n}, p={p}")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(iu.size) < p
    return Graph(n, zip(iu[keep].tolist(), ju[keep].tolist()))


@dataclass(frozen=True)
class GeneratorSpec:
    model: str
    n: int
    m: int | None = None  # BA attachments
    k: int | None = None  # WS ring degree
    p: float | None = None  # WS rewiring / ER edge probability
    seed: int = 0

    def build(self) -> Graph:
        return generate(self)

    @property
    def name(self) -> str:
        if self.model == "ba":
            return f"BA(n={self.n},m={self.m},seed={self.seed})"
        if self.model == "ws":
            return f"WS(n={self.n},k={self.k},p={self.p},seed={self.seed})"
        return f"ER(n={self.n},p={self.p},seed={self.seed})"


def generate(spec: GeneratorSpec) -> Graph:
    model = spec.model.lower()
    if model == "ba":
        if spec.m is None:
            raise DomainError("BA requires m")
        return barabasi_albert(spec.n, spec.m, spec.seed)
    if model == "ws":
        if spec.k is None or spec.p is None:
            raise DomainError("WS requires k and p")
        return watts_strogatz(spec.n, spec.k, spec.p, spec.seed)
    if model == "er":
        if spec.p is None:
            raise DomainError("ER requires p")
        return erdos_renyi(spec.n, spec.p, spec.seed)
    raise DomainError(f"unknown model {spec.model!r}; expected one of {MODELS}")
