"""Discrete-time SIR spreading and the mean-field epidemic threshold."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DegenerateThresholdError, DomainError
from .graph import Graph, degree_moments

SUSCEPTIBLE, INFECTED, RECOVERED = 0, 1, 2


@dataclass(frozen=True)
class SirParams:
    gamma: float
    mu: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.gamma <= 1.0:
            raise DomainError(f"gamma={self.gamma} must lie in [0, 1]")
        if not 0.0 < self.mu <= 1.0:
            raise DomainError(f"mu={self.mu} must lie in (0, 1]")


@dataclass(frozen=True)
class SirOutcome:
    f: float
    steps: int
    recovered_count: int
    trace: tuple[tuple[int, int, int], ...] | None = None  # (S, I, R) after each step


@dataclass(frozen=True)
class InfluenceEstimate:
    mean: float
    std: float
    fs: np.ndarray
    steps: np.ndarray

    @property
    def stderr(self) -> float:
        n = len(self.fs)
        return float(np.std(self.fs, ddof=1) / np.sqrt(n)) if n > 1 else 0.0


def epidemic_threshold(g: Graph) -> float:
    """``<k> / (<k^2> - <k>)``, evaluated on integer degree sums so small cases are exact."""
    if g.n == 0:
        raise DegenerateThresholdError("empty graph: threshold undefined")
    deg = g.degrees.astype(np.int64)
    s1, s2 = int(deg.sum()), int((deg * deg).sum())
    if s2 <= s1:
        k1, k2 = degree_moments(g)
        raise DegenerateThresholdError(f"<k^2>={k2} <= <k>={k1}: threshold undefined")
    return s1 / (s2 - s1)


def run_stream(seed: int, run: int) -> np.random.Generator:
    """Independent counter-based stream for realization ``run`` under ``seed``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(run,))))


def _seed_array(g: Graph, seeds: Iterable[int]) -> np.ndarray:
    arr = np.unique(np.fromiter((int(s) for s in seeds), dtype=np.int64))
    if arr.size == 0:
        raise DomainError("at least one seed node is required")
    if arr[0] < 0 or arr[-1] >= g.n:
        raise DomainError("seed nodes must belong to the graph")
    return arr


def _simulate(g, seeds, gamma, mu, rng, trace=False) -> SirOutcome:
    indptr, indices = g.csr()
    deg = g.degrees
    state = np.zeros(g.n, dtype=np.int8)
    infected = seeds
    state[infected] = INFECTED
    n_rec = 0
    steps = 0
    history = [] if trace else None
    while infected.size:
        steps += 1
        counts = deg[infected]
        total = int(counts.sum())
        if total:
            ends = np.cumsum(counts)
            offs = np.repeat(indptr[infected] - ends + counts, counts) + np.arange(total)
            nbrs = indices[offs]
            targets = nbrs[state[nbrs] == SUSCEPTIBLE]
            hits = rng.random(targets.size) < gamma
            new = np.unique(targets[hits])
        else:
            new = infected[:0]
        recover = rng.random(infected.size) < mu
        gone = infected[recover]
        state[gone] = RECOVERED
        n_rec += gone.size
        state[new] = INFECTED
        infected = np.union1d(infected[~recover], new)
        if trace:
            history.append((g.n - n_rec - infected.size, int(infected.size), n_rec))
    return SirOutcome(n_rec / g.n, steps, n_rec, tuple(history) if trace else None)


def sir_run(g: Graph, seeds: Iterable[int], p: SirParams, trace: bool = False) -> SirOutcome:
    """One synchronous SIR realization until no infected node remains.

    Each step, every infected node tries each susceptible neighbour once
    with probability ``gamma``; afterwards each node that was infected at
    the start of the step recovers with probability ``mu``. Nodes infected
    during a step start spreading in the next one.
    """
    return _simulate(g, _seed_array(g, seeds), p.gamma, p.mu, run_stream(p.seed, 0), trace)


def sir_influence(
    g: Graph,
    seeds: Iterable[int],
    gamma: float,
    mu: float = 1.0,
    realizations: int = 300,
    seed: int = 0,
    threads: int = 1,
) -> InfluenceEstimate:
    """Mean and standard deviation of the final recovered fraction over independent runs."""
    if realizations < 1:
        raise DomainError("realizations must be >= 1")
    SirParams(gamma, mu, seed)  # validates
    arr = _seed_array(g, seeds)

    def one(run):
        return _simulate(g, arr, gamma, mu, run_stream(seed, run))

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            outs = list(pool.map(one, range(realizations)))
    else:
        outs = [one(r) for r in range(realizations)]
    fs = np.array([o.f for o in outs])
    steps = np.array([o.steps for o in outs], dtype=np.int64)
    return InfluenceEstimate(float(fs.mean()), float(fs.std()), fs, steps)
