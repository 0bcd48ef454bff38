"""Influencer selection: TopK, NotCon, IncDis, DecSim and cycle-ranking (CycRak)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .centrality import CentralityMap, Ranking, rank_nodes
from .cycles import BasicCycle
from .errors import DisconnectedError, DomainError, ExhaustionError
from .graph import Graph, bfs_distances, jaccard_similarity

FRAMEWORKS = ("TopK", "NotCon", "IncDis", "DecSim", "CycRak")


@dataclass(frozen=True)
class AuditRecord:
    candidate: int
    accepted: bool
    reason: str
    value: float | None = None  # running d / s after the decision, when defined
    cycle: int | None = None  # position of the originating cycle in the cycle ranking


@dataclass
class InfluencerSet:
    members: list[int]
    framework: str
    sources: list[str] = field(default_factory=list)
    fallback_stage: int = 0
    audit: list[AuditRecord] = field(default_factory=list)

    @property
    def fallback_used(self) -> bool:
        return self.fallback_stage > 0

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


def _check_k(k: int, n: int) -> None:
    if not 1 <= k <= n:
        raise DomainError(f"k={k} must lie in 1..{n}")


def select_topk(r: Ranking, k: int) -> InfluencerSet:
    _check_k(k, len(r))
    members = list(r.order[:k])
    audit = [AuditRecord(v, True, "top-k") for v in members]
    return InfluencerSet(members, "TopK", ["TopK"] * k, 0, audit)


def select_notcon(g: Graph, r: Ranking, k: int) -> InfluencerSet:
    _check_k(k, g.n)
    members: list[int] = []
    blocked: set[int] = set()
    audit = []
    for v in r.order:
        if v in blocked:
            audit.append(AuditRecord(v, False, "adjacent to an influencer"))
            continue
        members.append(v)
        blocked.update(g.neighbor_set(v))
        audit.append(AuditRecord(v, True, "not adjacent"))
        if len(members) == k:
            return InfluencerSet(members, "NotCon", ["NotCon"] * k, 0, audit)
    raise ExhaustionError("NotCon", members, k, audit)


def select_incdis(g: Graph, r: Ranking, k: int) -> InfluencerSet:
    """Accept ranked nodes whose inclusion strictly raises the mean pairwise distance."""
    _check_k(k, g.n)
    members: list[int] = []
    dists: list[np.ndarray] = []
    total = 0
    current = 0.0
    audit = []
    for v in r.order:
        if not members:
            members.append(v)
            dists.append(bfs_distances(g, v))
            audit.append(AuditRecord(v, True, "first influencer", current))
        else:
            to_v = [int(d[v]) for d in dists]
            if min(to_v) < 0:
                raise DisconnectedError(f"node {v} is unreachable from the influencer set")
            s = len(members) + 1
            avg = (total + sum(to_v)) / (s * (s - 1) / 2)
            if avg > current:
                members.append(v)
                dists.append(bfs_distances(g, v))
                total += sum(to_v)
                current = avg
                audit.append(AuditRecord(v, True, "distance increases", current))
            else:
                audit.append(AuditRecord(v, False, "distance does not increase", current))
        if len(members) == k:
            return InfluencerSet(members, "IncDis", ["IncDis"] * k, 0, audit)
    raise ExhaustionError("IncDis", members, k, audit)


def select_decsim(g: Graph, r: Ranking, k: int) -> InfluencerSet:
    """Accept ranked nodes whose inclusion strictly lowers the mean pairwise Jaccard similarity."""
    _check_k(k, g.n)
    members: list[int] = []
    total = 0.0
    current = math.inf  # a singleton counts as maximally similar
    audit = []
    for v in r.order:
        if not members:
            members.append(v)
            audit.append(AuditRecord(v, True, "first influencer", current))
        else:
            add = sum(jaccard_similarity(g, v, u) for u in members)
            s = len(members) + 1
            avg = (total + add) / (s * (s - 1) / 2)
            if avg < current:
                members.append(v)
                total += add
                current = avg
                audit.append(AuditRecord(v, True, "similarity decreases", current))
            else:
                audit.append(AuditRecord(v, False, "similarity does not decrease", current))
        if len(members) == k:
            return InfluencerSet(members, "DecSim", ["DecSim"] * k, 0, audit)
    raise ExhaustionError("DecSim", members, k, audit)


def complete_with_fallback(g: Graph, r: Ranking, result: InfluencerSet, k: int) -> InfluencerSet:
    """Top up ``result`` to ``k`` members in place.

    Stage 1 continues NotCon over ``r`` (skipping members and their
    neighbours); stage 2 takes the best remaining nodes regardless of
    adjacency.
    """
    chosen = set(result.members)
    blocked = set()
    for v in result.members:
        blocked.update(g.neighbor_set(v))
    for stage in (1, 2):
        if len(result.members) >= k:
            break
        for v in r.order:
            if v in chosen or (stage == 1 and v in blocked):
                continue
            result.members.append(v)
            result.sources.append(f"fallback{stage}")
            result.audit.append(AuditRecord(v, True, f"fallback stage {stage}"))
            result.fallback_stage = stage
            chosen.add(v)
            blocked.update(g.neighbor_set(v))
            if len(result.members) == k:
                break
    return result


def select_cycrak(
    g: Graph,
    cycles: Sequence[BasicCycle],
    centrality: CentralityMap,
    k: int,
    tie_mode: str = "id",
    seed: int | None = None,
    ranking: Ranking | None = None,
) -> InfluencerSet:
    """Pick influencers cycle by cycle down the cycle ranking.

    From each cycle, in ranked order, the highest-centrality node not yet
    selected is the candidate; it joins when it has no neighbour among the
    influencers, and the cycle is discarded either way. If the cycles run
    out first, :func:`complete_with_fallback` finishes the set over the
    centrality ranking.

    Parameters
    ----------
    cycles : sequence of BasicCycle
        Cycles in ranked order (most important first).
    tie_mode : {"id", "random"}
        Break equal-centrality ties by smallest id, or uniformly at random
        from ``seed``.
    """
    _check_k(k, g.n)
    if tie_mode not in ("id", "random"):
        raise DomainError(f"unknown tie mode {tie_mode!r}")
    rng = np.random.default_rng(seed) if tie_mode == "random" else None
    vals = np.asarray(centrality.values, dtype=float)
    result = InfluencerSet([], "CycRak")
    chosen: set[int] = set()
    blocked: set[int] = set()
    for pos, b in enumerate(cycles):
        if len(result.members) == k:
            break
        rest = sorted(v for v in b.nodes if v not in chosen)
        if not rest:
            result.audit.append(AuditRecord(-1, False, "cycle fully selected", cycle=pos))
            continue
        top = max(vals[v] for v in rest)
        tied = [v for v in rest if vals[v] == top]
        pick = tied[0] if rng is None or len(tied) == 1 else int(tied[rng.integers(len(tied))])
        if pick in blocked:
            result.audit.append(AuditRecord(pick, False, "adjacent to an influencer", cycle=pos))
            continue
        result.members.append(pick)
        result.sources.append("CycRak")
        result.audit.append(AuditRecord(pick, True, "cycle maximum", cycle=pos))
        chosen.add(pick)
        blocked.update(g.neighbor_set(pick))
    if len(result.members) < k:
        complete_with_fallback(g, ranking or rank_nodes(centrality), result, k)
    return result


def select(
    g: Graph,
    framework: str,
    ranking: Ranking,
    k: int,
    *,
    cycles: Sequence[BasicCycle] | None = None,
    centrality: CentralityMap | None = None,
    tie_mode: str = "id",
    seed: int | None = None,
    fallback: bool = True,
) -> InfluencerSet:
    """Run one framework; exhausted benchmark rules are completed by the shared fallback."""
    try:
        if framework == "TopK":
            return select_topk(ranking, k)
        if framework == "NotCon":
            return select_notcon(g, ranking, k)
        if framework == "IncDis":
            return select_incdis(g, ranking, k)
        if framework == "DecSim":
            return select_decsim(g, ranking, k)
        if framework == "CycRak":
            if cycles is None or centrality is None:
                raise DomainError("CycRak needs the ranked cycles and the centrality map")
            return select_cycrak(g, cycles, centrality, k, tie_mode, seed, ranking)
    except ExhaustionError as exc:
        if not fallback:
            raise
        partial = InfluencerSet(
            exc.partial, exc.framework, [exc.framework] * len(exc.partial), 0, exc.audit
        )
        return complete_with_fallback(g, ranking, partial, k)
    raise DomainError(f"unknown framework {framework!r}; expected one of {FRAMEWORKS}")
