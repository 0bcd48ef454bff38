"""Experiment orchestration: precompute once per network, then run every cell."""

from __future__ import annotations

import hashlib
import json
import math
from collections import Counter
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .centrality import KINDS, compute_centrality, current_flow_edge_betweenness, rank_nodes
from .community import louvain
from .cycles import basic_cycles, rank_cycles, score_basis
from .epidemic import epidemic_threshold, sir_influence
from .errors import CycrakError, DomainError, EmptyBasisError, ExperimentError
from .export import csv_text, write_text
from .graph import Graph, average_pairwise_distance, largest_connected_component, read_edge_list
from .selection import FRAMEWORKS, select
from .synth import GeneratorSpec, generate

RESULT_HEADER = [
    "network", "centrality", "framework", "k", "rho", "gamma", "mu", "realizations",
    "mean_F", "std_F", "avg_dist", "avg_deg", "fallback",
]
RATIO_HEADER = ["network", "centrality", "rho", "gamma", "F_CycRak", "F_TopK", "R"]


@dataclass
class ExperimentConfig:
    """One experiment; field names double as the config-file keys.

    ``network`` is an edge-list path or a generator mapping such as
    ``{"model": "ba", "n": 3000, "m": 5, "seed": 1}``. Spreading rates come
    from ``gamma_grid`` when given, otherwise ``gamma = alpha * beta_c`` for
    each ``alpha_grid`` entry.
    """

    network: str | GeneratorSpec
    centralities: list[str] = field(default_factory=lambda: list(KINDS))
    frameworks: list[str] = field(default_factory=lambda: list(FRAMEWORKS))
    rho_grid: list[float] = field(default_factory=lambda: [2.0])
    alpha_grid: list[float] = field(default_factory=lambda: [1.25])
    gamma_grid: list[float] | None = None
    mu: float = 1.0
    realizations: int = 300
    seed: int = 0
    network_id: str | None = None
    ci_radius: int = 2
    tree_strategy: str = "bfs"
    tree_seed: int | None = None
    tie_mode: str = "id"
    cf_mode: str = "exact"
    cf_pairs: int = 20000
    cf_solver: str = "cg"
    community_counting: str = "distinct"

    def __post_init__(self):
        if isinstance(self.network, dict):
            self.network = GeneratorSpec(**self.network)
        self.centralities = [c.upper() for c in self.centralities]
        for c in self.centralities:
            if c not in KINDS:
                raise DomainError(f"unknown centrality {c!r}")
        for f in self.frameworks:
            if f not in FRAMEWORKS:
                raise DomainError(f"unknown framework {f!r}")
        if not self.centralities or not self.frameworks:
            raise DomainError("need at least one centrality and one framework")
        if any(not 0 < r <= 100 for r in self.rho_grid) or not self.rho_grid:
            raise DomainError("rho values must lie in (0, 100]")
        if self.realizations < 1:
            raise DomainError("realizations must be >= 1")
        if self.gamma_grid is None and not self.alpha_grid:
            raise DomainError("need alpha_grid or gamma_grid")

    @property
    def gamma_mode(self) -> str:
        return "explicit" if self.gamma_grid is not None else "alpha*beta_c"

    @property
    def name(self) -> str:
        if self.network_id:
            return self.network_id
        if isinstance(self.network, GeneratorSpec):
            return self.network.name
        return Path(self.network).stem

    def to_dict(self) -> dict:
        d = asdict(self)
        if isinstance(self.network, GeneratorSpec):
            d["network"] = asdict(self.network)
        return d

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh)  # JSON is a subset of YAML
        if not isinstance(data, dict):
            raise DomainError(f"{path}: config must be a mapping")
        return cls(**data)


@dataclass(frozen=True)
class ResultRow:
    network: str
    centrality: str
    framework: str
    k: int
    rho: float
    gamma: float
    mu: float
    realizations: int
    mean_F: float
    std_F: float
    avg_dist: float
    avg_deg: float
    fallback: str
    seeds_hash: str

    def as_csv_row(self):
        return [getattr(self, h) for h in RESULT_HEADER]


@dataclass
class ResultTable:
    rows: list[ResultRow] = field(default_factory=list)
    ratios: list[tuple] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def cell(self, centrality, framework, rho, gamma) -> ResultRow:
        for r in self.rows:
            if (r.centrality, r.framework, r.rho, r.gamma) == (centrality, framework, rho, gamma):
                return r
        raise KeyError((centrality, framework, rho, gamma))


def derive_seed(*parts) -> int:
    """Stable 63-bit seed from any tuple of printable parts."""
    text = "|".join(repr(p) for p in parts)
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big") >> 1


def k_for_rho(rho: float, n: int) -> int:
    return max(1, int(math.floor(rho * n / 100.0 + 0.5)))


def load_network(source) -> tuple[Graph, dict]:
    """Build or read the network and reduce it to its largest component."""
    if isinstance(source, GeneratorSpec):
        full = generate(source)
        info = {"source": asdict(source)}
    else:
        full, stats = read_edge_list(source)
        info = {"source": str(source), "load": asdict(stats)}
    g = largest_connected_component(full)
    info.update({"n_input": full.n, "m_input": full.m, "n": g.n, "m": g.m, "lcc_applied": True})
    return g, info


@dataclass
class CyclePrecompute:
    partition: object
    betweenness: object
    basis: object
    scores: list
    order: list[int]

    @property
    def ranked_cycles(self):
        return [self.basis[i] for i in self.order]


def precompute_cycles(g: Graph, cfg: ExperimentConfig) -> CyclePrecompute:
    part = louvain(g, derive_seed(cfg.seed, cfg.name, "louvain"))
    eb = current_flow_edge_betweenness(
        g, mode=cfg.cf_mode, n_pairs=cfg.cf_pairs, seed=derive_seed(cfg.seed, cfg.name, "cf"),
        solver=cfg.cf_solver,
    )
    basis = basic_cycles(g, cfg.tree_strategy, cfg.tree_seed)
    if len(basis) == 0:
        raise EmptyBasisError("network has no cycles")
    scores = score_basis(g, basis, part, eb, cfg.community_counting)
    return CyclePrecompute(part, eb, basis, scores, rank_cycles(scores, basis))


def _seeds_hash(members) -> str:
    return hashlib.sha256(",".join(map(str, members)).encode()).hexdigest()[:16]


def _fallback_tag(stage: int) -> str:
    return "none" if stage == 0 else f"stage{stage}"


def run_experiment(cfg: ExperimentConfig, threads: int = 1, graph: Graph | None = None) -> ResultTable:
    """Run every (centrality, framework, rho, gamma) cell of ``cfg``.

    Influencer sets depend on the cell's (centrality, framework, rho);
    each SIR batch draws from a stream keyed by the full cell coordinates,
    so removing cells never changes the numbers of the remaining ones.
    """
    if graph is None:
        g, info = load_network(cfg.network)
    else:
        g = largest_connected_component(graph)
        info = {"source": "in-memory", "n": g.n, "m": g.m, "lcc_applied": True}
    net = cfg.name
    meta = {"network": net, "graph": info, "gamma_mode": cfg.gamma_mode}
    if cfg.gamma_grid is not None:
        gammas = [float(x) for x in cfg.gamma_grid]
    else:
        beta_c = epidemic_threshold(g)
        meta["beta_c"] = beta_c
        gammas = [float(a) * beta_c for a in cfg.alpha_grid]
    meta["gammas"] = gammas

    pre = precompute_cycles(g, cfg) if "CycRak" in cfg.frameworks else None
    if pre is not None:
        meta["partition_q"] = pre.partition.q
        meta["n_communities"] = pre.partition.n_communities
        meta["basis_size"] = len(pre.basis)

    table = ResultTable(meta=meta)
    cells = []
    deg = g.degrees
    for cname in cfg.centralities:
        try:
            cmap = compute_centrality(g, cname, cfg.ci_radius)
        except CycrakError as exc:
            raise ExperimentError({"network": net, "centrality": cname}, exc) from exc
        ranking = rank_nodes(cmap)
        for fw in cfg.frameworks:
            for rho in cfg.rho_grid:
                k = k_for_rho(rho, g.n)
                coords = {"network": net, "centrality": cname, "framework": fw, "rho": rho}
                try:
                    chosen = select(
                        g, fw, ranking, k,
                        cycles=pre.ranked_cycles if pre else None,
                        centrality=cmap,
                        tie_mode=cfg.tie_mode,
                        seed=derive_seed(cfg.seed, net, cname, fw, rho, "ties"),
                    )
                    avg_dist = average_pairwise_distance(g, chosen.members) if k > 1 else float("nan")
                except CycrakError as exc:
                    raise ExperimentError(coords, exc) from exc
                avg_deg = float(deg[chosen.members].mean())
                shash = _seeds_hash(chosen.members)
                cells.append({**coords, "k": k, "fallback": _fallback_tag(chosen.fallback_stage),
                              "seeds_hash": shash, "members": [g.label(v) for v in chosen.members]})
                for gamma in gammas:
                    try:
                        est = sir_influence(
                            g, chosen.members, gamma, cfg.mu, cfg.realizations,
                            seed=derive_seed(cfg.seed, net, cname, fw, rho, gamma), threads=threads,
                        )
                    except CycrakError as exc:
                        raise ExperimentError({**coords, "gamma": gamma}, exc) from exc
                    table.rows.append(ResultRow(
                        net, cname, fw, k, float(rho), gamma, float(cfg.mu), cfg.realizations,
                        est.mean, est.std, avg_dist, avg_deg,
                        _fallback_tag(chosen.fallback_stage), shash,
                    ))
    meta["cells"] = cells
    meta["fallback_summary"] = dict(Counter(f"{c['framework']}:{c['fallback']}" for c in cells))

    if "CycRak" in cfg.frameworks and "TopK" in cfg.frameworks:
        for cname in cfg.centralities:
            for rho in cfg.rho_grid:
                for gamma in gammas:
                    fc = table.cell(cname, "CycRak", float(rho), gamma).mean_F
                    ft = table.cell(cname, "TopK", float(rho), gamma).mean_F
                    table.ratios.append((net, cname, float(rho), gamma, fc, ft, fc / ft if ft > 0 else float("nan")))
    return table


def emit_results(t: ResultTable, out_dir, cfg: ExperimentConfig | None = None) -> dict[str, Path]:
    """Write ``results.csv``, ``ratios.csv`` and ``manifest.json`` under ``out_dir``."""
    out = Path(out_dir)
    paths = {
        "results": write_text(out / "results.csv", csv_text(RESULT_HEADER, (r.as_csv_row() for r in t.rows))),
        "ratios": write_text(out / "ratios.csv", csv_text(RATIO_HEADER, t.ratios)),
    }
    manifest = {
        "code_version": __version__,
        "config": cfg.to_dict() if cfg is not None else None,
        "master_seed": cfg.seed if cfg is not None else None,
        **t.meta,
    }
    paths["manifest"] = write_text(out / "manifest.json", json.dumps(manifest, indent=2, sort_keys=True, default=str) + "\n")
    return paths


# --- cycle profiling ----------------------------------------------------


@dataclass
class CycleProfile:
    graph: Graph
    pre: CyclePrecompute

    @property
    def records(self) -> list[tuple[int, float]]:
        return [(c.length, s.i_b) for c, s in zip(self.pre.basis.cycles, self.pre.scores)]

    def extreme(self, which: str) -> dict:
        i = self.pre.order[0] if which == "most" else self.pre.order[-1]
        c, s = self.pre.basis[i], self.pre.scores[i]
        return {
            "cycle_index": i,
            "length": c.length,
            "nodes": [self.graph.label(v) for v in c.nodes],
            "i_com": s.i_com,
            "i_pth": s.i_pth,
            "i_lc": s.i_lc,
            "i_lc_raw": s.i_lc_raw,
            "i_b": s.i_b,
        }


def profile_cycles(source, cfg: ExperimentConfig | None = None, graph: Graph | None = None) -> CycleProfile:
    """Score every basis cycle of the network's largest component."""
    if cfg is None:
        cfg = ExperimentConfig(network=source if graph is None else "in-memory")
    if graph is None:
        g, _ = load_network(source)
    else:
        g = largest_connected_component(graph)
    if g.m - g.n + 1 == 0:
        raise EmptyBasisError("network is a tree: the cycle basis is empty")
    return CycleProfile(g, precompute_cycles(g, cfg))


def length_importance_trend(records, permutations: int = 1000, seed: int = 0) -> tuple[float, float]:
    """Spearman correlation of cycle length vs importance and a one-sided permutation p-value.

    The p-value estimates P(rho_perm <= rho_obs) with the usual +1 correction.
    """
    from scipy.stats import rankdata

    lengths = rankdata([r[0] for r in records])
    imp = rankdata([r[1] for r in records])
    lengths = (lengths - lengths.mean()) / lengths.std()
    imp = (imp - imp.mean()) / imp.std()
    rho = float(np.mean(lengths * imp))
    rng = np.random.default_rng(seed)
    hits = sum(float(np.mean(lengths * rng.permutation(imp))) <= rho for _ in range(permutations))
    return rho, (hits + 1) / (permutations + 1)
