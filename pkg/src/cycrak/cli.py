"""Command-line entry point: ``cycrak <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import export
from .centrality import KINDS, compute_centrality, current_flow_edge_betweenness, rank_nodes
from .epidemic import epidemic_threshold, sir_influence
from .errors import CycrakError
from .harness import (
    ExperimentConfig,
    derive_seed,
    emit_results,
    k_for_rho,
    length_importance_trend,
    load_network,
    profile_cycles,
    run_experiment,
)
from .selection import FRAMEWORKS, select
from .synth import MODELS, GeneratorSpec, generate

log = logging.getLogger("cycrak")


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--seed", type=int, default=d if suppress else 0, help="master RNG seed")
    p.add_argument("--threads", type=int, default=d if suppress else 1, help="worker threads for SIR runs")
    p.add_argument("--out-dir", default=d if suppress else ".", help="directory for output files")
    p.add_argument("-v", "--verbose", action="store_true", default=d if suppress else False)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cycrak", description=__doc__)
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def cmd(name, help):
        p = sub.add_parser(name, help=help)
        _global_flags(p, suppress=True)
        return p

    p = cmd("generate", "write a synthetic network as an edge list")
    p.add_argument("--model", choices=MODELS, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, help="BA attachments per new node")
    p.add_argument("--k", type=int, help="WS ring degree (even)")
    p.add_argument("--p", type=float, help="WS rewiring or ER edge probability")
    p.add_argument("--out", help="output path (default: <out-dir>/<model>.edgelist)")

    p = cmd("centrality", "node centrality scores and edge current-flow betweenness")
    p.add_argument("edgelist")
    p.add_argument("--kind", choices=KINDS, action="append", help="repeatable; default all six")
    p.add_argument("--ci-radius", type=int, default=2)
    p.add_argument("--edge-betweenness", action="store_true", help="also write edge_betweenness.csv")

    p = cmd("rank-cycles", "score and rank the fundamental cycles")
    _cycle_opts(p)

    p = cmd("profile-cycles", "cycle length-importance profile and extreme cycles")
    _cycle_opts(p)
    p.add_argument("--permutations", type=int, default=1000)

    p = cmd("select", "select k influencers with one framework")
    p.add_argument("edgelist")
    p.add_argument("--framework", choices=FRAMEWORKS, required=True)
    p.add_argument("--centrality", choices=KINDS, default="DC")
    size = p.add_mutually_exclusive_group(required=True)
    size.add_argument("--k", type=int)
    size.add_argument("--rho", type=float, help="percentage of nodes")
    p.add_argument("--ci-radius", type=int, default=2)
    p.add_argument("--tie-mode", choices=("id", "random"), default="id")
    _tree_opts(p)

    p = cmd("simulate", "SIR spreading from a seed set")
    p.add_argument("edgelist")
    p.add_argument("--seeds", required=True, help="comma-separated node labels, or @file with one label per line")
    rate = p.add_mutually_exclusive_group(required=True)
    rate.add_argument("--gamma", type=float, action="append")
    rate.add_argument("--alpha", type=float, action="append", help="gamma = alpha * beta_c")
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--realizations", type=int, default=300)

    p = cmd("experiment", "run a full experiment grid from a config file")
    p.add_argument("--config", required=True, help="YAML or JSON document with ExperimentConfig keys")
    return parser


def _tree_opts(p):
    p.add_argument("--tree-strategy", choices=("bfs", "random"), default="bfs")
    p.add_argument("--tree-seed", type=int)


def _cycle_opts(p):
    p.add_argument("edgelist")
    _tree_opts(p)
    p.add_argument("--cf-mode", choices=("exact", "sampled"), default="exact")
    p.add_argument("--cf-pairs", type=int, default=20000)


def _config_for(args, path, **extra) -> ExperimentConfig:
    return ExperimentConfig(
        network=path,
        seed=args.seed,
        tree_strategy=getattr(args, "tree_strategy", "bfs"),
        tree_seed=getattr(args, "tree_seed", None),
        cf_mode=getattr(args, "cf_mode", "exact"),
        cf_pairs=getattr(args, "cf_pairs", 20000),
        **extra,
    )


def _out(args, name) -> Path:
    return Path(args.out_dir) / name


def cmd_generate(args):
    spec = GeneratorSpec(args.model, args.n, m=args.m, k=args.k, p=args.p, seed=args.seed)
    g = generate(spec)
    path = Path(args.out) if args.out else _out(args, f"{args.model}.edgelist")
    export.write_text(path, export.edge_list_text(g))
    print(f"{spec.name}: n={g.n} m={g.m} -> {path}")


def cmd_centrality(args):
    g, _ = load_network(args.edgelist)
    for kind in args.kind or KINDS:
        c = compute_centrality(g, kind, args.ci_radius)
        path = export.write_text(_out(args, f"centrality_{kind}.csv"), export.centrality_csv(g, c))
        print(f"{kind} -> {path}")
    if args.edge_betweenness:
        eb = current_flow_edge_betweenness(g)
        path = export.write_text(_out(args, "edge_betweenness.csv"), export.edge_betweenness_csv(g, eb))
        print(f"edge current-flow betweenness -> {path}")


def cmd_rank_cycles(args):
    prof = profile_cycles(args.edgelist, _config_for(args, args.edgelist))
    g, pre = prof.graph, prof.pre
    export.write_text(_out(args, "partition.csv"), export.partition_csv(g, pre.partition))
    export.write_text(_out(args, "basis.txt"), export.basis_text(g, pre.basis))
    export.write_text(_out(args, "ranked_cycles.txt"), export.basis_text(g, pre.basis, pre.order))
    export.write_text(_out(args, "cycle_scores.csv"), export.cycle_scores_csv(pre.basis, pre.scores, pre.order))
    print(f"{len(pre.basis)} cycles ranked (Q={pre.partition.q:.4f}) -> {args.out_dir}")


def cmd_profile_cycles(args):
    prof = profile_cycles(args.edgelist, _config_for(args, args.edgelist))
    pre = prof.pre
    export.write_text(_out(args, "profile.csv"), export.csv_text(["length", "i_b"], prof.records))
    export.write_text(_out(args, "cycle_scores.csv"), export.cycle_scores_csv(pre.basis, pre.scores))
    rho, pval = length_importance_trend(prof.records, args.permutations, args.seed)
    report = {
        "most_important": prof.extreme("most"),
        "least_important": prof.extreme("least"),
        "basis_size": len(pre.basis),
        "spearman_length_vs_importance": rho,
        "permutation_p": pval,
    }
    export.write_text(_out(args, "extreme_cycles.json"), json.dumps(report, indent=2) + "\n")
    for key in ("most_important", "least_important"):
        r = report[key]
        print(f"{key:16s} len={r['length']} I_com={r['i_com']:.5g} I_pth={r['i_pth']:.5g} "
              f"I_lc={r['i_lc']:.5g} I_b={r['i_b']:.5g}")
    print(f"spearman(length, I_b) = {rho:.4f}  (permutation p = {pval:.4g})")


def cmd_select(args):
    g, _ = load_network(args.edgelist)
    k = args.k if args.k is not None else k_for_rho(args.rho, g.n)
    c = compute_centrality(g, args.centrality, args.ci_radius)
    r = rank_nodes(c)
    cycles = None
    if args.framework == "CycRak":
        prof = profile_cycles(args.edgelist, _config_for(args, args.edgelist), graph=g)
        cycles = prof.pre.ranked_cycles
    s = select(g, args.framework, r, k, cycles=cycles, centrality=c, tie_mode=args.tie_mode,
               seed=derive_seed(args.seed, "select"))
    path = export.write_text(_out(args, "influencers.csv"), export.influencers_csv(g, s, c))
    print(f"{args.framework}/{args.centrality}: {k} influencers (fallback stage {s.fallback_stage}) -> {path}")


def _read_seeds(g, spec: str):
    if spec.startswith("@"):
        labels = [ln.strip() for ln in Path(spec[1:]).read_text().splitlines() if ln.strip()]
    else:
        labels = [x.strip() for x in spec.split(",") if x.strip()]
    return [g.index(x) for x in labels]


def cmd_simulate(args):
    g, _ = load_network(args.edgelist)
    seeds = _read_seeds(g, args.seeds)
    gammas = args.gamma or [a * epidemic_threshold(g) for a in args.alpha]
    summary = []
    for i, gamma in enumerate(gammas):
        est = sir_influence(g, seeds, gamma, args.mu, args.realizations,
                            seed=derive_seed(args.seed, "simulate", gamma), threads=args.threads)
        name = "runs.csv" if len(gammas) == 1 else f"runs_{i}.csv"
        export.write_text(_out(args, name), export.runs_csv(est.fs, est.steps))
        summary.append((gamma, args.mu, len(set(seeds)), est.mean, est.std, args.realizations))
        print(f"gamma={gamma:.5g} mu={args.mu} k={len(set(seeds))}: F = {est.mean:.5f} +/- {est.std:.5f}")
    export.write_text(_out(args, "summary.csv"), export.sir_summary_csv(summary))


def cmd_experiment(args):
    cfg = ExperimentConfig.from_file(args.config)
    if "seed" not in _explicit_keys(args.config) and args.seed:
        cfg.seed = args.seed
    table = run_experiment(cfg, threads=args.threads)
    paths = emit_results(table, args.out_dir, cfg)
    print(f"{len(table.rows)} cells, {len(table.ratios)} ratio rows -> {paths['results'].parent}")


def _explicit_keys(path):
    import yaml

    with open(path, encoding="utf-8") as fh:
        return set(yaml.safe_load(fh) or {})


COMMANDS = {
    "generate": cmd_generate,
    "centrality": cmd_centrality,
    "rank-cycles": cmd_rank_cycles,
    "profile-cycles": cmd_profile_cycles,
    "select": cmd_select,
    "simulate": cmd_simulate,
    "experiment": cmd_experiment,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        COMMANDS[args.command](args)
    except (CycrakError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
