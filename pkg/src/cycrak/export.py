"""CSV and text writers for every exported artifact."""

from __future__ import annotations

import csv
import io
from pathlib import Path

from .centrality import CentralityMap, EdgeBetweennessMap
from .community import Partition
from .cycles import CycleBasis, CycleScore
from .graph import Graph, format_edge_list
from .selection import InfluencerSet


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x) if x == x else ""  # NaN -> empty cell
    return str(x)


def csv_text(header, rows, comments=()) -> str:
    buf = io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def write_text(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


def edge_list_text(g: Graph) -> str:
    return format_edge_list(g)


def partition_csv(g: Graph, p: Partition) -> str:
    rows = ((g.label(v), c) for v, c in enumerate(p.assignment))
    return csv_text(["node_label", "community_id"], rows, [f"q={p.q!r} seed={p.seed}"])


def centrality_csv(g: Graph, c: CentralityMap) -> str:
    return csv_text(["node_label", "score"], ((g.label(v), float(x)) for v, x in enumerate(c.values)))


def edge_betweenness_csv(g: Graph, eb: EdgeBetweennessMap) -> str:
    rows = ((g.label(int(u)), g.label(int(v)), float(x)) for (u, v), x in zip(eb.edges, eb.values))
    return csv_text(["u", "v", "eta"], rows)


def basis_text(g: Graph, basis: CycleBasis, order=None) -> str:
    idx = range(len(basis)) if order is None else order
    return "".join(",".join(g.label(v) for v in basis[i].nodes) + "\n" for i in idx)


def cycle_scores_csv(basis: CycleBasis, scores: list[CycleScore], order=None) -> str:
    idx = range(len(basis)) if order is None else order
    rows = (
        (i, basis[i].length, scores[i].i_com, scores[i].i_pth, scores[i].i_lc, scores[i].i_lc_raw, scores[i].i_b)
        for i in idx
    )
    return csv_text(["cycle_index", "length", "i_com", "i_pth", "i_lc", "i_lc_raw", "i_b"], rows)


def influencers_csv(g: Graph, s: InfluencerSet, c: CentralityMap) -> str:
    rows = []
    for rank, (v, src) in enumerate(zip(s.members, s.sources), start=1):
        tag = src if src.startswith("fallback") else "framework"
        rows.append((rank, g.label(v), float(c.values[v]), tag))
    return csv_text(["rank", "node_label", "centrality_value", "source"], rows)


def runs_csv(fs, steps) -> str:
    return csv_text(["run_index", "F", "steps"], ((i, float(f), int(s)) for i, (f, s) in enumerate(zip(fs, steps))))


def sir_summary_csv(rows) -> str:
    return csv_text(["gamma", "mu", "k", "mean_F", "std_F", "n_runs"], rows)
