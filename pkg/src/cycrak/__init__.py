"""Cycle-ranking influencer selection and SIR benchmarking on undirected networks."""

__version__ = "0.1.0"

from .graph import Graph, largest_connected_component, load_edge_list, read_edge_list
from .community import Partition, louvain, modularity
from .centrality import (
    CentralityMap,
    EdgeBetweennessMap,
    Ranking,
    compute_centrality,
    current_flow_edge_betweenness,
    rank_nodes,
)
from .cycles import BasicCycle, CycleBasis, CycleScore, basic_cycles, rank_cycles, score_basis
from .selection import InfluencerSet, select, select_cycrak
from .epidemic import SirParams, epidemic_threshold, sir_influence, sir_run
from .synth import GeneratorSpec, barabasi_albert, erdos_renyi, watts_strogatz

__all__ = [
    "Graph", "largest_connected_component", "load_edge_list", "read_edge_list",
    "Partition", "louvain", "modularity",
    "CentralityMap", "EdgeBetweennessMap", "Ranking", "compute_centrality",
    "current_flow_edge_betweenness", "rank_nodes",
    "BasicCycle", "CycleBasis", "CycleScore", "basic_cycles", "rank_cycles", "score_basis",
    "InfluencerSet", "select", "select_cycrak",
    "SirParams", "epidemic_threshold", "sir_influence", "sir_run",
    "GeneratorSpec", "barabasi_albert", "erdos_renyi", "watts_strogatz",
]
