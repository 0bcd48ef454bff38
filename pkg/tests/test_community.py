import numpy as np
import pytest

from cycrak.community import best_single_move_gain, louvain, make_partition, modularity
from cycrak.errors import DomainError
from cycrak.graph import Graph
from cycrak.synth import barabasi_albert, erdos_renyi, watts_strogatz

from conftest import complete, two_cliques_bridged


def set_partitions(n):
    """Restricted growth strings of length n (every set partition once)."""
    def rec(prefix, top):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for c in range(top + 2):
            yield from rec(prefix + [c], max(top, c))
    yield from rec([0], 0)


def brute_best(g):
    edges = np.array(list(g.edges()))
    deg = g.degrees.astype(float)
    m = g.m
    best, arg = -1.0, None
    for a in set_partitions(g.n):
        comm = np.array(a)
        inside = comm[edges[:, 0]] == comm[edges[:, 1]]
        e_c = np.bincount(comm[edges[inside, 0]], minlength=comm.max() + 1)
        d_c = np.bincount(comm, weights=deg)
        q = np.sum(e_c / m - (d_c / (2 * m)) ** 2)
        if q > best + 1e-12:
            best, arg = q, a
    return best, arg


class TestModularity:
    def test_single_edge(self):
        g = Graph(2, [(0, 1)])
        assert modularity(g, [0, 0]) == 0
        assert modularity(g, [0, 1]) == pytest.approx(-0.5)

    def test_all_in_one_is_zero(self):
        g = barabasi_albert(50, 2, 1)
        assert modularity(g, [0] * g.n) == pytest.approx(0, abs=1e-15)

    def test_missing_node(self):
        with pytest.raises(DomainError):
            modularity(Graph(3, [(0, 1)]), [0, 0])


class TestLouvain:
    def test_two_cliques_match_exhaustive_search(self):
        g = two_cliques_bridged(5)
        q_best, arg = brute_best(g)
        p = louvain(g, seed=3)
        assert p.assignment == tuple(arg) == (0,) * 5 + (1,) * 5
        assert p.q == pytest.approx(q_best, abs=1e-12)

    def test_triangle(self):
        assert louvain(complete(3)).assignment == (0, 0, 0)

    def test_k2(self):
        p = louvain(Graph(2, [(0, 1)]))
        assert p.assignment == (0, 0) and p.q == 0

    @pytest.mark.parametrize("g", [
        barabasi_albert(300, 3, 5),
        watts_strogatz(200, 6, 0.1, 2),
        erdos_renyi(150, 0.05, 9),
    ], ids=["ba", "ws", "er"])
    def test_properties(self, g):
        p = louvain(g, seed=11)
        assert p.q >= 0
        assert p.q == pytest.approx(modularity(g, p.assignment), abs=1e-12)
        assert sorted(set(p.assignment)) == list(range(p.n_communities))
        assert best_single_move_gain(g, p) <= 1e-9
        assert louvain(g, seed=11) == p

    def test_make_partition_relabels(self):
        p = make_partition(Graph(3, [(0, 1), (1, 2)]), [7, 7, 2])
        assert p.assignment == (0, 0, 1)
