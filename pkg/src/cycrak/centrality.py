"""Node centralities, current-flow edge betweenness and node ranking."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph
from scipy.sparse.linalg import splu

from .errors import ConvergenceError, DisconnectedError, DomainError, NumericalError
from .graph import Graph, is_connected

KINDS = ("DC", "HC", "LC", "CI", "EC", "CC")

EC_TOL = 1e-10
EC_MAX_ITER = 100_000
CF_TOL = 1e-10
SAMPLED_MODE_MIN_NODES = 5000


@dataclass(frozen=True)
class CentralityMap:
    kind: str
    values: np.ndarray
    params: dict = field(default_factory=dict)

    def __getitem__(self, node: int) -> float:
        return float(self.values[node])

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class Ranking:
    """Nodes by descending score; equal scores keep ascending id order."""

    order: tuple[int, ...]
    scores: np.ndarray
    kind: str = ""
    tie_rule: str = "descending score, ties by ascending node id"

    def __len__(self) -> int:
        return len(self.order)

    def __iter__(self):
        return iter(self.order)


def _require_connected(g: Graph, what: str) -> None:
    if not is_connected(g):
        raise DisconnectedError(f"{what} requires a connected graph")


def degree_centrality(g: Graph) -> CentralityMap:
    return CentralityMap("DC", g.degrees.astype(float))


def h_index(values) -> int:
    """Largest h such that at least h of ``values`` are >= h."""
    vals = sorted(values, reverse=True)
    h = 0
    for i, v in enumerate(vals, start=1):
        if v >= i:
            h = i
        else:
            break
    return h


def h_index_centrality(g: Graph) -> CentralityMap:
    deg = g.degrees
    vals = np.array([h_index(deg[list(g.neighbors(i))]) for i in range(g.n)], dtype=float)
    return CentralityMap("HC", vals)


def two_hop_counts(g: Graph) -> np.ndarray:
    """Number of distinct nodes within distance 2 of each node, itself excluded."""
    a = g.adjacency_matrix()
    reach = (a @ a + a).tocsr()
    reach.setdiag(0)
    reach.eliminate_zeros()
    return np.diff(reach.indptr).astype(float)


def semi_local_centrality(g: Graph) -> CentralityMap:
    a = g.adjacency_matrix()
    n_u = two_hop_counts(g)
    q = a @ n_u
    return CentralityMap("LC", a @ q)


def collective_influence(g: Graph, radius: int = 2) -> CentralityMap:
    if radius < 1:
        raise DomainError("collective influence radius must be >= 1")
    deg = g.degrees
    vals = np.zeros(g.n)
    for i in range(g.n):
        if deg[i] <= 1:
            continue
        seen = {i}
        frontier = [i]
        for _ in range(radius):
            nxt = []
            for u in frontier:
                for v in g.neighbors(u):
                    if v not in seen:
                        seen.add(v)
                        nxt.append(v)
            frontier = nxt
        vals[i] = (deg[i] - 1) * sum(int(deg[j]) - 1 for j in frontier)
    return CentralityMap("CI", vals, {"l": radius})


def eigenvector_centrality(g: Graph, tol: float = EC_TOL, max_iter: int = EC_MAX_ITER) -> CentralityMap:
    """Principal eigenvector of the adjacency matrix, unit Euclidean norm.

    Power iteration runs on ``A + I`` (same eigenvectors, and the shift
    removes the +/-lambda oscillation on bipartite graphs) from a uniform
    start. Iteration stops once the max-norm change between iterates times
    ``1 + lambda`` drops below ``tol``, which bounds the residual
    ``|A q - lambda q|`` by roughly ``tol``.
    """
    _require_connected(g, "eigenvector centrality")
    if g.n == 1:
        return CentralityMap("EC", np.ones(1), {"tol": tol})
    a = g.adjacency_matrix()
    x = np.full(g.n, 1.0 / math.sqrt(g.n))
    for _ in range(max_iter):
        y = a @ x + x
        norm = np.linalg.norm(y)
        y /= norm
        diff = np.max(np.abs(y - x))
        x = y
        if diff * norm < tol:
            break
    else:
        raise ConvergenceError(f"power iteration did not converge in {max_iter} steps")
    x = np.abs(x)
    return CentralityMap("EC", x / np.linalg.norm(x), {"tol": tol, "max_iter": max_iter})


def closeness_centrality(g: Graph, block: int = 512) -> CentralityMap:
    """Harmonic closeness ``(1/(N-1)) * sum_j 1/d_ij``."""
    _require_connected(g, "closeness centrality")
    if g.n == 1:
        return CentralityMap("CC", np.zeros(1))
    a = g.adjacency_matrix()
    vals = np.empty(g.n)
    for lo in range(0, g.n, block):
        idx = np.arange(lo, min(lo + block, g.n))
        dist = csgraph.shortest_path(a, method="D", unweighted=True, indices=idx)
        with np.errstate(divide="ignore"):
            inv = 1.0 / dist
        inv[np.arange(len(idx)), idx] = 0.0
        vals[idx] = inv.sum(axis=1)
    return CentralityMap("CC", vals / (g.n - 1))


def compute_centrality(g: Graph, kind: str, ci_radius: int = 2) -> CentralityMap:
    kind = kind.upper()
    if kind == "DC":
        return degree_centrality(g)
    if kind == "HC":
        return h_index_centrality(g)
    if kind == "LC":
        return semi_local_centrality(g)
    if kind == "CI":
        return collective_influence(g, ci_radius)
    if kind == "EC":
        return eigenvector_centrality(g)
    if kind == "CC":
        return closeness_centrality(g)
    raise DomainError(f"unknown centrality {kind!r}; expected one of {KINDS}")


def rank_nodes(c: CentralityMap) -> Ranking:
    vals = np.asarray(c.values, dtype=float)
    ids = np.arange(len(vals))
    order = np.lexsort((ids, -vals))
    return Ranking(tuple(int(v) for v in order), vals, c.kind)


# --- current-flow edge betweenness -------------------------------------


@dataclass(frozen=True)
class EdgeBetweennessMap:
    """Per-edge current-flow betweenness; ``edges[i] = (u, v)`` with ``u < v``."""

    edges: np.ndarray
    values: np.ndarray
    mode: str = "exact"

    def __post_init__(self):
        lookup = {(int(u), int(v)): i for i, (u, v) in enumerate(self.edges)}
        object.__setattr__(self, "_lookup", lookup)

    def __getitem__(self, edge) -> float:
        u, v = edge
        key = (u, v) if u < v else (v, u)
        try:
            return float(self.values[self._lookup[key]])
        except KeyError:
            raise DomainError(f"({u}, {v}) is not an edge") from None

    def __len__(self) -> int:
        return len(self.values)

    def as_dict(self) -> dict[tuple[int, int], float]:
        return {(int(u), int(v)): float(x) for (u, v), x in zip(self.edges, self.values)}


def laplacian(g: Graph) -> sparse.csr_matrix:
    a = g.adjacency_matrix()
    return (sparse.diags(g.degrees.astype(float)) - a).tocsr()


def _block_pcg(a, b, tol, max_iter):
    """Jacobi-preconditioned CG run column-wise in lockstep on ``a x = b``."""
    minv = 1.0 / a.diagonal()
    x = np.zeros_like(b)
    r = b.copy()
    bnorm = np.linalg.norm(b, axis=0)
    bnorm[bnorm == 0] = 1.0
    z = minv[:, None] * r
    p = z.copy()
    rz = np.einsum("ij,ij->j", r, z)
    active = np.arange(b.shape[1])
    for _ in range(max_iter):
        ap = a @ p
        alpha = rz / np.einsum("ij,ij->j", p, ap)
        x[:, active] += alpha * p
        r -= alpha * ap
        rnorm = np.linalg.norm(r, axis=0)
        keep = rnorm > tol * bnorm[active]
        if not keep.any():
            break
        active, r, p, rz = active[keep], r[:, keep], p[:, keep], rz[keep]
        z = minv[:, None] * r
        rz_new = np.einsum("ij,ij->j", r, z)
        p = z + (rz_new / rz) * p
        rz = rz_new
    return x


def _grounded_solve(lg, rhs, tol, solver, max_iter=None):
    """Solve the grounded Laplacian system and enforce the residual bound."""
    if solver == "direct":
        x = splu(lg.tocsc()).solve(rhs)
    elif solver == "cg":
        max_iter = max_iter or 10 * lg.shape[0] + 100
        x = _block_pcg(lg, rhs, tol, max_iter)
        # iterative refinement on the true residual
        for _ in range(5):
            res = rhs - lg @ x
            bad = np.linalg.norm(res, axis=0) > tol * np.maximum(np.linalg.norm(rhs, axis=0), 1.0)
            if not bad.any():
                break
            x[:, bad] += _block_pcg(lg, res[:, bad], tol, max_iter)
    else:
        raise DomainError(f"unknown solver {solver!r}")
    res = np.linalg.norm(rhs - lg @ x, axis=0)
    bound = tol * np.maximum(np.linalg.norm(rhs, axis=0), 1.0)
    if np.any(res > bound):
        raise NumericalError(f"Laplacian solve residual {res.max():.3e} exceeds {tol:.1e}")
    return x


def grounded_inverse(g: Graph, tol: float = CF_TOL, solver: str = "cg", block: int = 512) -> np.ndarray:
    """Dense ``n x n`` inverse of the Laplacian grounded at node 0.

    Row and column 0 are zero; for any pair ``(s, t)`` the node potentials
    under unit current injected at ``s`` and extracted at ``t`` are
    ``C[:, s] - C[:, t]``.
    """
    n = g.n
    lg = laplacian(g)[1:, 1:].tocsr()
    c = np.zeros((n, n))
    for lo in range(0, n - 1, block):
        hi = min(lo + block, n - 1)
        rhs = np.zeros((n - 1, hi - lo))
        rhs[np.arange(lo, hi), np.arange(hi - lo)] = 1.0
        c[1:, 1 + lo:1 + hi] = _grounded_solve(lg, rhs, tol, solver)
    return c


def pair_currents(g: Graph, s: int, t: int, tol: float = CF_TOL) -> dict[tuple[int, int], float]:
    """Signed current on each edge ``(u, v)``, ``u < v``, for a unit s-t flow (u -> v positive)."""
    _require_connected(g, "current flow")
    g.check_node(s)
    g.check_node(t)
    lg = laplacian(g)[1:, 1:].tocsr()
    rhs = np.zeros((g.n, 1))
    rhs[s, 0] += 1.0
    rhs[t, 0] -= 1.0
    pot = np.zeros(g.n)
    pot[1:] = _grounded_solve(lg, rhs[1:], tol, "direct")[:, 0]
    return {(u, v): float(pot[u] - pot[v]) for u, v in g.edges()}


def _sum_abs_pair_diffs(f: np.ndarray) -> np.ndarray:
    """Row-wise sum over unordered column pairs of ``|f[s] - f[t]|``."""
    n = f.shape[1]
    w = 2.0 * np.arange(n) - n + 1
    return np.sort(f, axis=1) @ w


def current_flow_edge_betweenness(
    g: Graph,
    *,
    mode: str = "exact",
    n_pairs: int = 20000,
    seed: int = 0,
    tol: float = CF_TOL,
    solver: str = "cg",
    block: int = 1024,
) -> EdgeBetweennessMap:
    """Current-flow (random-walk) betweenness of every edge.

    ``eta_e = sum over unordered pairs {s, t} of |current through e|``,
    normalised by ``(N-1)(N-2)``. In exact mode the pair sum is evaluated per
    edge by sorting the edge's potential-difference row. ``mode="sampled"``
    estimates the pair sum from ``n_pairs`` uniformly drawn pairs.
    """
    _require_connected(g, "current-flow betweenness")
    n = g.n
    if n < 3:
        raise DomainError("current-flow betweenness needs at least 3 nodes")
    edges = np.array(list(g.edges()), dtype=np.int64).reshape(-1, 2)
    norm = (n - 1) * (n - 2)
    if mode == "exact":
        c = grounded_inverse(g, tol, solver)
        totals = np.empty(len(edges))
        for lo in range(0, len(edges), block):
            e = edges[lo:lo + block]
            totals[lo:lo + block] = _sum_abs_pair_diffs(c[e[:, 0]] - c[e[:, 1]])
    elif mode == "sampled":
        rng = np.random.default_rng(seed)
        s = rng.integers(0, n, size=n_pairs)
        t = (s + rng.integers(1, n, size=n_pairs)) % n
        lg = laplacian(g)[1:, 1:].tocsr()
        totals = np.zeros(len(edges))
        for lo in range(0, n_pairs, block):
            ss, tt = s[lo:lo + block], t[lo:lo + block]
            rhs = np.zeros((n, len(ss)))
            cols = np.arange(len(ss))
            rhs[ss, cols] += 1.0
            rhs[tt, cols] -= 1.0
            pot = np.zeros((n, len(ss)))
            pot[1:] = _grounded_solve(lg, rhs[1:], tol, solver)
            totals += np.abs(pot[edges[:, 0]] - pot[edges[:, 1]]).sum(axis=1)
        totals *= (n * (n - 1) / 2) / n_pairs
    else:
        raise DomainError(f"unknown mode {mode!r}")
    return EdgeBetweennessMap(edges, totals / norm, mode)
