"""Coverage graph construction, feasibility check, and maximum attainable SNR target.

Vertices are small ints: GBS m is vertex m (0-based), the start U0 is vertex M,
the goal UF is vertex M + 1. Edge semantics are inclusive: a distance exactly
equal to the threshold (d_bar for endpoint edges, 2*d_bar between GBSs)
produces an edge.
"""
from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import Unreachable
from .scenario import Scenario, linear_to_db


@dataclass(frozen=True, eq=False)
class CoverageGraph:
    """Undirected weighted graph over {GBS_0..GBS_{M-1}, U0, UF}.

    ``adj[v]`` is a tuple of (neighbor, weight_m) pairs sorted by neighbor id,
    which fixes the iteration order of every traversal in this package.
    """

    num_gbs: int
    d_bar: float
    adj: tuple  # tuple[tuple[tuple[int, float], ...], ...]

    @property
    def u0_vertex(self) -> int:
        return self.num_gbs

    @property
    def uf_vertex(self) -> int:
        return self.num_gbs + 1

    @property
    def num_vertices(self) -> int:
        return self.num_gbs + 2

    def edges(self):
        """Yield (v1, v2, weight) with v1 < v2, in sorted order."""
        for v, nbrs in enumerate(self.adj):
            for w, wt in nbrs:
                if v < w:
                    yield v, w, wt

    def vertex_name(self, v: int) -> str:
        if v == self.u0_vertex:
            return "U0"
        if v == self.uf_vertex:
            return "UF"
        return f"G{v + 1}"

    def to_edge_csv(self) -> str:
        """Edge list as CSV ``v1,v2,weight_m`` (debug/visualization dump)."""
        lines = ["v1,v2,weight_m"]
        for v, w, wt in self.edges():
            lines.append(f"{self.vertex_name(v)},{self.vertex_name(w)},{wt:.6f}")
        return "\n".join(lines) + "\n"


def build_graph(s: Scenario, d_bar: float) -> CoverageGraph:
    """Build the coverage graph at radius ``d_bar``.

    An endpoint-GBS edge exists iff the horizontal distance is <= d_bar; a
    GBS-GBS edge iff the distance is <= 2*d_bar. Weights are the Euclidean
    distances. There is never a direct U0-UF edge.
    """
    d_bar = float(d_bar)
    if d_bar <= 0:
        raise ValueError(f"d_bar must be > 0, got {d_bar!r}")
    m = s.num_gbs
    u0_v, uf_v = m, m + 1
    nbrs: list[list[tuple[int, float]]] = [[] for _ in range(m + 2)]

    def add(a, b, w):
        nbrs[a].append((b, w))
        nbrs[b].append((a, w))

    d0 = np.linalg.norm(s.gbs - s.u0, axis=1)
    df = np.linalg.norm(s.gbs - s.uf, axis=1)
    for g in range(m):
        if d0[g] <= d_bar:
            add(u0_v, g, float(d0[g]))
        if df[g] <= d_bar:
            add(uf_v, g, float(df[g]))
    for a in range(m):
        for b in range(a + 1, m):
            w = float(np.linalg.norm(s.gbs[a] - s.gbs[b]))
            if w <= 2.0 * d_bar:
                add(a, b, w)

    adj = tuple(tuple(sorted(n)) for n in nbrs)
    return CoverageGraph(num_gbs=m, d_bar=d_bar, adj=adj)


def is_feasible(g: CoverageGraph) -> bool:
    """True iff a U0 -> UF path exists (breadth-first search from U0)."""
    seen = [False] * g.num_vertices
    seen[g.u0_vertex] = True
    queue = deque([g.u0_vertex])
    while queue:
        v = queue.popleft()
        if v == g.uf_vertex:
            return True
        for w, _ in g.adj[v]:
            if not seen[w]:
                seen[w] = True
                queue.append(w)
    return False


def _bottleneck_critical_radius(s: Scenario) -> float:
    """Minimax coverage radius over all U0 -> UF association paths.

    Edge costs are the radius each hop requires: the endpoint-GBS distance for
    U0/UF edges and half the GBS-GBS distance otherwise. A modified Dijkstra
    minimizes the maximum cost along the path.
    """
    m = s.num_gbs
    if m == 0:
        raise Unreachable("no GBS: start and goal can never be connected")
    u0_v, uf_v = m, m + 1
    d0 = np.linalg.norm(s.gbs - s.u0, axis=1)
    df = np.linalg.norm(s.gbs - s.uf, axis=1)
    gg = np.linalg.norm(s.gbs[:, None, :] - s.gbs[None, :, :], axis=2) / 2.0

    label = [math.inf] * (m + 2)
    label[u0_v] = 0.0
    done = [False] * (m + 2)
    heap = [(0.0, u0_v)]
    while heap:
        lab, v = heapq.heappop(heap)
        if done[v]:
            continue
        done[v] = True
        if v == uf_v:
            return lab
        if v == u0_v:
            costs = ((g, float(d0[g])) for g in range(m))
        else:
            costs = [(g, float(gg[v, g])) for g in range(m) if g != v]
            costs.append((uf_v, float(df[v])))
        for w, c in costs:
            cand = max(lab, c)
            if cand < label[w]:
                label[w] = cand
                heapq.heappush(heap, (cand, w))
    raise Unreachable("no U0 -> UF path even with unbounded radius")


def max_attainable_snr(s: Scenario) -> tuple[float, float]:
    """Supremum SNR target (dB) for which the mission is feasible, and its radius.

    Returns (rho_max_db, critical_d_bar). The critical radius is the bottleneck
    value of the best U0 -> UF path; because edge inclusion is inclusive, the
    mission is still feasible exactly at this radius.
    """
    crit = _bottleneck_critical_radius(s)
    rho_max_db = s.gamma0_db - linear_to_db(crit**2 + s.altitude_gap**2)
    return rho_max_db, crit
