"""GBS-association sequences: Dijkstra on the coverage graph, exhaustive
simple-path enumeration, and repeat pruning by shortcutting.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .connectivity import CoverageGraph
from .errors import Infeasible, TooManyPaths
from .scenario import Scenario

DEFAULT_MAX_PATHS = 10**7


@dataclass(frozen=True)
class AssociationSequence:
    """Ordered GBS indices (0-based) the UAV is successively associated with."""

    indices: tuple[int, ...]

    def __post_init__(self):
        if len(self.indices) < 1:
            raise ValueError("association sequence must contain at least one GBS")
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))

    def __len__(self) -> int:
        return len(self.indices)

    def serialize(self) -> str:
        """Comma-separated 1-based GBS indices, e.g. ``1,10,11,6,8``."""
        return ",".join(str(i + 1) for i in self.indices)

    @classmethod
    def parse(cls, text: str) -> "AssociationSequence":
        return cls(tuple(int(t) - 1 for t in text.split(",")))

    def feasibility_violations(self, s: Scenario, d_bar: float, tol: float = 0.0) -> list[str]:
        """Structural checks: index range, endpoint reach, consecutive-GBS gaps."""
        out = []
        for i in self.indices:
            if not (0 <= i < s.num_gbs):
                out.append(f"index {i} outside 0..{s.num_gbs - 1}")
        if out:
            return out
        lim = float(d_bar) + tol
        d0 = float(np.linalg.norm(s.u0 - s.gbs[self.indices[0]]))
        if d0 > lim:
            out.append(f"u0 to first GBS distance {d0:.3f} > d_bar")
        df = float(np.linalg.norm(s.uf - s.gbs[self.indices[-1]]))
        if df > lim:
            out.append(f"uF to last GBS distance {df:.3f} > d_bar")
        for a, b in zip(self.indices, self.indices[1:]):
            gap = float(np.linalg.norm(s.gbs[a] - s.gbs[b]))
            if gap > 2.0 * float(d_bar) + tol:
                out.append(f"GBS {a}->{b} gap {gap:.3f} > 2*d_bar")
        return out

    def is_feasible_for(self, s: Scenario, d_bar: float, tol: float = 0.0) -> bool:
        return not self.feasibility_violations(s, d_bar, tol)


def sequence_graph_weight(s: Scenario, seq: AssociationSequence) -> float:
    """Total weight of the sequence's path in the coverage graph:
    ||u0 - g_first|| + sum of consecutive GBS distances + ||uF - g_last||.
    """
    ids = seq.indices
    w = float(np.linalg.norm(s.u0 - s.gbs[ids[0]]))
    for a, b in zip(ids, ids[1:]):
        w += float(np.linalg.norm(s.gbs[a] - s.gbs[b]))
    w += float(np.linalg.norm(s.uf - s.gbs[ids[-1]]))
    return w


def shortest_path_association(g: CoverageGraph) -> AssociationSequence:
    """Minimum-total-weight U0 -> UF path via Dijkstra, as a GBS sequence.

    Neighbor lists are sorted, so equal-cost alternatives resolve to the
    lowest-id predecessor deterministically.
    """
    n = g.num_vertices
    src, dst = g.u0_vertex, g.uf_vertex
    dist = [float("inf")] * n
    pred = [-1] * n
    done = [False] * n
    dist[src] = 0.0
    heap = [(0.0, src)]
    while heap:
        d, v = heapq.heappop(heap)
        if done[v]:
            continue
        done[v] = True
        if v == dst:
            break
        for w, wt in g.adj[v]:
            nd = d + wt
            if nd < dist[w]:
                dist[w] = nd
                pred[w] = v
                heapq.heappush(heap, (nd, w))
    if not done[dst]:
        raise Infeasible("start and goal are not connected in the coverage graph")
    path = []
    v = pred[dst]
    while v != src:
        path.append(v)
        v = pred[v]
    path.reverse()
    return AssociationSequence(tuple(path))


def enumerate_associations(
    g: CoverageGraph, max_paths: int = DEFAULT_MAX_PATHS
) -> list[AssociationSequence]:
    """All simple U0 -> UF paths as GBS sequences, in deterministic DFS order.

    Internal vertices are distinct, matching the repeat-free property of
    optimal sequences. Raises TooManyPaths once more than ``max_paths``
    sequences are found, Infeasible when there are none.
    """
    src, dst = g.u0_vertex, g.uf_vertex
    out: list[AssociationSequence] = []
    on_path = [False] * g.num_vertices
    stack: list[int] = []

    def dfs(v: int):
        for w, _ in g.adj[v]:
            if w == dst:
                if stack:  # no direct U0-UF edge exists, but stay defensive
                    out.append(AssociationSequence(tuple(stack)))
                    if len(out) > max_paths:
                        raise TooManyPaths(
                            f"more than {max_paths} association sequences; raise the cap "
                            f"or reduce the GBS count"
                        )
            elif w != src and not on_path[w]:
                on_path[w] = True
                stack.append(w)
                dfs(w)
                stack.pop()
                on_path[w] = False

    dfs(src)
    if not out:
        raise Infeasible("start and goal are not connected in the coverage graph")
    return out


def prune_repeats(seq: AssociationSequence) -> AssociationSequence:
    """Shortcut repeated indices until all are distinct.

    Whenever the same GBS appears at positions k < q, everything between them
    (and the duplicate itself) is removed; the shortcut never increases the
    optimized path length. Applied leftmost-first, widest span first.
    """
    ids = list(seq.indices)
    i = 0
    while i < len(ids):
        last = max(k for k in range(i, len(ids)) if ids[k] == ids[i])
        if last != i:
            del ids[i + 1 : last + 1]
        i += 1
    return AssociationSequence(tuple(ids))
