"""Independent reference implementations used only by the test suite.

Each oracle deliberately uses a different algorithm from the library code it
checks: union-find instead of BFS, bisection instead of the bottleneck
shortest path, and nested grid search instead of projected gradient descent.
"""
import math

import numpy as np

from cellnav import Scenario, build_graph, is_feasible
from cellnav.handover import project_two_disks


def union_find_feasible(s: Scenario, d_bar: float) -> bool:
    """U0-UF connectivity of the coverage graph via union-find."""
    m = s.num_gbs
    parent = list(range(m + 2))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        parent[find(a)] = find(b)

    u0_v, uf_v = m, m + 1
    for g in range(m):
        if np.linalg.norm(s.gbs[g] - s.u0) <= d_bar:
            union(u0_v, g)
        if np.linalg.norm(s.gbs[g] - s.uf) <= d_bar:
            union(uf_v, g)
    for a in range(m):
        for b in range(a + 1, m):
            if np.linalg.norm(s.gbs[a] - s.gbs[b]) <= 2.0 * d_bar:
                union(a, b)
    return find(u0_v) == find(uf_v)


def bisect_critical_radius(s: Scenario, tol_m: float = 1e-7) -> float:
    """Smallest feasible coverage radius, found by bisection on feasibility."""
    lo, hi = 0.0, 1.0
    while not is_feasible(build_graph(s, hi)):
        hi *= 2.0
        if hi > 1e12:
            raise RuntimeError("no feasible radius below 1e12 m")
    while hi - lo > tol_m:
        mid = (lo + hi) / 2.0
        if mid > 0.0 and is_feasible(build_graph(s, mid)):
            hi = mid
        else:
            lo = mid
    return hi


def _lens_samples(a: np.ndarray, b: np.ndarray, r: float,
                  center: np.ndarray, half: float, n: int) -> np.ndarray:
    """Grid over the box [center +/- half]^2 projected onto the lens of disks
    (a, r) and (b, r); projection keeps every sample feasible while still
    covering the lens boundary, where constrained optima live."""
    xs = np.linspace(center[0] - half, center[0] + half, n)
    ys = np.linspace(center[1] - half, center[1] + half, n)
    gx, gy = np.meshgrid(xs, ys)
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    return np.array([project_two_disks(p, a, b, r) for p in pts])


def nested_grid_handover_oracle(
    s: Scenario, indices: tuple, d_bar: float, levels: int = 9, n: int = 25
) -> float:
    """Global minimum path length for a fixed association sequence.

    Layered dynamic program over grid samples of each handover lens, refined
    around the incumbent solution level by level (box shrink 0.25x). The
    objective is convex, so refinement around the grid optimum converges to
    the global optimum.
    """
    d_bar = float(d_bar)
    u0 = np.asarray(s.u0, dtype=float)
    uf = np.asarray(s.uf, dtype=float)
    pairs = list(zip(indices, indices[1:]))
    if not pairs:
        return float(np.linalg.norm(uf - u0))

    centers = [((s.gbs[a] + s.gbs[b]) / 2.0).astype(float) for a, b in pairs]
    halves = [2.0 * d_bar] * len(pairs)
    best = math.inf
    for _ in range(levels):
        layers = [
            _lens_samples(s.gbs[a], s.gbs[b], d_bar, c, h, n)
            for (a, b), c, h in zip(pairs, centers, halves)
        ]
        # Forward DP: cost[i][j] = shortest u0 -> layers[i][j].
        cost = np.linalg.norm(layers[0] - u0, axis=1)
        back = []
        for prev, cur in zip(layers, layers[1:]):
            d = np.linalg.norm(prev[:, None, :] - cur[None, :, :], axis=2)
            tot = cost[:, None] + d
            arg = tot.argmin(axis=0)
            back.append(arg)
            cost = tot[arg, np.arange(cur.shape[0])]
        final = cost + np.linalg.norm(layers[-1] - uf, axis=1)
        j = int(final.argmin())
        best = min(best, float(final[j]))
        # Recenter each layer's box on the incumbent chain and shrink.
        chain = [j]
        for arg in reversed(back):
            chain.append(int(arg[chain[-1]]))
        chain.reverse()
        centers = [layers[i][chain[i]] for i in range(len(layers))]
        halves = [h * 0.25 for h in halves]
    return best
