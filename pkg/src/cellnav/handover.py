"""Handover-point placement: fixed-association convex subproblem.

Given an association sequence, each interior handover point must lie in the
lens-shaped intersection of the two coverage disks of its adjacent GBSs, and
the objective is the total polyline length from start to goal. The solver is
projected gradient descent on a smoothed objective with a decreasing-epsilon
continuation schedule; projection onto a two-disk intersection is exact 2D
geometry (no iterative alternating projections needed).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .association import AssociationSequence
from .errors import DegenerateSequence
from .scenario import Scenario


@dataclass(frozen=True)
class SolverConfig:
    """Projected-gradient solver knobs.

    Epsilon values are fractions of d_bar; the schedule must be strictly
    decreasing and end at or below the constraint tolerance scale. The
    gradient phase is followed by a cyclic per-point polish that minimizes
    each handover point exactly against its fixed neighbors.
    """

    eps_fractions: tuple[float, ...] = (1e-2, 1e-4, 1e-6)
    max_iterations: int = 400  # per continuation stage
    initial_step_fraction: float = 0.5  # times d_bar
    step_shrink: float = 0.5
    step_grow: float = 1.25
    rel_obj_tol: float = 1e-12  # per-iteration decrease threshold
    polish_sweeps: int = 200
    polish_abs_tol: float = 1e-10  # metres of decrease per polish sweep
    constraint_tol_fraction: float = 1e-6

    def __post_init__(self):
        eps = self.eps_fractions
        if not eps or any(e <= 0 for e in eps) or any(later >= prev for later, prev in zip(eps[1:], eps)):
            raise ValueError("eps_fractions must be positive and strictly decreasing")
        if eps[-1] > self.constraint_tol_fraction:
            raise ValueError("final smoothing eps must not exceed the constraint tolerance")


DEFAULT_SOLVER_CONFIG = SolverConfig()

# Cheaper settings for inner search loops that only rank candidate sequences;
# final answers should be re-solved with DEFAULT_SOLVER_CONFIG.
FAST_SOLVER_CONFIG = SolverConfig(
    max_iterations=120, rel_obj_tol=1e-9, polish_sweeps=40, polish_abs_tol=1e-8
)


@dataclass(frozen=True, eq=False)
class HandoverRegion:
    """Intersection of two radius-``radius`` disks; non-empty by construction."""

    center_a: np.ndarray
    center_b: np.ndarray
    radius: float

    def __post_init__(self):
        a = np.asarray(self.center_a, dtype=float).reshape(2)
        b = np.asarray(self.center_b, dtype=float).reshape(2)
        object.__setattr__(self, "center_a", a)
        object.__setattr__(self, "center_b", b)
        if np.linalg.norm(a - b) > 2.0 * self.radius:
            raise ValueError("disk centers farther apart than 2*radius: empty intersection")

    def contains(self, p, tol: float = 0.0) -> bool:
        p = np.asarray(p, dtype=float)
        lim = self.radius + tol
        return (
            np.linalg.norm(p - self.center_a) <= lim
            and np.linalg.norm(p - self.center_b) <= lim
        )

    def project(self, p) -> np.ndarray:
        return project_two_disks(np.asarray(p, dtype=float), self.center_a, self.center_b, self.radius)


def _project_disk(p: np.ndarray, c: np.ndarray, r: float) -> np.ndarray:
    d = p - c
    n = float(np.hypot(d[0], d[1]))
    if n <= r:
        return p
    return c + d * (r / n)


def project_two_disks(p: np.ndarray, a: np.ndarray, b: np.ndarray, r: float) -> np.ndarray:
    """Euclidean projection of ``p`` onto the intersection of two equal-radius disks.

    The projection lies either at ``p`` itself, on one disk boundary (the
    single-disk projection, when it stays inside the other disk), or at one of
    the two circle-circle intersection corners.
    """
    pa = _project_disk(p, a, r)
    if float(np.linalg.norm(pa - b)) <= r:
        return pa
    pb = _project_disk(p, b, r)
    if float(np.linalg.norm(pb - a)) <= r:
        return pb
    # Lens corner: equal radii, so corners sit on the perpendicular bisector.
    ab = b - a
    d = float(np.hypot(ab[0], ab[1]))
    mid = (a + b) / 2.0
    h = math.sqrt(max(r * r - (d / 2.0) ** 2, 0.0))  # clamp: touching disks
    if d == 0.0:
        return pa  # identical disks; single-disk projection was already valid
    n = np.array([-ab[1], ab[0]]) / d
    c1 = mid + h * n
    c2 = mid - h * n
    return c1 if float(np.linalg.norm(p - c1)) <= float(np.linalg.norm(p - c2)) else c2


@dataclass(frozen=True, eq=False)
class HandoverSolution:
    """Waypoints [u^0 .. u^N] (endpoints fixed) with the resulting polyline length."""

    points: np.ndarray  # (N + 1, 2)
    objective: float
    converged: bool
    iterations: int

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)


def polyline_length(points: np.ndarray) -> float:
    d = np.diff(np.asarray(points, dtype=float), axis=0)
    return float(np.sqrt((d * d).sum(axis=1)).sum())


def handover_regions(
    s: Scenario, seq: AssociationSequence, d_bar: float
) -> list[HandoverRegion]:
    ids = seq.indices
    return [
        HandoverRegion(s.gbs[a], s.gbs[b], float(d_bar))
        for a, b in zip(ids, ids[1:])
    ]


def feasible_handover_points(
    s: Scenario, seq: AssociationSequence, d_bar: float
) -> HandoverSolution:
    """Closed-form feasible handover points.

    Each interior point sits on the segment between its two GBSs at distance
    min(d_bar, gap) from the earlier one; by the gap condition it is inside
    both disks, and the clamp keeps the telescoping triangle-inequality
    argument valid, so the construction never exceeds the sequence's total
    graph weight.
    """
    ids = seq.indices
    d_bar = float(d_bar)
    pts = [np.asarray(s.u0, dtype=float)]
    for a, b in zip(ids, ids[1:]):
        if a == b:
            raise DegenerateSequence(
                f"consecutive equal GBS index {a}; run prune_repeats first"
            )
        diff = s.gbs[b] - s.gbs[a]
        gap = float(np.linalg.norm(diff))
        pts.append(s.gbs[a] + min(d_bar, gap) * diff / gap)
    pts.append(np.asarray(s.uf, dtype=float))
    pts = np.array(pts)
    return HandoverSolution(
        points=pts, objective=polyline_length(pts), converged=True, iterations=0
    )


def _smoothed_objective(pts: np.ndarray, eps: float) -> float:
    d = np.diff(pts, axis=0)
    return float(np.sqrt((d * d).sum(axis=1) + eps * eps).sum())


def _interior_gradient(pts: np.ndarray, eps: float) -> np.ndarray:
    d = np.diff(pts, axis=0)  # (N, 2)
    slen = np.sqrt((d * d).sum(axis=1) + eps * eps)[:, None]
    unit = d / slen
    return unit[:-1] - unit[1:]  # gradient w.r.t. pts[1:-1]


def _project_interiors(x: np.ndarray, a: np.ndarray, b: np.ndarray, r: float) -> np.ndarray:
    """Row-wise projection of ``x[i]`` onto the lens of disks ``a[i]``/``b[i]``."""
    da = x - a
    na = np.linalg.norm(da, axis=1)
    safe_a = np.maximum(na, 1e-300)
    pa = np.where((na <= r)[:, None], x, a + da * (r / safe_a)[:, None])
    ok_a = np.linalg.norm(pa - b, axis=1) <= r
    db = x - b
    nb = np.linalg.norm(db, axis=1)
    safe_b = np.maximum(nb, 1e-300)
    pb = np.where((nb <= r)[:, None], x, b + db * (r / safe_b)[:, None])
    ok_b = np.linalg.norm(pb - a, axis=1) <= r
    out = np.where(ok_a[:, None], pa, np.where(ok_b[:, None], pb, 0.0))
    corner = ~(ok_a | ok_b)
    if corner.any():
        ab = (b - a)[corner]
        gap = np.linalg.norm(ab, axis=1)
        mid = (a[corner] + b[corner]) / 2.0
        h = np.sqrt(np.maximum(r * r - (gap / 2.0) ** 2, 0.0))
        n = np.stack([-ab[:, 1], ab[:, 0]], axis=1) / np.maximum(gap, 1e-300)[:, None]
        c_hi = mid + h[:, None] * n
        c_lo = mid - h[:, None] * n
        xc = x[corner]
        pick_hi = np.linalg.norm(xc - c_hi, axis=1) <= np.linalg.norm(xc - c_lo, axis=1)
        out[corner] = np.where(pick_hi[:, None], c_hi, c_lo)
    return out


def _segment_disk_interval(ax, ay, dx, dy, cx, cy, r):
    """Parameter interval of ``a + t*d`` inside the disk ``(c, r)``, or None."""
    qx = ax - cx
    qy = ay - cy
    qa = dx * dx + dy * dy
    qb = 2.0 * (qx * dx + qy * dy)
    qc = qx * qx + qy * qy - r * r
    if qa <= 0.0:
        return (0.0, 1.0) if qc <= 0.0 else None
    disc = qb * qb - 4.0 * qa * qc
    if disc < 0.0:
        return None
    sq = math.sqrt(disc)
    return ((-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa))


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _arc_min(ax, ay, bx, by, cx, cy, ox, oy, r):
    """Minimize |x-a|+|x-b| for x on the arc of circle (c, r) inside disk (o, r).

    The arc runs between the two lens corners; golden-section search after a
    coarse scan. Returns ``(value, x, y)``.
    """
    ocx = ox - cx
    ocy = oy - cy
    gap = math.hypot(ocx, ocy)
    half = math.sqrt(max(r * r - 0.25 * gap * gap, 0.0))
    midx = (cx + ox) / 2.0
    midy = (cy + oy) / 2.0
    nx = -ocy / gap
    ny = ocx / gap
    th1 = math.atan2(midy + half * ny - cy, midx + half * nx - cx)
    th2 = math.atan2(midy - half * ny - cy, midx - half * nx - cx)
    thm = math.atan2(ocy, ocx)
    span = (th2 - th1) % (2.0 * math.pi)
    if (thm - th1) % (2.0 * math.pi) > span:
        th1, th2 = th2, th1
        span = (th2 - th1) % (2.0 * math.pi)

    def value(th):
        x = cx + r * math.cos(th)
        y = cy + r * math.sin(th)
        return math.hypot(x - ax, y - ay) + math.hypot(x - bx, y - by)

    samples = 17
    best_j = 0
    best_v = math.inf
    for j in range(samples):
        v = value(th1 + span * j / (samples - 1))
        if v < best_v:
            best_v = v
            best_j = j
    lo = th1 + span * max(best_j - 1, 0) / (samples - 1)
    hi = th1 + span * min(best_j + 1, samples - 1) / (samples - 1)
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1 = value(x1)
    f2 = value(x2)
    while hi - lo > 1e-14:
        if f1 < f2:
            hi = x2
            x2 = x1
            f2 = f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = value(x1)
        else:
            lo = x1
            x1 = x2
            f1 = f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = value(x2)
    th = (lo + hi) / 2.0
    return value(th), cx + r * math.cos(th), cy + r * math.sin(th)


def _point_solve(ax, ay, bx, by, c1x, c1y, c2x, c2y, r, px, py):
    """Exact minimizer of |x-a|+|x-b| over one lens.

    When the segment ``a-b`` crosses the lens the optimum is any crossing
    point; the one nearest to the current position ``p`` is chosen so that a
    cyclic sweep is non-expansive. Otherwise the optimum lies on the lens
    boundary (an arc of either circle, or a corner).
    """
    dx = bx - ax
    dy = by - ay
    dd = dx * dx + dy * dy
    if dd > 0.0:
        i1 = _segment_disk_interval(ax, ay, dx, dy, c1x, c1y, r)
        i2 = _segment_disk_interval(ax, ay, dx, dy, c2x, c2y, r)
        if i1 is not None and i2 is not None:
            lo = max(i1[0], i2[0], 0.0)
            hi = min(i1[1], i2[1], 1.0)
            if lo <= hi:
                t = ((px - ax) * dx + (py - ay) * dy) / dd
                t = min(max(t, lo), hi)
                return ax + t * dx, ay + t * dy
        v1, x1, y1 = _arc_min(ax, ay, bx, by, c1x, c1y, c2x, c2y, r)
        v2, x2, y2 = _arc_min(ax, ay, bx, by, c2x, c2y, c1x, c1y, r)
        return (x1, y1) if v1 <= v2 else (x2, y2)
    return _project_lens_scalar(ax, ay, c1x, c1y, c2x, c2y, r)


def _project_lens_scalar(px, py, ax, ay, bx, by, r):
    """Scalar twin of :func:`project_two_disks` (hot path, no arrays)."""
    dax = px - ax
    day = py - ay
    na = math.hypot(dax, day)
    if na <= r:
        qx, qy = px, py
    else:
        f = r / na
        qx = ax + dax * f
        qy = ay + day * f
    if math.hypot(qx - bx, qy - by) <= r:
        return qx, qy
    dbx = px - bx
    dby = py - by
    nb = math.hypot(dbx, dby)
    if nb <= r:
        qx, qy = px, py
    else:
        f = r / nb
        qx = bx + dbx * f
        qy = by + dby * f
    if math.hypot(qx - ax, qy - ay) <= r:
        return qx, qy
    abx = bx - ax
    aby = by - ay
    gap = math.hypot(abx, aby)
    if gap == 0.0:
        return qx, qy
    midx = (ax + bx) / 2.0
    midy = (ay + by) / 2.0
    h = math.sqrt(max(r * r - 0.25 * gap * gap, 0.0))
    nx = -aby / gap * h
    ny = abx / gap * h
    c1x = midx + nx
    c1y = midy + ny
    c2x = midx - nx
    c2y = midy - ny
    d1 = (px - c1x) ** 2 + (py - c1y) ** 2
    d2 = (px - c2x) ** 2 + (py - c2y) ** 2
    return (c1x, c1y) if d1 <= d2 else (c2x, c2y)


def _gradient_phase(
    points: list, centers: list, d_bar: float, cfg: SolverConfig
) -> tuple[list, int, bool]:
    """Accelerated projected gradient on the smoothed objective (continuation).

    Operates on plain float pairs: the point counts are tiny (a handful of
    handovers), where scalar arithmetic beats array dispatch by an order of
    magnitude.
    """
    k = len(centers)
    u0 = points[0]
    uf = points[-1]
    total_iters = 0
    converged = True

    def f_only(xs, eps2):
        total = 0.0
        prev = u0
        for p in xs:
            total += math.sqrt((p[0] - prev[0]) ** 2 + (p[1] - prev[1]) ** 2 + eps2)
            prev = p
        return total + math.sqrt((uf[0] - prev[0]) ** 2 + (uf[1] - prev[1]) ** 2 + eps2)

    def f_and_grad(xs, eps2):
        # Segment i runs from chain point i to i+1; the gradient w.r.t. an
        # interior point is the difference of adjacent unit segment vectors.
        total = 0.0
        prev = u0
        units = []
        for p in xs:
            dx = p[0] - prev[0]
            dy = p[1] - prev[1]
            slen = math.sqrt(dx * dx + dy * dy + eps2)
            total += slen
            units.append((dx / slen, dy / slen))
            prev = p
        dx = uf[0] - prev[0]
        dy = uf[1] - prev[1]
        slen = math.sqrt(dx * dx + dy * dy + eps2)
        total += slen
        units.append((dx / slen, dy / slen))
        grad = [
            (units[i][0] - units[i + 1][0], units[i][1] - units[i + 1][1])
            for i in range(k)
        ]
        return total, grad

    def project_step(ys, grad, step):
        out = []
        for (yx, yy), (gx, gy), (ax, ay, bx, by) in zip(ys, grad, centers):
            out.append(
                _project_lens_scalar(yx - step * gx, yy - step * gy, ax, ay, bx, by, d_bar)
            )
        return out

    x = list(points[1:-1])
    for frac in cfg.eps_fractions:
        eps2 = (frac * d_bar) ** 2
        step = cfg.initial_step_fraction * d_bar
        y = list(x)
        momentum = 1.0
        f_x = f_only(x, eps2)
        stage_converged = False
        for _ in range(cfg.max_iterations):
            total_iters += 1
            f_y, grad = f_and_grad(y, eps2)
            while True:
                trial = project_step(y, grad, step)
                f_trial = f_only(trial, eps2)
                model = f_y
                quad = 0.0
                for (tx, ty), (yx, yy), (gx, gy) in zip(trial, y, grad):
                    dx = tx - yx
                    dy = ty - yy
                    model += gx * dx + gy * dy
                    quad += dx * dx + dy * dy
                model += quad / (2.0 * step)
                if f_trial <= model + 1e-13 * abs(f_y) or step < 1e-16 * d_bar:
                    break
                step *= cfg.step_shrink
            if f_trial > f_x:
                # Momentum overshot: restart from the best iterate.
                y = list(x)
                momentum = 1.0
                step *= cfg.step_shrink
                if step < 1e-15 * d_bar:
                    stage_converged = True
                    break
                continue
            momentum_next = (1.0 + math.sqrt(1.0 + 4.0 * momentum * momentum)) / 2.0
            beta = (momentum - 1.0) / momentum_next
            y = [
                (tx + beta * (tx - xx), ty + beta * (ty - xy))
                for (tx, ty), (xx, xy) in zip(trial, x)
            ]
            x = trial
            momentum = momentum_next
            step *= cfg.step_grow
            decrease = f_x - f_trial
            f_x = f_trial
            if decrease < cfg.rel_obj_tol * max(1.0, f_x):
                stage_converged = True
                break
        if not stage_converged:
            converged = False
    return [u0, *x, uf], total_iters, converged


def _chain_length(p: list) -> float:
    return sum(
        math.hypot(p[i + 1][0] - p[i][0], p[i + 1][1] - p[i][1])
        for i in range(len(p) - 1)
    )


def _polish_phase(
    points: list, centers: list, d_bar: float, cfg: SolverConfig
) -> tuple[list, int, bool]:
    """Cyclic exact per-point minimization until sweep decrease stalls."""
    p = list(points)
    n = len(centers)
    prev = _chain_length(p)
    converged = False
    sweeps = 0
    # A point is only re-solved when a neighbor has moved since its last
    # solve; as the chain settles, sweeps become nearly free.
    seen: list = [None] * n
    move_tol = 1e-13 * d_bar
    for sweeps in range(1, cfg.polish_sweeps + 1):
        for i in range(n):
            ax, ay = p[i]
            bx, by = p[i + 2]
            last = seen[i]
            if last is not None and (
                abs(ax - last[0]) < move_tol
                and abs(ay - last[1]) < move_tol
                and abs(bx - last[2]) < move_tol
                and abs(by - last[3]) < move_tol
            ):
                continue
            c1x, c1y, c2x, c2y = centers[i]
            p[i + 1] = _point_solve(ax, ay, bx, by, c1x, c1y, c2x, c2y, d_bar, *p[i + 1])
            seen[i] = (ax, ay, bx, by)
        cur = _chain_length(p)
        if prev - cur < cfg.polish_abs_tol:
            converged = True
            break
        prev = cur
    return p, sweeps, converged


def optimize_handovers(
    s: Scenario,
    seq: AssociationSequence,
    d_bar: float,
    cfg: SolverConfig = DEFAULT_SOLVER_CONFIG,
) -> HandoverSolution:
    """Minimize total polyline length over the handover-point lens regions.

    Projected gradient descent (with momentum and backtracking) on a smoothed
    objective under a decreasing-epsilon continuation schedule, followed by a
    cyclic exact per-point polish. Every iterate is feasible, and the result
    never exceeds the closed-form feasible construction it starts from.
    """
    init = feasible_handover_points(s, seq, d_bar)
    n_seg = len(seq)
    if n_seg == 1:
        return init

    d_bar = float(d_bar)
    ids = seq.indices
    gbs = s.gbs
    centers = [
        (float(gbs[a][0]), float(gbs[a][1]), float(gbs[b][0]), float(gbs[b][1]))
        for a, b in zip(ids, ids[1:])
    ]
    u0 = (float(s.u0[0]), float(s.u0[1]))
    uf = (float(s.uf[0]), float(s.uf[1]))

    best_pts = [(float(p[0]), float(p[1])) for p in init.points]
    best_obj = init.objective

    # Second initial guess: the straight start-goal chord projected into the
    # lens chain. Keep whichever of the two is shorter.
    k = n_seg - 1
    alt = [u0]
    for i, (ax, ay, bx, by) in enumerate(centers, start=1):
        t = i / n_seg
        alt.append(
            _project_lens_scalar(
                u0[0] + t * (uf[0] - u0[0]),
                u0[1] + t * (uf[1] - u0[1]),
                ax, ay, bx, by, d_bar,
            )
        )
    alt.append(uf)
    alt_obj = _chain_length(alt)
    if alt_obj < best_obj:
        best_obj = alt_obj
        best_pts = alt

    if k == 1:
        # One handover point: the cyclic polish solves it exactly in one pass.
        grad_iters, grad_converged = 0, True
    else:
        pts, grad_iters, grad_converged = _gradient_phase(best_pts, centers, d_bar, cfg)
        obj = _chain_length(pts)
        if obj < best_obj:
            best_obj = obj
            best_pts = pts
    pts, sweeps, polish_converged = _polish_phase(best_pts, centers, d_bar, cfg)
    obj = _chain_length(pts)
    if obj < best_obj:
        best_obj = obj
        best_pts = pts

    return HandoverSolution(
        points=np.array(best_pts),
        objective=best_obj,
        converged=grad_converged or polish_converged,
        iterations=grad_iters + sweeps,
    )
