"""Time-parameterized trajectories: reconstruction from handover points,
sampling, connectivity verification, and the straight-flight baseline.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .association import AssociationSequence
from .errors import OutOfRange
from .handover import HandoverSolution, polyline_length
from .scenario import Scenario, linear_to_db, nearest_gbs, snr_at


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Piecewise-linear path flown at vmax, one GBS association per segment.

    ``waypoints`` has N + 1 rows; segment i runs waypoints[i] -> waypoints[i+1]
    under associations[i] for durations[i] seconds. Zero-length segments are
    retained with zero duration.
    """

    waypoints: np.ndarray  # (N + 1, 2)
    associations: tuple[int, ...]
    durations: np.ndarray  # (N,)
    total_time: float
    vmax: float

    def __post_init__(self):
        w = np.asarray(self.waypoints, dtype=float)
        d = np.asarray(self.durations, dtype=float)
        if w.shape[0] != d.shape[0] + 1 or len(self.associations) != d.shape[0]:
            raise ValueError("waypoints/durations/associations lengths are inconsistent")
        w.setflags(write=False)
        d.setflags(write=False)
        object.__setattr__(self, "waypoints", w)
        object.__setattr__(self, "durations", d)

    @property
    def path_length(self) -> float:
        return polyline_length(self.waypoints)

    def segment_start_times(self) -> np.ndarray:
        return np.concatenate([[0.0], np.cumsum(self.durations)])


def build_trajectory(
    sol: HandoverSolution, seq: AssociationSequence, vmax: float
) -> Trajectory:
    """Trajectory from optimized waypoints: every segment flown at vmax."""
    if len(seq) != sol.points.shape[0] - 1:
        raise ValueError(
            f"sequence length {len(seq)} does not match {sol.points.shape[0]} waypoints"
        )
    seg = np.diff(sol.points, axis=0)
    lengths = np.sqrt((seg * seg).sum(axis=1))
    durations = lengths / vmax
    return Trajectory(
        waypoints=sol.points,
        associations=seq.indices,
        durations=durations,
        total_time=float(durations.sum()),
        vmax=float(vmax),
    )


def sample_position(traj: Trajectory, t: float) -> np.ndarray:
    """Position at time t via linear interpolation; zero-length segments are skipped."""
    t = float(t)
    if not (0.0 <= t <= traj.total_time):
        raise OutOfRange(f"t={t!r} outside [0, {traj.total_time!r}]")
    starts = traj.segment_start_times()
    # side='right' lands exactly-on-boundary times at the next segment's start,
    # which also hops over zero-duration segments.
    i = int(np.searchsorted(starts, t, side="right")) - 1
    if i >= len(traj.durations):
        return traj.waypoints[-1].copy()
    dur = traj.durations[i]
    if dur == 0.0:
        return traj.waypoints[i].copy()
    frac = (t - starts[i]) / dur
    return traj.waypoints[i] + frac * (traj.waypoints[i + 1] - traj.waypoints[i])


@dataclass(frozen=True)
class ConnectivityViolation:
    kind: str  # 'segment_endpoint' | 'sampled'
    segment: int
    t: float
    margin_m: float  # how far beyond d_bar the constraint is broken


@dataclass(frozen=True)
class ConnectivityReport:
    violations: tuple[ConnectivityViolation, ...]
    samples_checked: int

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_connectivity(
    s: Scenario,
    traj: Trajectory,
    d_bar: float,
    tol: float | None = None,
    audit_resolution_m: float = 1.0,
) -> ConnectivityReport:
    """Check the coverage constraint along the whole trajectory.

    Authoritative check: both endpoints of every segment within d_bar of the
    segment's associated GBS — sufficient for every interior point because the
    disk is convex. Defense in depth: a sampled audit of the closest-GBS form
    of the constraint at <= ``audit_resolution_m`` spatial resolution.
    Violations are reported, never raised.
    """
    d_bar = float(d_bar)
    if tol is None:
        tol = 1e-6 * d_bar
    violations: list[ConnectivityViolation] = []

    starts = traj.segment_start_times()
    for i, gid in enumerate(traj.associations):
        g = s.gbs[gid]
        for end, tt in ((traj.waypoints[i], starts[i]), (traj.waypoints[i + 1], starts[i + 1])):
            dist = float(np.linalg.norm(end - g))
            if dist > d_bar + tol:
                violations.append(
                    ConnectivityViolation("segment_endpoint", i, float(tt), dist - d_bar)
                )

    n = max(2, int(math.ceil(traj.path_length / audit_resolution_m)) + 1)
    ts = np.linspace(0.0, traj.total_time, n)
    for tt in ts:
        p = sample_position(traj, float(tt))
        _, dist = nearest_gbs(s, p)
        if dist > d_bar + tol:
            seg = int(np.searchsorted(starts, tt, side="right")) - 1
            violations.append(
                ConnectivityViolation("sampled", min(seg, len(traj.durations) - 1), float(tt), dist - d_bar)
            )
    return ConnectivityReport(violations=tuple(violations), samples_checked=n)


def straight_flight(s: Scenario) -> Trajectory:
    """Direct u0 -> uF segment at vmax; associated with the GBS closest to the
    midpoint (informational only — this baseline may violate connectivity)."""
    mid = (s.u0 + s.uf) / 2.0
    gid, _ = nearest_gbs(s, mid)
    length = float(np.linalg.norm(s.uf - s.u0))
    return Trajectory(
        waypoints=np.array([s.u0, s.uf]),
        associations=(gid,),
        durations=np.array([length / s.vmax]),
        total_time=length / s.vmax,
        vmax=s.vmax,
    )


def _golden_max(f, lo: float, hi: float, tol: float) -> float:
    """Abscissa maximizing f on [lo, hi] (unimodal assumed on the bracket)."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (a + b) / 2.0


def max_gap_distance_on_segment(s: Scenario, sample_resolution_m: float = 0.1) -> float:
    """Largest closest-GBS distance anywhere on the u0 -> uF segment.

    Dense sampling plus golden-section refinement around every local maximum
    of the sampled lower envelope; the envelope can peak non-smoothly where
    the closest GBS changes, which sampling alone can miss by half a step.
    Accuracy is about +/- 0.01 m.
    """
    delta = s.uf - s.u0
    length = float(np.linalg.norm(delta))

    def envelope(t: float) -> float:
        return nearest_gbs(s, s.u0 + t * delta)[1]

    if length == 0.0:
        return envelope(0.0)

    n = max(2, int(math.ceil(length / sample_resolution_m)) + 1)
    ts = np.linspace(0.0, 1.0, n)
    pts = s.u0[None, :] + ts[:, None] * delta[None, :]
    dists = np.linalg.norm(pts[:, None, :] - s.gbs[None, :, :], axis=2).min(axis=1)

    best = float(dists.max())
    tol_t = 1e-3 / length  # ~1 mm bracket, well inside the documented accuracy
    interior = np.nonzero(
        (dists[1:-1] >= dists[:-2]) & (dists[1:-1] >= dists[2:])
    )[0] + 1
    for i in interior:
        t_star = _golden_max(envelope, float(ts[i - 1]), float(ts[i + 1]), tol_t)
        best = max(best, envelope(t_star))
    return best


def straight_flight_threshold(s: Scenario) -> float:
    """Largest SNR target (dB) for which the direct segment never leaves coverage."""
    d_star = max_gap_distance_on_segment(s)
    return s.gamma0_db - linear_to_db(d_star**2 + s.altitude_gap**2)


def trajectory_to_csv(s: Scenario, traj: Trajectory, dt: float) -> str:
    """Sampled trajectory as CSV rows ``t_s,x_m,y_m,associated_gbs,snr_db``."""
    if dt <= 0:
        raise ValueError("dt must be > 0")
    lines = ["t_s,x_m,y_m,associated_gbs,snr_db"]
    starts = traj.segment_start_times()
    n = int(math.floor(traj.total_time / dt))
    times = [i * dt for i in range(n + 1)]
    if not times or times[-1] < traj.total_time:
        times.append(traj.total_time)
    for t in times:
        p = sample_position(traj, t)
        seg = min(int(np.searchsorted(starts, t, side="right")) - 1, len(traj.durations) - 1)
        gid = traj.associations[seg]
        lines.append(
            f"{t:.6f},{p[0]:.6f},{p[1]:.6f},{gid + 1},{snr_at(s, p):.6f}"
        )
    return "\n".join(lines) + "\n"


def waypoints_to_csv(traj: Trajectory) -> str:
    """Waypoint summary as CSV rows ``i,x,y,gbs,T_i`` (segment i ends at row i)."""
    lines = ["i,x_m,y_m,gbs,T_i_s"]
    lines.append(f"0,{traj.waypoints[0][0]:.6f},{traj.waypoints[0][1]:.6f},,")
    for i in range(len(traj.durations)):
        w = traj.waypoints[i + 1]
        lines.append(
            f"{i + 1},{w[0]:.6f},{w[1]:.6f},{traj.associations[i] + 1},{traj.durations[i]:.6f}"
        )
    return "\n".join(lines) + "\n"
