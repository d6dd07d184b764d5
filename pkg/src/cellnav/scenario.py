"""Problem-instance data model and the radio geometry tying SNR targets to a coverage radius.

All distances are in meters, times in seconds, SNR quantities in dB unless a
name says otherwise. dB <-> linear conversion uses the power convention
x_linear = 10**(x_db / 10).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ScenarioFormatError, UnattainableSnr


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


class SnrTarget(float):
    """Minimum required receiver SNR, in dB."""

    def __new__(cls, rho_bar_db) -> "SnrTarget":
        v = float(rho_bar_db)
        if not math.isfinite(v):
            raise ValueError(f"SNR target must be finite, got {rho_bar_db!r}")
        return super().__new__(cls, v)

    @property
    def rho_bar_db(self) -> float:
        return float(self)


class CoverageRadius(float):
    """Maximum horizontal UAV-GBS distance that still meets the SNR target; always > 0."""

    def __new__(cls, d_bar) -> "CoverageRadius":
        v = float(d_bar)
        if not math.isfinite(v) or v <= 0.0:
            raise ValueError(f"coverage radius must be finite and > 0, got {d_bar!r}")
        return super().__new__(cls, v)

    @property
    def d_bar(self) -> float:
        return float(self)


@dataclass(frozen=True, eq=False)
class Scenario:
    """Immutable problem instance: GBS layout, endpoints, altitudes, kinematics, radio.

    ``gbs`` is an (M, 2) array of horizontal GBS positions; ``u0`` and ``uf``
    are the horizontal start and goal. The UAV flies at constant altitude
    ``uav_altitude`` above ground, GBS antennas sit at ``gbs_altitude``.
    """

    gbs: np.ndarray
    u0: np.ndarray
    uf: np.ndarray
    uav_altitude: float
    gbs_altitude: float
    vmax: float
    gamma0_db: float

    def __post_init__(self):
        gbs = np.asarray(self.gbs, dtype=float)
        if gbs.ndim != 2 or gbs.shape[1] != 2 or gbs.shape[0] < 1:
            raise ValueError(f"gbs must be an (M>=1, 2) array, got shape {gbs.shape}")
        u0 = np.asarray(self.u0, dtype=float).reshape(2)
        uf = np.asarray(self.uf, dtype=float).reshape(2)
        for name, arr in (("gbs", gbs), ("u0", u0), ("uF", uf)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contains non-finite coordinates")
        if not (math.isfinite(self.vmax) and self.vmax > 0):
            raise ValueError(f"vmax must be > 0, got {self.vmax!r}")
        if not (math.isfinite(self.uav_altitude) and math.isfinite(self.gbs_altitude)):
            raise ValueError("altitudes must be finite")
        if not (self.uav_altitude > self.gbs_altitude >= 0):
            raise ValueError(
                f"need uav_altitude > gbs_altitude >= 0, got "
                f"{self.uav_altitude!r} / {self.gbs_altitude!r}"
            )
        if not math.isfinite(self.gamma0_db):
            raise ValueError("gamma0_db must be finite")
        gbs.setflags(write=False)
        u0.setflags(write=False)
        uf.setflags(write=False)
        object.__setattr__(self, "gbs", gbs)
        object.__setattr__(self, "u0", u0)
        object.__setattr__(self, "uf", uf)

    @property
    def num_gbs(self) -> int:
        return self.gbs.shape[0]

    @property
    def altitude_gap(self) -> float:
        """Vertical UAV-GBS separation H - H_G."""
        return self.uav_altitude - self.gbs_altitude


def compute_coverage_radius(s: Scenario, target: float) -> CoverageRadius:
    """Coverage radius d = sqrt(gamma0/rho - (H - H_G)^2), inputs in dB.

    Raises UnattainableSnr when the target exceeds the SNR available directly
    overhead a GBS (d would be zero or imaginary).
    """
    ratio = db_to_linear(s.gamma0_db - float(target))
    val = ratio - s.altitude_gap**2
    if val <= 0.0:
        raise UnattainableSnr(
            f"SNR target {float(target):.6g} dB unattainable: requires horizontal "
            f"distance^2 = {val:.6g} m^2"
        )
    return CoverageRadius(math.sqrt(val))


def nearest_gbs(s: Scenario, u) -> tuple[int, float]:
    """Index of the closest GBS (ties to the lowest index) and its horizontal distance."""
    u = np.asarray(u, dtype=float).reshape(2)
    d = np.linalg.norm(s.gbs - u, axis=1)
    i = int(np.argmin(d))
    return i, float(d[i])


def snr_at(s: Scenario, u) -> float:
    """Receiver SNR in dB at horizontal position ``u``, served by the closest GBS."""
    _, dist = nearest_gbs(s, u)
    return s.gamma0_db - linear_to_db(s.altitude_gap**2 + dist**2)


_SCENARIO_KEYS = ("gbs", "u0", "uF", "H", "HG", "vmax", "gamma0_db")


def scenario_from_dict(doc: dict) -> Scenario:
    """Build a Scenario from a parsed scenario document, with per-field diagnostics."""
    if not isinstance(doc, dict):
        raise ScenarioFormatError(f"scenario document must be an object, got {type(doc).__name__}")
    missing = [k for k in _SCENARIO_KEYS if k not in doc]
    if missing:
        raise ScenarioFormatError(f"missing scenario keys: {', '.join(missing)}")

    def point(key):
        v = doc[key]
        try:
            x, y = float(v[0]), float(v[1])
        except (TypeError, ValueError, IndexError, KeyError) as e:
            raise ScenarioFormatError(f"field '{key}': expected [x, y] numbers, got {v!r}") from e
        if len(v) != 2 or not (math.isfinite(x) and math.isfinite(y)):
            raise ScenarioFormatError(f"field '{key}': expected 2 finite numbers, got {v!r}")
        return (x, y)

    def scalar(key):
        v = doc[key]
        try:
            x = float(v)
        except (TypeError, ValueError) as e:
            raise ScenarioFormatError(f"field '{key}': expected a number, got {v!r}") from e
        if not math.isfinite(x):
            raise ScenarioFormatError(f"field '{key}': value {v!r} is not finite")
        return x

    if not isinstance(doc["gbs"], (list, tuple)) or len(doc["gbs"]) == 0:
        raise ScenarioFormatError("field 'gbs': expected a non-empty array of [x, y] points")
    gbs = []
    for i, p in enumerate(doc["gbs"]):
        try:
            x, y = float(p[0]), float(p[1])
        except (TypeError, ValueError, IndexError, KeyError) as e:
            raise ScenarioFormatError(f"field 'gbs[{i}]': expected [x, y] numbers, got {p!r}") from e
        if len(p) != 2 or not (math.isfinite(x) and math.isfinite(y)):
            raise ScenarioFormatError(f"field 'gbs[{i}]': expected 2 finite numbers, got {p!r}")
        gbs.append((x, y))

    try:
        return Scenario(
            gbs=np.array(gbs),
            u0=np.array(point("u0")),
            uf=np.array(point("uF")),
            uav_altitude=scalar("H"),
            gbs_altitude=scalar("HG"),
            vmax=scalar("vmax"),
            gamma0_db=scalar("gamma0_db"),
        )
    except ValueError as e:
        raise ScenarioFormatError(str(e)) from e


def load_scenario(path) -> Scenario:
    """Load a scenario from a JSON file (keys: gbs, u0, uF, H, HG, vmax, gamma0_db)."""
    try:
        with open(path) as f:
            doc = json.load(f)
    except json.JSONDecodeError as e:
        raise ScenarioFormatError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}") from e
    except OSError as e:
        raise ScenarioFormatError(f"{path}: {e.strerror}") from e
    return scenario_from_dict(doc)


def scenario_to_dict(s: Scenario) -> dict:
    return {
        "gbs": [[float(x), float(y)] for x, y in s.gbs],
        "u0": [float(s.u0[0]), float(s.u0[1])],
        "uF": [float(s.uf[0]), float(s.uf[1])],
        "H": s.uav_altitude,
        "HG": s.gbs_altitude,
        "vmax": s.vmax,
        "gamma0_db": s.gamma0_db,
    }
