"""Scenario files (JSON) and their resolution into a :class:`WaveConfig`."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .exceptions import ConfigurationError
from .model import (
    G_DEFAULT,
    K_DEFAULT,
    N_INTERACTIONS_DEFAULT,
    SONIC_SPEED_WATER,
    PhysicalConstants,
    WaveConfig,
    build_configuration,
    solve_max_qref,
)
from .shock import DEFAULT_X1

_FIELDS = {
    "q_star", "q_0", "q_ref", "k", "g", "c_s", "n_interactions", "t_end", "dt",
    "output_times", "x1", "x2", "strict_admissibility",
}


@dataclass(frozen=True)
class Scenario:
    q_star: float
    q_0: float
    q_ref: float | str = "max"
    k: float = K_DEFAULT
    g: float = G_DEFAULT
    c_s: float = SONIC_SPEED_WATER
    n_interactions: int = N_INTERACTIONS_DEFAULT
    t_end: float = 1000.0
    dt: float = 1.0
    output_times: tuple | None = None
    x1: float = DEFAULT_X1
    x2: float | None = None
    strict_admissibility: bool = False
    raw: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def constants(self) -> PhysicalConstants:
        return PhysicalConstants(g=self.g, c_s=self.c_s, k=self.k, n_interactions=self.n_interactions)

    @property
    def digest(self) -> str:
        """SHA-256 of the canonical JSON form of the file contents."""
        blob = json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def resolve_q_ref(self) -> float:
        if self.q_ref == "max":
            return solve_max_qref(self.q_star, self.q_0, self.constants)
        return float(self.q_ref)

    def config(self) -> WaveConfig:
        return build_configuration(self.q_star, self.q_0, self.resolve_q_ref(), self.constants)


def _positive(d, key):
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v) or v <= 0:
        raise ConfigurationError(f"{key} must be a positive number, got {v!r}")
    return float(v)


def parse_scenario(data: dict, allow_flat: bool = False) -> Scenario:
    """Validate a decoded scenario document.

    ``q_0 == q_star`` (still water) is rejected unless ``allow_flat``.

    Raises:
        ConfigurationError: on unknown or missing keys, non-positive physical
            fields, or ``q_0 <= q_star``.
    """
    if not isinstance(data, dict):
        raise ConfigurationError("scenario must be a JSON object")
    unknown = set(data) - _FIELDS
    if unknown:
        raise ConfigurationError(f"unknown scenario keys: {sorted(unknown)}")
    for key in ("q_star", "q_0"):
        if key not in data:
            raise ConfigurationError(f"missing required key {key!r}")
    kw = {"raw": dict(data)}
    for key in ("q_star", "q_0", "k", "g", "c_s", "t_end", "dt"):
        if key in data:
            kw[key] = _positive(data, key)
    if "n_interactions" in data:
        n = data["n_interactions"]
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise ConfigurationError(f"n_interactions must be an integer >= 1, got {n!r}")
        kw["n_interactions"] = n
    if "q_ref" in data:
        kw["q_ref"] = "max" if data["q_ref"] == "max" else _positive(data, "q_ref")
    if "x1" in data:
        kw["x1"] = float(data["x1"])
    if data.get("x2") is not None:
        kw["x2"] = float(data["x2"])
    if data.get("output_times") is not None:
        times = data["output_times"]
        if not isinstance(times, list) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) and v >= 0 for v in times
        ):
            raise ConfigurationError("output_times must be a list of non-negative numbers")
        kw["output_times"] = tuple(float(v) for v in times)
    if "strict_admissibility" in data:
        kw["strict_admissibility"] = bool(data["strict_admissibility"])

    sc = Scenario(**kw)
    if sc.q_0 < sc.q_star or (sc.q_0 == sc.q_star and not allow_flat):
        raise ConfigurationError(f"q_star < q_0 violated (q_star={sc.q_star}, q_0={sc.q_0})")
    if sc.output_times and max(sc.output_times) > sc.t_end:
        raise ConfigurationError("output_times must not exceed t_end")
    if not sc.x1 < 0:
        raise ConfigurationError(f"x1 < 0 violated (x1={sc.x1})")
    if sc.x2 is not None and not sc.x2 > 0:
        raise ConfigurationError(f"x2 > 0 violated (x2={sc.x2})")
    return sc


def load_scenario(path, allow_flat: bool = False) -> Scenario:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot read scenario {path}: {exc}") from exc
    return parse_scenario(data, allow_flat=allow_flat)
