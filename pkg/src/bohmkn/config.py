"""Scenario configuration: a JSON document validated into typed records.

Schema (all keys optional except ``packet``)::

    {
      "units": "dimensionless" | "SI-electron",
      "packet": {"u": [4 reals], "sigmaI": [4 positive reals], "M": 1, "hbar": 1},
      "charge": 1.0,
      "spin": {"J": [3 reals]},
      "ensemble": {"N": 1000, "seed": 0, "weighting": "bohm" | "equalPair",
                   "timelikeFilter": true, "amp": [4 reals]},
      "grid": {"origin": [4], "extents": [4], "counts": [4]},
      "radii": [reals],
      "output": {"format": "csv" | "json", "path": null}
    }

With ``SI-electron`` all lengths are in metres and ``u`` is in units of c;
M and hbar are fixed by the preset.  With ``dimensionless`` M = hbar = 1.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field

import numpy as np

from .ensemble import EnsembleSpec
from .errors import ConfigError
from .minkowski import minkowski_dot
from .trajectory import boosted_spin_offset
from .units import PRESETS, UnitSystem
from .wavepacket import PacketParams

TOP_KEYS = {"units", "packet", "charge", "spin", "ensemble", "grid", "radii", "output"}


@dataclass
class Scenario:
    units: UnitSystem
    packet: PacketParams
    q: float = 1.0
    offset: np.ndarray | None = None
    N: int = 1000
    seed: int = 0
    weighting: str = "bohm"
    timelike_filter: bool = True
    amp: np.ndarray | None = None
    grid_origin: np.ndarray = field(default_factory=lambda: np.zeros(4))
    grid_extents: np.ndarray = field(default_factory=lambda: np.zeros(4))
    grid_counts: np.ndarray = field(default_factory=lambda: np.ones(4, dtype=int))
    radii: np.ndarray = field(default_factory=lambda: np.array([20.0, 40.0, 80.0]))
    fmt: str = "csv"
    path: str | None = None

    def ensemble(self, seed: int | None = None) -> EnsembleSpec:
        return EnsembleSpec(self.packet, N=self.N, seed=self.seed if seed is None else seed,
                            weighting=self.weighting, timelike_filter=self.timelike_filter,
                            q=self.q, amps=self.amp, offset=self.offset)

    def grid_points(self) -> np.ndarray:
        axes = []
        for o, e, n in zip(self.grid_origin, self.grid_extents, self.grid_counts):
            axes.append(o + e * np.arange(n) / (n - 1) if n > 1 else np.array([o]))
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack(mesh, axis=-1).reshape(-1, 4)


def _line_of(text: str, key: str) -> int | None:
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


class _Reader:
    def __init__(self, text: str):
        self.text = text

    def fail(self, path: str, msg: str):
        # a missing key is reported at the line of its nearest present parent
        line = None
        for key in reversed([k.split("[")[0] for k in path.split(".")]):
            line = _line_of(self.text, key)
            if line is not None:
                break
        raise ConfigError(path, msg, line)

    def number(self, v, path, positive=False, integer=False):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            self.fail(path, "must be a number")
        if not math.isfinite(v):
            self.fail(path, "must be finite")
        if integer and not float(v).is_integer():
            self.fail(path, "must be an integer")
        if positive and not v > 0:
            self.fail(path, "must be positive")
        return int(v) if integer else float(v)

    def vector(self, v, path, n, positive=False, integer=False):
        if not isinstance(v, list) or len(v) != n:
            self.fail(path, f"must be a list of {n} numbers")
        return np.array([self.number(x, f"{path}[{i}]", positive, integer) for i, x in enumerate(v)])


def parse_config(text: str) -> Scenario:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError("<document>", e.msg, e.lineno) from None
    if not isinstance(doc, dict):
        raise ConfigError("<document>", "top level must be an object", 1)
    r = _Reader(text)
    for k in doc:
        if k not in TOP_KEYS:
            r.fail(k, "unknown key")

    units_name = doc.get("units", "dimensionless")
    if units_name not in PRESETS:
        r.fail("units", f"must be one of {sorted(PRESETS)}")
    units = PRESETS[units_name]

    pk = doc.get("packet")
    if not isinstance(pk, dict):
        raise ConfigError("packet", "required object", _line_of(text, "packet"))
    u = r.vector(pk.get("u"), "packet.u", 4)
    sig = r.vector(pk.get("sigmaI"), "packet.sigmaI", 4, positive=True)
    for key in ("M", "hbar"):
        if key in pk:
            val = r.number(pk[key], f"packet.{key}", positive=True)
            if val != getattr(units, key):
                r.fail(f"packet.{key}", f"fixed to {getattr(units, key)!r} by the {units.name} preset")
    sig = units.to_internal(sig)
    packet = PacketParams(u, sig, units.M, units.hbar)

    sc = Scenario(units, packet)
    if "charge" in doc:
        sc.q = r.number(doc["charge"], "charge")
    if "spin" in doc:
        J = r.vector(doc["spin"].get("J") if isinstance(doc["spin"], dict) else None, "spin.J", 3)
        if abs(minkowski_dot(u, u) - 1.0) > 1e-12 or u[0] <= 0:
            r.fail("packet.u", "a spin offset needs an on-shell, future-pointing u")
        # J in units of hbar; the offset i J / m is in internal lengths
        sc.offset = boosted_spin_offset(J * units.hbar, units.M, u)

    ens = doc.get("ensemble", {})
    if not isinstance(ens, dict):
        r.fail("ensemble", "must be an object")
    if "N" in ens:
        sc.N = r.number(ens["N"], "ensemble.N", positive=True, integer=True)
    if "seed" in ens:
        sc.seed = r.number(ens["seed"], "ensemble.seed", integer=True)
        if not 0 <= sc.seed < 2**64:
            r.fail("ensemble.seed", "must be in [0, 2^64)")
    if "weighting" in ens:
        if ens["weighting"] not in ("bohm", "equalPair"):
            r.fail("ensemble.weighting", "must be 'bohm' or 'equalPair'")
        sc.weighting = ens["weighting"]
    if "timelikeFilter" in ens:
        if not isinstance(ens["timelikeFilter"], bool):
            r.fail("ensemble.timelikeFilter", "must be true or false")
        sc.timelike_filter = ens["timelikeFilter"]
    if "amp" in ens:
        sc.amp = units.to_internal(r.vector(ens["amp"], "ensemble.amp", 4))
    if sc.weighting == "equalPair" and sc.amp is None:
        r.fail("ensemble.amp", "required for equalPair weighting")

    if "grid" in doc:
        g = doc["grid"]
        if not isinstance(g, dict):
            r.fail("grid", "must be an object")
        sc.grid_origin = units.to_internal(r.vector(g.get("origin"), "grid.origin", 4))
        sc.grid_extents = units.to_internal(r.vector(g.get("extents"), "grid.extents", 4))
        sc.grid_counts = r.vector(g.get("counts"), "grid.counts", 4, positive=True, integer=True).astype(int)
    if "radii" in doc:
        rad = doc["radii"]
        if not isinstance(rad, list) or not rad:
            r.fail("radii", "must be a non-empty list")
        sc.radii = units.to_internal(np.array([r.number(v, f"radii[{i}]", positive=True)
                                               for i, v in enumerate(rad)]))
    out = doc.get("output", {})
    if not isinstance(out, dict):
        r.fail("output", "must be an object")
    if "format" in out:
        if out["format"] not in ("csv", "json"):
            r.fail("output.format", "must be 'csv' or 'json'")
        sc.fmt = out["format"]
    if out.get("path") is not None:
        if not isinstance(out["path"], str):
            r.fail("output.path", "must be a string")
        sc.path = out["path"]
    return sc


def load_config(path: str) -> Scenario:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ConfigError("<file>", str(e)) from None
    return parse_config(text)


DEFAULT_CONFIG = {
    "units": "dimensionless",
    "packet": {"u": [1.0, 0.0, 0.0, 0.0], "sigmaI": [4.0, 4.0, 4.0, 4.0]},
    "charge": 1.0,
    "ensemble": {"N": 2000, "seed": 12345, "weighting": "bohm", "timelikeFilter": True},
    "grid": {"origin": [60.0, 20.0, 0.0, 0.0], "extents": [0.0, 40.0, 0.0, 0.0], "counts": [1, 5, 1, 1]},
    "radii": [80.0, 160.0, 320.0],
    "output": {"format": "csv", "path": None},
}


def default_config_text() -> str:
    return json.dumps(DEFAULT_CONFIG, indent=2) + "\n"
