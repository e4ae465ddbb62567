"""Flat ``key = value`` run configuration.

Example::

    mode = dep
    lambda = [1, 2, 3]
    pi0 = [0.01, 0.005, 0.0025]
    h = 0.01
    steps = 10000

Blank lines and ``#`` comments are ignored. Triples and lists are written as
comma-separated, optionally bracketed lists.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigError
from .rigid_body import InertiaSpec, discrete_momentum

MODES = ("dep", "dlp", "reconstruct", "convergence", "verify")
REPORTS = ("casimir_group", "casimir_dual", "energy", "spatial_momentum")

# key -> kind
KEYS = {
    "mode": "str",
    "lambda": "triple",
    "classical": "triple",
    "pi0": "triple",
    "omega0": "triple",
    "h": "float",
    "steps": "int",
    "out": "str",
    "report": "list",
    "tol": "float",
    "max_iters": "int",
    "seed": "int",
    "T": "float",
    "h_list": "floats",
    "samples": "int",
    "fd_jacobian": "bool",
    "guess": "str",
}


@dataclass(frozen=True)
class RunConfig:
    mode: str
    inertia: InertiaSpec
    h: Optional[float] = None
    steps: Optional[int] = None
    pi0: Optional[tuple] = None  # discrete normalization (h * continuous)
    omega0: Optional[tuple] = None
    out: str = "trajectory.csv"
    report: tuple = REPORTS
    tol: float = 1e-12
    max_iters: int = 50
    seed: int = 0
    T: float = 1.0
    h_list: tuple = (0.02, 0.01, 0.005, 0.0025)
    samples: int = 1000
    fd_jacobian: bool = False
    guess: str = "previous_f"

    def continuous_momentum(self):
        """Body momentum in continuous normalization, J(omega0) or pi0 / h."""
        if self.omega0 is not None:
            return self.inertia.moments * np.array(self.omega0)
        return np.array(self.pi0) / self.h


def _where(key, lines):
    line = lines.get(key)
    return f"line {line}, key '{key}'" if line else f"key '{key}'"


def _convert(key, kind, raw):
    raw = raw.strip()
    if kind == "str":
        if not raw:
            raise ValueError("empty value")
        return raw
    if kind == "float":
        return float(raw)
    if kind == "int":
        val = float(raw)
        if val != int(val):
            raise ValueError(f"expected an integer, got {raw!r}")
        return int(val)
    if kind == "bool":
        low = raw.lower()
        if low in ("true", "yes", "1", "on"):
            return True
        if low in ("false", "no", "0", "off"):
            return False
        raise ValueError(f"expected a boolean, got {raw!r}")
    body = raw[1:-1] if raw.startswith("[") and raw.endswith("]") else raw
    items = [x.strip() for x in body.split(",") if x.strip()]
    if kind == "list":
        return tuple(items)
    vals = tuple(float(x) for x in items)
    if kind == "triple" and len(vals) != 3:
        raise ValueError(f"expected 3 numbers, got {len(vals)}")
    if not all(np.isfinite(vals)):
        raise ValueError("non-finite number")
    return vals


def parse_key_values(text):
    """Return ``(raw values, line numbers)`` keyed by config key."""
    raw, lines = {}, {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line.strip()!r}")
        key, value = (s.strip() for s in stripped.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"line {lineno}, key '{key}': unknown key")
        if key in raw:
            raise ConfigError(f"line {lineno}, key '{key}': duplicate key")
        raw[key] = value
        lines[key] = lineno
    return raw, lines


def build_config(raw, lines=None):
    """Validate raw string values into a :class:`RunConfig`."""
    lines = lines or {}
    vals = {}
    for key, text in raw.items():
        try:
            vals[key] = _convert(key, KEYS[key], text)
        except ValueError as exc:
            raise ConfigError(f"{_where(key, lines)}: {exc}") from None

    mode = vals.get("mode")
    if mode is None:
        raise ConfigError("missing required key 'mode'")
    if mode not in MODES:
        raise ConfigError(f"{_where('mode', lines)}: mode must be one of {', '.join(MODES)}")

    if "lambda" in vals and "classical" in vals:
        raise ConfigError("keys 'lambda' and 'classical' are mutually exclusive")
    if "pi0" in vals and "omega0" in vals:
        raise ConfigError("keys 'pi0' and 'omega0' are mutually exclusive")

    try:
        if "lambda" in vals:
            inertia = InertiaSpec(vals["lambda"])
        elif "classical" in vals:
            inertia = InertiaSpec.from_classical(vals["classical"])
        elif mode == "verify":
            inertia = InertiaSpec((1.0, 2.0, 3.0))
        else:
            raise ConfigError("missing required key 'lambda' (or 'classical')")
    except ValueError as exc:
        key = "lambda" if "lambda" in vals else "classical"
        raise ConfigError(f"{_where(key, lines)}: {exc}") from None

    def need(key):
        if key not in vals:
            raise ConfigError(f"missing required key '{key}'")
        return vals[key]

    def check(key, ok, msg):
        if key in vals and not ok(vals[key]):
            raise ConfigError(f"{_where(key, lines)}: {msg}")

    check("h", lambda v: v > 0, "h must be > 0")
    check("steps", lambda v: v >= 1, "steps must be >= 1")
    check("tol", lambda v: v > 0, "tol must be > 0")
    check("max_iters", lambda v: v >= 1, "max_iters must be >= 1")
    check("samples", lambda v: v >= 1, "samples must be >= 1")
    check("T", lambda v: v > 0, "T must be > 0")
    check("h_list", lambda v: len(v) >= 2 and all(x > 0 for x in v), "h_list needs at least two positive step sizes")
    check("report", lambda v: all(x in REPORTS for x in v), f"report entries must be among {', '.join(REPORTS)}")
    check("guess", lambda v: v in ("previous_f", "identity"), "guess must be previous_f or identity")

    if mode in ("dep", "dlp", "reconstruct"):
        need("h")
        need("steps")
        if "pi0" not in vals and "omega0" not in vals:
            raise ConfigError("missing required key 'pi0' (or 'omega0')")
    if mode == "convergence":
        if "pi0" not in vals and "omega0" not in vals:
            raise ConfigError("missing required key 'omega0' (or 'pi0')")
        if "pi0" in vals:
            need("h")

    pi0 = vals.get("pi0")
    if "omega0" in vals and "h" in vals:
        pi0 = tuple(float(x) for x in discrete_momentum(inertia, vals["omega0"], vals["h"]))

    fields = {k: vals[k] for k in ("h", "steps", "out", "tol", "max_iters", "seed", "T", "samples", "fd_jacobian", "guess") if k in vals}
    if "report" in vals:
        fields["report"] = vals["report"]
    if "h_list" in vals:
        fields["h_list"] = vals["h_list"]
    return RunConfig(mode=mode, inertia=inertia, pi0=pi0, omega0=vals.get("omega0"), **fields)


def parse_config(text, overrides=None):
    """Parse config text; ``overrides`` (raw strings) replace file values.

    An override of ``lambda``/``classical`` or ``pi0``/``omega0`` also drops
    the file's value for the other member of the pair.
    """
    raw, lines = parse_key_values(text)
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in KEYS:
            raise ConfigError(f"key '{key}': unknown key")
        for a, b in (("lambda", "classical"), ("pi0", "omega0")):
            if key == a:
                raw.pop(b, None)
            elif key == b:
                raw.pop(a, None)
        raw[key] = value
        lines.pop(key, None)
    return build_config(raw, lines)
