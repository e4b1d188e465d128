"""
JSON configuration for a curve, its pencil and the run settings.

Schema (unknown keys are rejected; values marked SCALAR may be a JSON number
or a string holding a constant expression such as ``"pi/2"``)::

    {
      "name":  str,                                   optional
      "curve": {
        "components": [EXPR, EXPR, EXPR, EXPR],       expressions in s
        "interval":   [SCALAR, SCALAR]
      },
      "ms": {
        "u": EXPR, "v": EXPR, "w": EXPR, "x": EXPR,   expressions in s, t, q
        "t0": SCALAR, "q0": SCALAR,
        "t_box": [SCALAR, SCALAR], "q_box": [SCALAR, SCALAR]
      },
      "grid": {                                       optional
        "n_s": int (257),  "s_open": [bool, bool] ([false, false]),
        "mesh": [int, int] ([25, 25]),  "frenet_samples": int (9)
      },
      "tolerances": {                                 optional
        "tol_unit": 1e-8, "tol": 1e-8, "tol_nondeg": 1e-10, "eps_degenerate": 1e-12
      },
      "mesh": {"fix": "q=0", "project": "drop:4"}     optional
    }
"""

import copy
import json
import math
from dataclasses import dataclass

from . import exprlang
from .curve import CurveSpec, validate
from .family import FamilySpec, MarchingScale
from .viz import Projection, parse_fix

DEFAULT_GRID = {"n_s": 257, "s_open": [False, False], "mesh": [25, 25], "frenet_samples": 9}
DEFAULT_TOLERANCES = {"tol_unit": 1e-8, "tol": 1e-8, "tol_nondeg": 1e-10, "eps_degenerate": 1e-12}
DEFAULT_MESH = {"fix": None, "project": "drop:4"}

_TOP_KEYS = {"name", "curve", "ms", "grid", "tolerances", "mesh"}
_CURVE_KEYS = {"components", "interval"}
_MS_KEYS = {"u", "v", "w", "x", "t0", "q0", "t_box", "q_box"}


class ConfigError(ValueError):
    """Every problem found in a configuration, as ``(field path, reason)`` pairs."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(f"{path}: {reason}" for path, reason in self.errors))


@dataclass
class Config:
    raw: dict
    family: FamilySpec
    grid: dict
    tolerances: dict
    mesh: dict

    @property
    def name(self):
        return self.raw.get("name", "")

    @property
    def curve(self):
        return self.family.curve

    def to_dict(self):
        return copy.deepcopy(self.raw)


class _Collector:
    def __init__(self):
        self.errors = []

    def add(self, path, reason):
        self.errors.append((path, reason))

    def obj(self, data, path, allowed, required=()):
        if not isinstance(data, dict):
            self.add(path, "must be an object")
            return None
        for key in sorted(set(data) - allowed):
            self.add(f"{path}.{key}" if path else key, "unknown key")
        for key in required:
            if key not in data:
                self.add(f"{path}.{key}" if path else key, "missing")
        return data

    def expr(self, data, path, allowed_vars):
        if not isinstance(data, str):
            self.add(path, "must be an expression string")
            return None
        try:
            e = exprlang.parse(data)
        except exprlang.ExprSyntaxError as exc:
            self.add(path, str(exc))
            return None
        extra = exprlang.free_vars(e) - set(allowed_vars)
        if extra:
            self.add(path, f"may only use {', '.join(allowed_vars)}; found {', '.join(sorted(extra))}")
            return None
        return e

    def scalar(self, data, path):
        if isinstance(data, bool):
            self.add(path, "must be a number or constant expression")
            return None
        if isinstance(data, (int, float)):
            if not math.isfinite(data):
                self.add(path, "must be finite")
                return None
            return float(data)
        e = self.expr(data, path, ())
        if e is None:
            return None
        try:
            return exprlang.evaluate(e)
        except exprlang.DomainError as exc:
            self.add(path, str(exc))
            return None

    def pair(self, data, path, item):
        if not isinstance(data, list) or len(data) != 2:
            self.add(path, "must be a list of two values")
            return None
        vals = [item(v, f"{path}[{i}]") for i, v in enumerate(data)]
        return None if any(v is None for v in vals) else vals

    def integer(self, data, path, minimum):
        if isinstance(data, bool) or not isinstance(data, int):
            self.add(path, "must be an integer")
            return None
        if data < minimum:
            self.add(path, f"must be >= {minimum}")
            return None
        return data


def _interval(c, data, path):
    vals = c.pair(data, path, c.scalar)
    if vals is not None and not vals[0] < vals[1]:
        c.add(path, f"lower bound {vals[0]} must be below upper bound {vals[1]}")
        return None
    return vals


def config_from_dict(data):
    """Validate ``data`` against the schema and build the family; raises ConfigError."""
    c = _Collector()
    if c.obj(data, "", _TOP_KEYS, ("curve", "ms")) is None:
        raise ConfigError(c.errors)
    if "name" in data and not isinstance(data["name"], str):
        c.add("name", "must be a string")

    components = interval = None
    curve_data = data.get("curve")
    if curve_data is not None and c.obj(curve_data, "curve", _CURVE_KEYS, ("components", "interval")):
        comps = curve_data.get("components")
        if isinstance(comps, list):
            components = []
            for i in range(4):
                path = f"curve.components[{i}]"
                if i < len(comps):
                    components.append(c.expr(comps[i], path, ("s",)))
                else:
                    c.add(path, "missing")
            if len(comps) > 4:
                c.add("curve.components", f"expected 4 expressions, got {len(comps)}")
        elif "components" in curve_data:
            c.add("curve.components", "must be a list of 4 expressions")
        if "interval" in curve_data:
            interval = _interval(c, curve_data["interval"], "curve.interval")

    ms = {}
    ms_data = data.get("ms")
    if ms_data is not None and c.obj(ms_data, "ms", _MS_KEYS, sorted(_MS_KEYS)):
        for key in ("u", "v", "w", "x"):
            if key in ms_data:
                ms[key] = c.expr(ms_data[key], f"ms.{key}", exprlang.VARIABLES)
        for key in ("t_box", "q_box"):
            if key in ms_data:
                ms[key] = _interval(c, ms_data[key], f"ms.{key}")
        for key, box in (("t0", "t_box"), ("q0", "q_box")):
            if key in ms_data:
                ms[key] = val = c.scalar(ms_data[key], f"ms.{key}")
                b = ms.get(box)
                if val is not None and b is not None and not b[0] <= val <= b[1]:
                    c.add(f"ms.{key}", f"{val} lies outside {box} {b}")

    grid = dict(DEFAULT_GRID)
    if "grid" in data and c.obj(data["grid"], "grid", set(DEFAULT_GRID)):
        g = data["grid"]
        if "n_s" in g:
            grid["n_s"] = c.integer(g["n_s"], "grid.n_s", 2)
        if "frenet_samples" in g:
            grid["frenet_samples"] = c.integer(g["frenet_samples"], "grid.frenet_samples", 1)
        if "mesh" in g:
            grid["mesh"] = c.pair(g["mesh"], "grid.mesh", lambda v, p: c.integer(v, p, 2))
        if "s_open" in g:
            def flag(v, p):
                if not isinstance(v, bool):
                    c.add(p, "must be true or false")
                    return None
                return v
            grid["s_open"] = c.pair(g["s_open"], "grid.s_open", flag)

    tolerances = dict(DEFAULT_TOLERANCES)
    if "tolerances" in data and c.obj(data["tolerances"], "tolerances", set(DEFAULT_TOLERANCES)):
        for key, val in data["tolerances"].items():
            if isinstance(val, bool) or not isinstance(val, (int, float)) or not val > 0:
                c.add(f"tolerances.{key}", "must be a positive number")
            else:
                tolerances[key] = float(val)

    mesh = dict(DEFAULT_MESH)
    if "mesh" in data and c.obj(data["mesh"], "mesh", set(DEFAULT_MESH)):
        m = data["mesh"]
        if "fix" in m:
            try:
                parse_fix(m["fix"])
                mesh["fix"] = m["fix"]
            except (ValueError, TypeError, AttributeError) as exc:
                c.add("mesh.fix", str(exc))
        if "project" in m:
            try:
                Projection.parse(m["project"])
                mesh["project"] = m["project"]
            except (ValueError, AttributeError) as exc:
                c.add("mesh.project", str(exc))

    family = None
    if not c.errors:
        curve = CurveSpec(tuple(components), tuple(interval))
        report = validate(curve, grid["n_s"], tolerances["tol_unit"], tolerances["eps_degenerate"])
        for problem in report.problems:
            c.add("curve", problem)
        family = FamilySpec(curve, MarchingScale(**ms))
    if c.errors:
        raise ConfigError(c.errors)
    return Config(copy.deepcopy(data), family, grid, tolerances, mesh)


def load_config(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError([("", f"cannot read {path}: {exc.strerror}")]) from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([("", f"invalid JSON in {path}: {exc}")]) from exc
    return config_from_dict(data)


def dump_config(config_dict):
    return json.dumps(config_dict, indent=2) + "\n"


# ---------------------------------------------------------------------------
# Builtin examples

_CURVE_1 = ["1/2*cos(s)", "1/2*sin(s)", "1/2*s", "sqrt(2)/2*s"]
_CURVE_2 = ["1/2*sin(s)", "1/2*cos(s)", "0", "sqrt(3)/2*s"]

BUILTINS = {
    "ex1": {
        "name": "ex1",
        "curve": {"components": _CURVE_1, "interval": ["0", "2*pi"]},
        "ms": {"u": "(t-1/2)*(q-0)", "v": "t-1/2", "w": "0", "x": "q-0",
               "t0": "1/2", "q0": "0", "t_box": ["0", "1"], "q_box": ["0", "1"]},
        "mesh": {"fix": "q=0", "project": "drop:4"},
    },
    "ex2a": {
        "name": "ex2a",
        "curve": {"components": _CURVE_2, "interval": ["0", "3"]},
        "ms": {"u": "t-1/2", "v": "(s+t+1)*(q-0)", "w": "0", "x": "(s+1)*(t-1/2)",
               "t0": "1/2", "q0": "0", "t_box": ["0", "1"], "q_box": ["0", "1"]},
        "mesh": {"fix": "q=0", "project": "drop:4"},
    },
    "ex2b": {
        "name": "ex2b",
        "curve": {"components": _CURVE_2, "interval": ["0", "pi/2"]},
        "ms": {"u": "0", "v": "sin(s*(q-1/2))", "w": "0", "x": "s*q^2*(t-1)",
               "t0": "1", "q0": "1/2", "t_box": ["0", "1"], "q_box": ["0", "1"]},
        # phi3 = -s^2/4 on this family, so the open end at s = 0 must stay
        # out of the grid and the first sample must clear tol_nondeg
        "grid": {"n_s": 129, "s_open": [True, False]},
        "mesh": {"fix": "t=1", "project": "drop:3"},
    },
}


def builtin(name):
    """A fresh copy of the builtin configuration dictionary ``name``."""
    if name not in BUILTINS:
        raise KeyError(f"unknown example {name!r}; choose from {', '.join(BUILTINS)}")
    return copy.deepcopy(BUILTINS[name])
