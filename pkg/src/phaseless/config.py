"""
JSON run configurations for the ``phaseless`` command.

A config is validated against :data:`SCHEMA` (unknown keys are rejected)
before anything is computed.  Complex numbers are written ``[re, im]``
(complex matrix entries may also be plain reals); rational matrix entries
are integers or strings such as ``"1/3"``.

Minimal example (corrected Example I)::

    {
      "window": {"gaussian": {"dim": 2, "exponent": 1.0}},
      "scenario": {"type": "semi-discrete", "lattice": [[0.125, 0], [0, 0.125]]},
      "sequence": [
        {"index": [0, 0], "value": [1, 0]},
        {"index": [1, 0], "value": [0, 1]},
        {"index": [0, 1], "value": [1, 1]}
      ],
      "verification": {"points": 50, "radius": 10.0, "tol": 1e-9}
    }
"""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import jsonschema
import numpy as np

from . import factory
from .atoms import AtomSum, GaussAtom
from .lattice import Lattice, reciprocal
from .metaplectic import Chirp, Dilate, FourierJ, SympWord
from .sampled import SampledWindow, named_window
from .sequences import CoeffSeq

__all__ = [
    "SCHEMA",
    "ConfigError",
    "RunConfig",
    "load",
    "parse",
    "atom_sum_to_dict",
    "atom_sum_from_dict",
    "word_from_list",
    "scenario_from_dict",
]


class ConfigError(ValueError):
    """Invalid configuration (schema or semantic)."""


# -- schema ------------------------------------------------------------------------

_num = {"type": "number"}
_complex = {"type": "array", "items": _num, "minItems": 2, "maxItems": 2}
_vector = {"type": "array", "items": _num, "minItems": 1}
_matrix = {"type": "array", "items": _vector, "minItems": 1}
_rational = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": r"^\s*-?\d+\s*(/\s*\d+\s*)?$"}]}
_cmatrix = {
    "type": "array",
    "minItems": 1,
    "items": {"type": "array", "minItems": 1, "items": {"oneOf": [_num, _complex]}},
}
_index = {"type": "array", "items": {"type": "integer"}, "minItems": 1}

_atom = {
    "type": "object",
    "additionalProperties": False,
    "required": ["center", "width"],
    "properties": {
        "amp": _complex,
        "center": _vector,
        "freq": _vector,
        "width": _cmatrix,
    },
}

_window = {
    "type": "object",
    "additionalProperties": False,
    "minProperties": 1,
    "maxProperties": 1,
    "properties": {
        "atoms": {"type": "array", "items": _atom, "minItems": 1},
        "gaussian": {
            "type": "object",
            "additionalProperties": False,
            "required": ["dim"],
            "properties": {
                "dim": {"type": "integer", "minimum": 1},
                "width": {"type": "number", "exclusiveMinimum": 0},
                "exponent": {"type": "number", "exclusiveMinimum": 0},
                "amp": _complex,
            },
        },
        "sampled": {
            "type": "object",
            "additionalProperties": False,
            "required": ["name", "dim", "step", "half_extent"],
            "properties": {
                "name": {"enum": ["triangle", "hann", "box", "gaussian"]},
                "dim": {"type": "integer", "minimum": 1, "maximum": 2},
                "step": {"type": "number", "exclusiveMinimum": 0},
                "half_extent": {"type": "number", "exclusiveMinimum": 0},
                "scale": {"type": "number", "exclusiveMinimum": 0},
            },
        },
    },
}

_word = {
    "type": "array",
    "items": {
        "type": "object",
        "additionalProperties": False,
        "minProperties": 1,
        "maxProperties": 1,
        "properties": {"dilate": _matrix, "chirp": _matrix, "fourier": {"enum": [-1, 1]}},
    },
}


def _scenario_schema(depth: int) -> dict:
    variants = [
        {
            "properties": {
                "type": {"const": "semi-discrete"},
                "word": _word,
                "lattice": _matrix,
                "shift_lattice": _matrix,
            },
            "required": ["type"],
            "oneOf": [{"required": ["lattice"]}, {"required": ["shift_lattice"]}],
        },
        {
            "properties": {"type": {"const": "factored"}, "word": _word, "A": _matrix, "B": _matrix},
            "required": ["type", "A", "B"],
        },
        {"properties": {"type": {"const": "any-lattice-2d"}, "L": _matrix}, "required": ["type", "L"]},
        {"properties": {"type": {"const": "pauli"}, "A": _matrix, "B": _matrix}, "required": ["type", "A", "B"]},
        {"properties": {"type": {"const": "real-sign"}, "lattice": _matrix}, "required": ["type", "lattice"]},
        {
            "properties": {
                "type": {"const": "rational"},
                "L": {"type": "array", "items": {"type": "array", "items": _rational}},
            },
            "required": ["type", "L"],
        },
    ]
    if depth > 0:
        variants.append(
            {
                "properties": {"type": {"const": "shifted"}, "base": _scenario_schema(depth - 1), "p": _vector},
                "required": ["type", "base", "p"],
            }
        )
    for v in variants:
        v["type"] = "object"
        v["additionalProperties"] = False
    return {"oneOf": variants}


_entries = {
    "type": "array",
    "items": {
        "type": "object",
        "additionalProperties": False,
        "required": ["index", "value"],
        "properties": {"index": _index, "value": _complex},
    },
}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "note": {"type": "string"},
        "window": _window,
        "scenario": _scenario_schema(2),
        "sequence": {**_entries, "minItems": 1},
        "partner": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "mode": {"enum": ["conjugate", "identical"]},
                "perturbation": _entries,
            },
        },
        "verification": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "points": {"type": "integer", "minimum": 1},
                "radius": {"type": "number", "exclusiveMinimum": 0},
                "tol": {"type": "number", "exclusiveMinimum": 0},
                "seed": {"type": "integer", "minimum": 0},
                "explicit_points": {"type": "array", "items": _vector, "minItems": 1},
                "off_set_probes": {"type": "array", "items": _vector},
                "off_set_min_rel": {"type": "number", "minimum": 0},
                "phase_min_rel": {"type": "number", "minimum": 0},
                "modulus_tol": {"type": "number", "exclusiveMinimum": 0},
                "real_tol": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "required": ["x", "omega_start", "omega_stop", "num"],
            "properties": {
                "x": _vector,
                "omega_start": _vector,
                "omega_stop": _vector,
                "num": {"type": "array", "items": {"type": "integer", "minimum": 2}, "minItems": 1},
                "node_tol": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "lattice": _matrix,
        "outputs": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "report": {"type": "string"},
                "grid_csv": {"type": "string"},
                "png": {"type": "string"},
            },
        },
    },
}

DEFAULT_VERIFICATION = {
    "points": 50,
    "radius": 10.0,
    "tol": 1e-9,
    "seed": 0,
    "off_set_probes": [],
    "off_set_min_rel": 1e-3,
    "phase_min_rel": 1e-6,
    "modulus_tol": 1e-12,
    "real_tol": 1e-10,
}

DEFAULT_OUTPUTS = {"report": "report.json", "grid_csv": "qx.csv", "png": "qx.png"}


# -- conversions ---------------------------------------------------------------------


def _cx(v) -> complex:
    return complex(v[0], v[1])


def _cx_out(z: complex) -> list:
    return [float(z.real), float(z.imag)]


def atom_sum_to_dict(f: AtomSum) -> list:
    return [
        {
            "amp": _cx_out(a.amp),
            "center": a.center.tolist(),
            "freq": a.freq.tolist(),
            "width": [[_cx_out(z) for z in row] for row in a.width],
        }
        for a in f.atoms
    ]


def atom_sum_from_dict(items: list) -> AtomSum:
    out = []
    for it in items:
        center = np.asarray(it["center"], dtype=float)
        width = np.array([[complex(*z) if isinstance(z, list) else z for z in row] for row in it["width"]], dtype=complex)
        out.append(GaussAtom(_cx(it.get("amp", [1, 0])), center, it.get("freq", np.zeros_like(center)), width))
    return AtomSum(out)


def _window(spec: dict):
    if "atoms" in spec:
        return atom_sum_from_dict(spec["atoms"])
    if "gaussian" in spec:
        g = spec["gaussian"]
        if "width" in g and "exponent" in g:
            raise ConfigError("gaussian window takes either 'width' or 'exponent', not both")
        width = g["exponent"] / math.pi if "exponent" in g else g.get("width", 1.0)
        return AtomSum.gaussian(width, g["dim"], amp=_cx(g.get("amp", [1, 0])))
    s = spec["sampled"]
    return named_window(s["name"], s["dim"], s["step"], s["half_extent"], s.get("scale", 1.0))


def word_from_list(items: list, dim: int) -> SympWord:
    gens = []
    for it in items:
        if "dilate" in it:
            gens.append(Dilate(it["dilate"]))
        elif "chirp" in it:
            gens.append(Chirp(it["chirp"]))
        else:
            gens.append(FourierJ(it["fourier"], dim))
    return SympWord(gens, dim)


def _rational_entry(e) -> Fraction:
    return Fraction(e.replace(" ", "")) if isinstance(e, str) else Fraction(e)


def scenario_from_dict(spec: dict, dim: int):
    """Turn a validated scenario dict into a scenario object."""
    kind = spec["type"]
    word = lambda: word_from_list(spec.get("word", []), dim)  # noqa: E731
    if kind == "semi-discrete":
        if "lattice" in spec:
            lat = Lattice(spec["lattice"])
        else:
            lat = reciprocal(Lattice(spec["shift_lattice"]))
        return factory.SemiDiscrete(word(), lat)
    if kind == "factored":
        return factory.FactoredLattice(word(), np.asarray(spec["A"], float), np.asarray(spec["B"], float))
    if kind == "any-lattice-2d":
        return factory.AnyLattice2D(np.asarray(spec["L"], float))
    if kind == "pauli":
        return factory.PauliSeparable(np.asarray(spec["A"], float), np.asarray(spec["B"], float))
    if kind == "real-sign":
        return factory.RealSign(Lattice(spec["lattice"]))
    if kind == "rational":
        return factory.RationalLattice(tuple(tuple(_rational_entry(e) for e in row) for row in spec["L"]))
    if kind == "shifted":
        return factory.Shifted(scenario_from_dict(spec["base"], dim), np.asarray(spec["p"], float))
    raise ConfigError(f"unknown scenario type {kind!r}")


def _entries(items) -> dict:
    out = {}
    for it in items:
        key = tuple(it["index"])
        if key in out:
            raise ConfigError(f"duplicate sequence index {list(key)}")
        out[key] = _cx(it["value"])
    return out


# -- run config ------------------------------------------------------------------------


@dataclass
class RunConfig:
    raw: dict
    window: AtomSum | SampledWindow | None
    scenario: object | None
    sequence: dict | None
    partner_mode: str
    perturbation: dict
    verification: dict
    grid: dict | None
    lattice: Lattice | None
    outputs: dict

    @property
    def dim(self) -> int | None:
        return None if self.window is None else self.window.dim

    @property
    def sampled(self) -> bool:
        return isinstance(self.window, SampledWindow)

    def require(self, *keys: str):
        missing = [k for k in keys if getattr(self, k) is None]
        if missing:
            raise ConfigError(f"config is missing required section(s): {', '.join(missing)}")


def parse(raw: dict, tol: float | None = None) -> RunConfig:
    """Validate and convert a config dict.

    Raises
    ------
    ConfigError
        On schema violations or inconsistent values.
    """
    try:
        jsonschema.validate(raw, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"invalid config at {where}: {exc.message}") from None
    raw = copy.deepcopy(raw)
    ver = {**DEFAULT_VERIFICATION, **raw.get("verification", {})}
    if tol is not None:
        ver["tol"] = float(tol)
    try:
        window = _window(raw["window"]) if "window" in raw else None
        dim = window.dim if window is not None else None
        scenario = None
        if "scenario" in raw:
            if dim is None:
                raise ConfigError("a scenario needs a window to fix the dimension")
            scenario = scenario_from_dict(raw["scenario"], dim)
        lattice = Lattice(raw["lattice"]) if "lattice" in raw else None
    except ConfigError:
        raise
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ConfigError(str(exc)) from None
    partner = raw.get("partner", {})
    grid = raw.get("grid")
    if grid is not None and dim is not None:
        for key in ("x", "omega_start", "omega_stop", "num"):
            if len(grid[key]) != dim:
                raise ConfigError(f"grid.{key} must have {dim} entries")
    return RunConfig(
        raw=raw,
        window=window,
        scenario=scenario,
        sequence=_entries(raw["sequence"]) if "sequence" in raw else None,
        partner_mode=partner.get("mode", "conjugate"),
        perturbation=_entries(partner.get("perturbation", [])),
        verification=ver,
        grid=grid,
        lattice=lattice,
        outputs={**DEFAULT_OUTPUTS, **raw.get("outputs", {})},
    )


def load(path, tol: float | None = None) -> RunConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse(raw, tol)


def sequence_for(cfg: RunConfig, shift_lattice: Lattice) -> CoeffSeq | None:
    return None if cfg.sequence is None else CoeffSeq(shift_lattice, cfg.sequence)
