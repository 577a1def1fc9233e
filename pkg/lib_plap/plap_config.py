#!/usr/bin/env python3
#
############################################################################
#
# MODULE:      plap_config
# AUTHOR(S):   m.plap.homoclinic developers
#
# PURPOSE:     Run configuration of m.plap.homoclinic: JSON loading,
#              dotted overrides, schema validation and the parallel setup
# COPYRIGHT:   (C) 2026 by the m.plap.homoclinic developers and the GRASS
#              Development Team
#
# This program is free software; you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 2 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
############################################################################

import copy
import json
import os
from dataclasses import asdict, dataclass, fields

from grass_gis_helpers.general import set_nprocs

from plap_energy import check_lambda
from plap_errors import ConfigError, InvalidParameterError
from plap_lattice import Exponent, WeightPair, WeightSeq
from plap_nonlinearity import (
    OscillatorySpec,
    SequenceRule,
    desk_heights,
    desk_spec,
    make_example1,
    make_example2,
    make_kuang_family,
    make_zero,
)
from plap_solver import SolverParams

VERSION = "1.0.0"

BUILTINS = ("example1", "example2", "kuang", "zero")

TOP_KEYS = (
    "p",
    "lambda",
    "N",
    "seed",
    "output_dir",
    "weights",
    "nonlinearity",
    "solver",
    "probe",
    "gradcheck",
)
REQUIRED_KEYS = ("p", "lambda", "N", "weights", "nonlinearity")
WEIGHT_KEYS = ("kind", "c0", "c1", "alpha", "values", "default", "coercive_from")
SEQUENCE_KEYS = ("kind", "a", "b", "alpha", "values", "overflow")
NONLINEARITY_KEYS = ("builtin", "spec", "params")
SPEC_KEYS = ("c", "d", "h", "n_max")
PARAM_KEYS = {
    "example1": ("side",),
    "example2": (),
    "kuang": ("mu", "nu"),
    "zero": (),
}


@dataclass(frozen=True)
class ProbeSettings:
    k_max: int = 32
    k_thresholds: tuple = (1, 2, 4, 8)
    t_count: int = 64
    f1_grid: tuple = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6)
    f3_K: tuple = (20, 40, 80)
    samples_per_interval: int = 16
    levels: int = 10


@dataclass(frozen=True)
class GradcheckSettings:
    vectors: int = 100
    window: int = 41
    h: float = 1e-6
    low: float = 0.1
    high: float = 1.0
    tolerance: float = 1e-5
    tolerance_kink: float = 1e-4


@dataclass
class RunConfig:
    """Validated run configuration with the objects built from it"""

    p: float
    lam: float
    N: int
    seed: int
    output_dir: str
    weights: WeightPair
    builtin: str
    spec: OscillatorySpec
    nonlinearity: object
    solver: SolverParams
    probe: ProbeSettings
    gradcheck: GradcheckSettings
    echo: dict


def setup_parallel_processing(nprocs):
    """Get possible number of workers and modify environment variables
    Args:
        nprocs (int): Number of workers to use
    Returns:
        nprocs (int): Possible number of workers to use
    """
    nprocs = set_nprocs(nprocs)
    os.environ.update({"GRASS_MESSAGE_FORMAT": "plain"})
    return nprocs


def _check_keys(section, allowed, where):
    if not isinstance(section, dict):
        raise ConfigError(f"<{where}> must be a JSON object")
    for key in section:
        if key not in allowed:
            raise ConfigError(f"Unknown key <{where}.{key}>".replace("<.", "<"))


def _number(value, where, kind=float):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"<{where}> must be a number, got {value!r}")
    if kind is int:
        if int(value) != value:
            raise ConfigError(f"<{where}> must be an integer, got {value!r}")
        return int(value)
    return float(value)


def parse_override(text):
    """Split "key=value" and decode the value as JSON, else as a string"""
    if "=" not in text:
        raise ConfigError(f"Override <{text}> is not of the form key=value")
    key, raw = text.split("=", 1)
    key = key.strip()
    if not key:
        raise ConfigError(f"Override <{text}> has an empty key")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    if isinstance(value, (dict, list)):
        raise ConfigError(f"Override <{key}> must be a scalar")
    return key, value


def apply_overrides(doc, overrides):
    """Set dotted keys like solver.tol_pg=1e-9 in a copy of doc"""
    doc = copy.deepcopy(doc)
    for text in overrides:
        key, value = parse_override(text)
        parts = key.split(".")
        node = doc
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ConfigError(f"Override <{key}> does not address a field")
        node[parts[-1]] = value
    return doc


def weight_from_doc(doc, where):
    _check_keys(doc, WEIGHT_KEYS, where)
    kind = doc.get("kind")
    coercive_from = doc.get("coercive_from")
    if coercive_from is not None:
        coercive_from = _number(coercive_from, f"{where}.coercive_from", int)
    if kind == "table":
        if "default" not in doc:
            raise ConfigError(f"<{where}> of kind table needs a <default> rule")
        values = {
            int(k): _number(v, f"{where}.values.{k}")
            for k, v in dict(doc.get("values", {})).items()
        }
        return WeightSeq.from_table(
            values,
            weight_from_doc(doc["default"], f"{where}.default"),
            coercive_from,
        )
    c0 = _number(doc.get("c0", 1.0), f"{where}.c0")
    c1 = _number(doc.get("c1", 0.0), f"{where}.c1")
    if kind == "constant":
        return WeightSeq("constant", c0=c0, coercive_from=coercive_from)
    if kind == "affine_abs":
        return WeightSeq.affine_abs(c0, c1, coercive_from)
    if kind == "power":
        alpha = _number(doc.get("alpha", 1.0), f"{where}.alpha")
        return WeightSeq.power(c0, c1, alpha, coercive_from)
    raise ConfigError(f"<{where}.kind> must be one of constant, affine_abs, power, table")


def sequence_from_doc(doc, where):
    _check_keys(doc, SEQUENCE_KEYS, where)
    kind = doc.get("kind")
    if kind == "list":
        if "overflow" not in doc:
            raise ConfigError(f"<{where}> of kind list needs an <overflow> rule")
        values = tuple(
            _number(v, f"{where}.values[{i}]") for i, v in enumerate(doc.get("values", []))
        )
        return SequenceRule(
            "list",
            values=values,
            overflow=sequence_from_doc(doc["overflow"], f"{where}.overflow"),
        )
    if kind not in ("linear", "power"):
        raise ConfigError(f"<{where}.kind> must be one of linear, power, list")
    return SequenceRule(
        kind,
        a=_number(doc.get("a", 1.0), f"{where}.a"),
        b=_number(doc.get("b", 0.0), f"{where}.b"),
        alpha=_number(doc.get("alpha", 1.0), f"{where}.alpha"),
    )


def spec_from_doc(doc, builtin, weights, p, side):
    """OscillatorySpec of a nonlinearity section, desk defaults if absent"""
    side_sign = 1 if side == "positive" else -1
    # example1 and example2 derive their "auto" masses, the other builtins
    # only use c_n and d_n
    auto_kind = builtin if builtin in ("example1", "example2") else "example2"
    if doc is None:
        return desk_spec(auto_kind, weights, p, side_sign)
    _check_keys(doc, SPEC_KEYS, "nonlinearity.spec")
    n_max = _number(doc.get("n_max", 64), "nonlinearity.spec.n_max", int)
    desk = desk_spec(auto_kind, weights, p, side_sign, n_max)
    c = sequence_from_doc(doc["c"], "nonlinearity.spec.c") if "c" in doc else desk.c
    d = sequence_from_doc(doc["d"], "nonlinearity.spec.d") if "d" in doc else desk.d
    h_doc = doc.get("h", "auto")
    if h_doc == "auto":
        h = desk_heights(auto_kind, weights, p, c, side_sign)
    else:
        h = sequence_from_doc(h_doc, "nonlinearity.spec.h")
    return OscillatorySpec(c=c, d=d, h=h, n_max=n_max)


def nonlinearity_from_doc(doc, weights, p):
    """Build (builtin, spec, nonlinearity) from the nonlinearity section"""
    _check_keys(doc, NONLINEARITY_KEYS, "nonlinearity")
    builtin = doc.get("builtin")
    if builtin not in BUILTINS:
        raise ConfigError(
            f"<nonlinearity.builtin> must be one of {', '.join(BUILTINS)}, "
            f"got {builtin!r}",
        )
    params = doc.get("params", {})
    _check_keys(params, PARAM_KEYS[builtin], "nonlinearity.params")
    side = params.get("side", "positive")
    if side not in ("positive", "negative"):
        raise ConfigError("<nonlinearity.params.side> must be positive or negative")
    spec = spec_from_doc(doc.get("spec"), builtin, weights, p, side)
    if builtin == "example1":
        nl = make_example1(spec, weights, p, side)
    elif builtin == "example2":
        nl = make_example2(spec, weights, p)
    elif builtin == "kuang":
        nl = make_kuang_family(
            _number(params.get("mu", 2.0), "nonlinearity.params.mu"),
            _number(params.get("nu", 1.0), "nonlinearity.params.nu"),
            p,
        )
        spec.validate()
    else:
        nl = make_zero()
        spec.validate()
    return builtin, spec, nl


def _settings(cls, doc, where):
    doc = doc or {}
    names = [f.name for f in fields(cls)]
    _check_keys(doc, names, where)
    values = {}
    for fld in fields(cls):
        if fld.name not in doc:
            continue
        value = doc[fld.name]
        if isinstance(fld.default, tuple):
            if not isinstance(value, list):
                raise ConfigError(f"<{where}.{fld.name}> must be a list")
            values[fld.name] = tuple(value)
        elif value is None:
            values[fld.name] = None
        else:
            kind = int if "int" in str(fld.type) else float
            values[fld.name] = _number(value, f"{where}.{fld.name}", kind)
    return cls(**values)


def build_config(doc):
    """Validate a configuration document and build the run objects

    Raises:
        ConfigError: For unknown keys, missing keys and invalid values
    """
    _check_keys(doc, TOP_KEYS, "")
    for key in REQUIRED_KEYS:
        if key not in doc:
            raise ConfigError(f"Missing required key <{key}>")
    try:
        p = Exponent(_number(doc["p"], "p"))
        lam = check_lambda(_number(doc["lambda"], "lambda"))
        n_levels = _number(doc["N"], "N", int)
        if n_levels < 1:
            raise InvalidParameterError(f"N must be >= 1, got {n_levels}")
        seed = _number(doc.get("seed", 0), "seed", int)
        output_dir = str(doc.get("output_dir", "."))
        _check_keys(doc["weights"], ("a", "b"), "weights")
        for key in ("a", "b"):
            if key not in doc["weights"]:
                raise ConfigError(f"Missing required key <weights.{key}>")
        weights = WeightPair(
            a=weight_from_doc(doc["weights"]["a"], "weights.a"),
            b=weight_from_doc(doc["weights"]["b"], "weights.b"),
        )
        if not weights.b0 > 0:
            raise InvalidParameterError("The weight b needs b(k) >= b_0 > 0")
        builtin, spec, nl = nonlinearity_from_doc(doc["nonlinearity"], weights, p)
        solver = _settings(SolverParams, doc.get("solver"), "solver")
        probe = _settings(ProbeSettings, doc.get("probe"), "probe")
        gradcheck = _settings(GradcheckSettings, doc.get("gradcheck"), "gradcheck")
    except InvalidParameterError as exc:
        raise ConfigError(str(exc)) from exc

    echo = {
        "p": float(p),
        "lambda": lam,
        "N": n_levels,
        "seed": seed,
        "output_dir": output_dir,
        "weights": copy.deepcopy(doc["weights"]),
        "nonlinearity": copy.deepcopy(doc["nonlinearity"]),
        "solver": asdict(solver),
        "probe": {k: list(v) if isinstance(v, tuple) else v for k, v in asdict(probe).items()},
        "gradcheck": asdict(gradcheck),
    }
    return RunConfig(
        p=float(p),
        lam=lam,
        N=n_levels,
        seed=seed,
        output_dir=output_dir,
        weights=weights,
        builtin=builtin,
        spec=spec,
        nonlinearity=nl,
        solver=solver,
        probe=probe,
        gradcheck=gradcheck,
        echo=echo,
    )


def load_config(path, overrides=(), output_dir=None):
    """Read, override and validate a JSON run configuration

    Args:
        path (str): Path to the JSON document
        overrides (list): "key=value" strings with dotted keys
        output_dir (str): Replaces the output_dir of the document if set

    Returns:
        (RunConfig): The validated configuration
    """
    try:
        with open(path, encoding="utf-8") as src:
            doc = json.load(src)
    except OSError as exc:
        raise ConfigError(f"Cannot read configuration <{path}>: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"Configuration <{path}> is not valid JSON: {exc}") from exc
    doc = apply_overrides(doc, overrides)
    if output_dir:
        doc["output_dir"] = output_dir
    return build_config(doc)
