"""Multitask adaptation over graphs: simulation, closed-form theory and self-checks."""

import json
import os

import numpy as np

from ._netmtl import (
    ConfigError,
    DivergenceError,
    IoError,
    NumericalError,
    laplacian_spectrum,
    metropolis_weights,
    msd_noncooperative,
    prox_l1_scalar,
    social_spectral,
)
from . import _netmtl

__all__ = [
    "ConfigError",
    "DivergenceError",
    "IoError",
    "NumericalError",
    "check",
    "laplacian_spectrum",
    "load",
    "metropolis_weights",
    "msd_noncooperative",
    "prox_l1_scalar",
    "run",
    "social_spectral",
    "theory",
]


def load(path):
    """Read a config file into a dict; relative paths inside it resolve next to the file."""
    with open(path) as fh:
        doc = json.load(fh)
    doc.setdefault("_base_dir", os.path.dirname(os.path.abspath(path)))
    return doc


def _split(config):
    doc = dict(config)
    base = doc.pop("_base_dir", "")
    return json.dumps(doc), base


def run(config, seed=None, iters=None, runs=None, parallel=None):
    text, base = _split(config)
    out = json.loads(_netmtl.run_json(text, base, seed=seed, iters=iters, runs=runs, parallel=parallel))
    out["msd_wo"] = np.asarray(out["msd_wo"])
    out["msd_wstar"] = np.asarray(out["msd_wstar"])
    return out


def theory(config):
    text, base = _split(config)
    return json.loads(_netmtl.theory_json(text, base))


def check(config):
    text, base = _split(config)
    return json.loads(_netmtl.check_json(text, base))
