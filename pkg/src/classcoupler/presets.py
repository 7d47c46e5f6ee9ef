"""Built-in model presets and the JSON model-configuration format.

Single-mean configuration::

    {"model": "single_mean",
     "data": [0.575, 1.808, ...],
     "atom_weight": 0.5,
     "slab_variance": 100.0,          # optional "slab_mean", default 0
     "atom_location": 0.0,            # optional, default 0
     "variance": {"inverse_gamma": {"shape": 1.0, "rate": 0.05}}}
                 # or {"known": 1.0}

Two-sample configuration::

    {"model": "two_sample",
     "data": [[...group 1...], [...group 2...]],
     "atom_weight": 0.5,
     "equal_slab_variance": 100.0,    # f1, prior of the common mean
     "diff_slab_variance": 100.0,     # f2, prior of each mean off the null
     "variance": {"known": [v1, v2]}
               # or {"common": {"shape": k1, "rate": k2}}
               # or {"separate": [{"shape": .., "rate": ..}, {"shape": .., "rate": ..}]}}

IMH demo configuration::

    {"model": "imh_discrete", "weights": [1, 2, 3, 4, 5]}
"""

from __future__ import annotations

import json
from pathlib import Path

from .distributions import AtomMixturePrior, InvGammaParams, NormalParams
from .imh import discrete_target
from .models import (
    CommonVariance,
    KnownVariances,
    SeparateVariances,
    SingleMeanModel,
    TwoSampleModel,
)

SIM_DATA = (0.575, 1.808, 0.532, -0.168, 0.529, 0.888, -1.368, -0.512, 2.667, 0.874)

# Synthetic two-sample data for the case presets (no published data set).
TWO_SAMPLE_DATA = (
    (0.31, -0.42, 1.05, 0.27, -0.88, 0.64),
    (1.12, 0.58, 1.87, 0.44, 1.31, 0.95),
)

PRESETS: dict[str, dict] = {
    "sim1": {
        "model": "single_mean", "data": list(SIM_DATA), "atom_weight": 0.5,
        "slab_variance": 100.0,
        "variance": {"inverse_gamma": {"shape": 1.0, "rate": 0.05}},
    },
    "sim2": {
        "model": "single_mean", "data": list(SIM_DATA), "atom_weight": 0.5,
        "slab_variance": 100.0,
        "variance": {"inverse_gamma": {"shape": 1.0, "rate": 1.0}},
    },
    "two-sample-case1": {
        "model": "two_sample", "data": [list(g) for g in TWO_SAMPLE_DATA], "atom_weight": 0.5,
        "equal_slab_variance": 10.0, "diff_slab_variance": 10.0,
        "variance": {"known": [0.5, 0.5]},
    },
    "two-sample-case2": {
        "model": "two_sample", "data": [list(g) for g in TWO_SAMPLE_DATA], "atom_weight": 0.5,
        "equal_slab_variance": 10.0, "diff_slab_variance": 10.0,
        "variance": {"common": {"shape": 2.0, "rate": 1.0}},
    },
    "two-sample-case3": {
        "model": "two_sample", "data": [list(g) for g in TWO_SAMPLE_DATA], "atom_weight": 0.5,
        "equal_slab_variance": 10.0, "diff_slab_variance": 10.0,
        "variance": {"separate": [{"shape": 2.0, "rate": 1.0}, {"shape": 2.0, "rate": 1.0}]},
    },
    "imh-demo": {"model": "imh_discrete", "weights": [1, 2, 3, 4, 5]},
}


class ConfigError(ValueError):
    pass


def _ig(spec: dict) -> InvGammaParams:
    try:
        return InvGammaParams(float(spec["shape"]), float(spec["rate"]))
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"inverse-gamma spec needs 'shape' and 'rate': {spec!r}") from exc


def build_model(config: dict):
    """Model (or IMH target) described by a configuration mapping."""
    try:
        kind = config["model"]
        if kind == "imh_discrete":
            return discrete_target(config["weights"])
        p = float(config["atom_weight"])
        var = config["variance"]
        if kind == "single_mean":
            slab = NormalParams(float(config.get("slab_mean", 0.0)), float(config["slab_variance"]))
            prior = AtomMixturePrior(p, slab, float(config.get("atom_location", 0.0)))
            if "known" in var:
                variance = float(var["known"])
            elif "inverse_gamma" in var:
                variance = _ig(var["inverse_gamma"])
            else:
                raise ConfigError(f"unknown variance spec {var!r}")
            return SingleMeanModel(config["data"], prior, variance)
        if kind == "two_sample":
            y1, y2 = config["data"]
            if "known" in var:
                case = KnownVariances(*map(float, var["known"]))
            elif "common" in var:
                case = CommonVariance(_ig(var["common"]))
            elif "separate" in var:
                case = SeparateVariances(*(_ig(s) for s in var["separate"]))
            else:
                raise ConfigError(f"unknown variance spec {var!r}")
            return TwoSampleModel(
                y1, y2, p,
                NormalParams(0.0, float(config["equal_slab_variance"])),
                NormalParams(0.0, float(config["diff_slab_variance"])),
                case,
            )
    except KeyError as exc:
        raise ConfigError(f"missing configuration key {exc}") from exc
    raise ConfigError(f"unknown model kind {kind!r}")


def load_config(path: str | Path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
