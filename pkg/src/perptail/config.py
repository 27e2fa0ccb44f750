"""Experiment configuration: JSON keys, defaults and field-level validation."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigError, DomainError
from .simulate import DEFAULT_EPS_TRUNC
from .tail_models import MixingLaw, family_params, law_from_json

LAW_KEYS = ("family", "c", "alpha", "beta", "eta", "p", "base")
RUN_KEYS = ("q", "xs", "grid", "n_samples", "seed", "workers", "eps_trunc", "out")
CONFIG_KEYS = LAW_KEYS + RUN_KEYS
# families the runner accepts; "degenerate" is a test fixture only
RUNNER_FAMILIES = ("power_uniform", "weibull_at_one", "log_power", "gamma_exp",
                   "rapid_non_gamma", "atom_at_one")

DEFAULT_GRID_POINTS = 12
DEFAULT_N_SAMPLES = 100_000
SEED_LIMIT = 2 ** 64


@dataclass(frozen=True)
class ExperimentConfig:
    law_spec: dict
    q: float
    xs: tuple
    n_samples: int = DEFAULT_N_SAMPLES
    seed: int = 0
    workers: int = 1
    eps_trunc: float = DEFAULT_EPS_TRUNC
    out: Optional[str] = None

    @property
    def law(self) -> MixingLaw:
        return law_from_json(self.law_spec)

    def resolved(self) -> dict:
        """The fully expanded config, as echoed into the sidecar."""
        return {
            **self.law_spec,
            "q": self.q,
            "xs": list(self.xs),
            "n_samples": self.n_samples,
            "seed": self.seed,
            "workers": self.workers,
            "eps_trunc": self.eps_trunc,
            "out": self.out,
        }


def geometric_grid(x_min: float, x_max: float, points: int) -> tuple:
    xs = np.geomspace(x_min, x_max, points)
    # pin the endpoints exactly; geomspace can miss them by an ulp
    xs[0], xs[-1] = x_min, x_max
    return tuple(float(x) for x in xs)


def _number(raw: dict, key: str, positive: bool = True) -> float:
    v = raw[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(key, f"expected a number, got {v!r}")
    v = float(v)
    if not math.isfinite(v):
        raise ConfigError(key, f"must be finite, got {v}")
    if positive and not v > 0:
        raise ConfigError(key, f"must be positive, got {v}")
    return v


def _integer(raw: dict, key: str, lo: int, hi: Optional[int] = None) -> int:
    v = raw[key]
    if isinstance(v, bool) or not isinstance(v, int):
        if isinstance(v, float) and v.is_integer():
            v = int(v)
        else:
            raise ConfigError(key, f"expected an integer, got {v!r}")
    if v < lo or (hi is not None and v >= hi):
        bound = f"[{lo}, {hi})" if hi is not None else f">= {lo}"
        raise ConfigError(key, f"must be {bound}, got {v}")
    return v


def law_spec_from_dict(raw: dict, prefix: str = "") -> dict:
    """Validated law spec from the law keys of ``raw``; other keys are ignored."""
    fam = raw.get("family")
    if fam is None:
        raise ConfigError(prefix + "family", "is required")
    if fam not in RUNNER_FAMILIES:
        raise ConfigError(prefix + "family", f"unknown family {fam!r}; expected one of {RUNNER_FAMILIES}")
    spec = {"family": fam}
    for key in family_params(fam):
        if key not in raw or raw[key] is None:
            raise ConfigError(prefix + key, f"is required for family {fam!r}")
        if key == "base":
            base = raw[key]
            if not isinstance(base, dict):
                raise ConfigError(prefix + "base", "must be a JSON object describing a law")
            extra = set(base) - set(LAW_KEYS)
            if extra:
                raise ConfigError(prefix + "base", f"unknown keys {sorted(extra)}")
            spec[key] = law_spec_from_dict(base, prefix + "base.")
        else:
            spec[key] = _number(raw, key, positive=False)
    try:
        law_from_json(spec)
    except DomainError as exc:
        bad = next((k for k in family_params(fam) if f"needs {k}" in str(exc)), "family")
        raise ConfigError(prefix + bad, str(exc)) from None
    return spec


def config_from_dict(raw: dict) -> ExperimentConfig:
    """Validate a config mapping; every failure names its field."""
    if not isinstance(raw, dict):
        raise ConfigError("config", "must be a JSON object")
    unknown = set(raw) - set(CONFIG_KEYS)
    if unknown:
        k = sorted(unknown)[0]
        raise ConfigError(k, f"unknown key; allowed keys are {CONFIG_KEYS}")
    law_spec = law_spec_from_dict(raw)
    if "q" not in raw:
        raise ConfigError("q", "is required")
    q = _number(raw, "q")

    if "xs" in raw and "grid" in raw:
        raise ConfigError("xs", "give either xs or grid, not both")
    if "xs" in raw:
        vals = raw["xs"]
        if not isinstance(vals, list) or not vals:
            raise ConfigError("xs", "must be a nonempty list of numbers")
        xs = tuple(_number({"xs": v}, "xs") for v in vals)
    else:
        g = raw.get("grid") or {}
        if not isinstance(g, dict):
            raise ConfigError("grid", "must be an object {x_min, x_max, points}")
        extra = set(g) - {"x_min", "x_max", "points"}
        if extra:
            raise ConfigError("grid", f"unknown keys {sorted(extra)}")
        g = {"x_min": 2.0 * q, "x_max": 50.0 * q, "points": DEFAULT_GRID_POINTS, **g}
        x_min = _number(g, "x_min")
        x_max = _number(g, "x_max")
        points = _integer(g, "points", 2)
        if not x_max > x_min:
            raise ConfigError("grid", f"x_max must exceed x_min, got {x_min}..{x_max}")
        xs = geometric_grid(x_min, x_max, points)
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise ConfigError("xs", "must be strictly increasing")

    n_samples = _integer({**raw, "n_samples": raw.get("n_samples", DEFAULT_N_SAMPLES)},
                         "n_samples", 1)
    seed = _integer({**raw, "seed": raw.get("seed", 0)}, "seed", 0, SEED_LIMIT)
    workers = _integer({**raw, "workers": raw.get("workers", 1)}, "workers", 1)
    eps = _number({**raw, "eps_trunc": raw.get("eps_trunc", DEFAULT_EPS_TRUNC)}, "eps_trunc")
    if not eps < 1:
        raise ConfigError("eps_trunc", f"must lie in (0, 1), got {eps}")
    out = raw.get("out")
    if out is not None and not isinstance(out, str):
        raise ConfigError("out", "must be a file path string")
    return ExperimentConfig(law_spec, q, xs, n_samples, seed, workers, eps, out)


def load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"{path} is not valid JSON: {exc}") from None
