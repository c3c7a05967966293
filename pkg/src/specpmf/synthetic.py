"""Ground-truth PMFs and a reproducible sampler for benchmarking.

Five families cover the qualitative shapes the estimator is aimed at: one- and
two-sided power laws, their mixtures, a discretized bell, and a flat plateau
with an abrupt edge (a known-hard case kept deliberately in the catalog).
Named presets over a 5000-cell support live in ``data/presets.json`` and are
versioned: benchmark numbers always cite a preset, never loose parameters.

Sampling is exact inverse-CDF over the closed-form PMF, driven by the
counter-based generator in :mod:`specpmf.rng`, so batches are reproducible
byte for byte from (spec, seed, n).
"""

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Union

import numpy as np

from . import rng
from .errors import ParameterError


@dataclass(frozen=True)
class Zipf:
    """One-sided power law, mass proportional to (a + i)^(-b)."""

    a: float
    b: float


@dataclass(frozen=True)
class CenteredZipf:
    """Two-sided power law around mu, mass proportional to (a + |i - mu|)^(-b)."""

    a: float
    b: float
    mu: int


@dataclass(frozen=True)
class Bell:
    """Gaussian density discretized at integer points and normalized."""

    mu: float
    sigma: float


@dataclass(frozen=True)
class MidPlateau:
    """Uniform block on [lo, hi] plus a uniform floor on the rest."""

    lo: int
    hi: int
    floor_mass: float


@dataclass(frozen=True)
class Mixture:
    """Convex combination of component distributions on a shared support."""

    weights: tuple
    components: tuple  # of DistributionSpec


Variant = Union[Zipf, CenteredZipf, Bell, MidPlateau, Mixture]


@dataclass(frozen=True)
class DistributionSpec:
    variant: Variant
    support_size: int


@dataclass(frozen=True)
class SampleBatch:
    """Draws from a spec; identical (spec, seed, n) always gives identical values."""

    spec: DistributionSpec
    seed: int
    values: np.ndarray


def pmf(spec: DistributionSpec) -> np.ndarray:
    """Exact normalized PMF of a spec over {0, ..., support_size - 1}."""
    n = spec.support_size
    if n < 1:
        raise ParameterError("support_size must be at least 1")
    v = spec.variant
    idx = np.arange(n, dtype=np.float64)
    if isinstance(v, Zipf):
        if v.a <= 0:
            raise ParameterError("zipf offset a must be positive")
        w = (v.a + idx) ** (-v.b)
    elif isinstance(v, CenteredZipf):
        if v.a <= 0:
            raise ParameterError("zipf offset a must be positive")
        w = (v.a + np.abs(idx - v.mu)) ** (-v.b)
    elif isinstance(v, Bell):
        if v.sigma <= 0:
            raise ParameterError("bell sigma must be positive")
        z = (idx - v.mu) / v.sigma
        w = np.exp(-0.5 * z * z)
    elif isinstance(v, MidPlateau):
        if not 0 <= v.lo <= v.hi < n:
            raise ParameterError("plateau block must satisfy 0 <= lo <= hi < N")
        if not 0.0 <= v.floor_mass < 1.0:
            raise ParameterError("floor_mass must lie in [0, 1)")
        w = np.zeros(n)
        block = v.hi - v.lo + 1
        outside = n - block
        if outside == 0:
            w[:] = 1.0 / n
        else:
            w[v.lo : v.hi + 1] = (1.0 - v.floor_mass) / block
            w[: v.lo] = v.floor_mass / outside
            w[v.hi + 1 :] = v.floor_mass / outside
        return w
    elif isinstance(v, Mixture):
        weights = np.asarray(v.weights, dtype=np.float64)
        if weights.size != len(v.components) or weights.size == 0:
            raise ParameterError("mixture needs one weight per component")
        if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-12:
            raise ParameterError("mixture weights must lie on the simplex")
        w = np.zeros(n)
        for weight, comp in zip(weights, v.components):
            if comp.support_size != n:
                raise ParameterError("mixture components must share the support")
            w += weight * pmf(comp)
        return w / w.sum()
    else:
        raise ParameterError(f"unknown distribution variant {type(v).__name__}")
    return w / w.sum()


def sample(spec: DistributionSpec, n: int, seed: int) -> SampleBatch:
    """n inverse-CDF draws using stream ``seed`` of the counter generator."""
    if n < 1:
        raise ParameterError("sample size must be at least 1")
    cdf = np.cumsum(pmf(spec))
    u = rng.random_uniform(seed, n)
    values = np.searchsorted(cdf, u, side="right")
    np.minimum(values, spec.support_size - 1, out=values)
    return SampleBatch(spec=spec, seed=int(seed), values=values.astype(np.int64))


# ---------------------------------------------------------------------------
# preset catalog (frozen fixture, see data/presets.json)
# ---------------------------------------------------------------------------


def spec_from_dict(d: dict) -> DistributionSpec:
    """Parse the JSON fixture encoding of a spec."""
    kind = d.get("variant")
    n = int(d["support_size"])
    if kind == "zipf":
        v = Zipf(a=float(d["a"]), b=float(d["b"]))
    elif kind == "centered-zipf":
        v = CenteredZipf(a=float(d["a"]), b=float(d["b"]), mu=int(d["mu"]))
    elif kind == "bell":
        v = Bell(mu=float(d["mu"]), sigma=float(d["sigma"]))
    elif kind == "mid-plateau":
        v = MidPlateau(lo=int(d["lo"]), hi=int(d["hi"]), floor_mass=float(d["floor_mass"]))
    elif kind == "mixture":
        v = Mixture(
            weights=tuple(float(w) for w in d["weights"]),
            components=tuple(spec_from_dict(c) for c in d["components"]),
        )
    else:
        raise ParameterError(f"unknown distribution variant {kind!r}")
    return DistributionSpec(variant=v, support_size=n)


def spec_to_dict(spec: DistributionSpec) -> dict:
    v = spec.variant
    if isinstance(v, Zipf):
        d = {"variant": "zipf", "a": v.a, "b": v.b}
    elif isinstance(v, CenteredZipf):
        d = {"variant": "centered-zipf", "a": v.a, "b": v.b, "mu": v.mu}
    elif isinstance(v, Bell):
        d = {"variant": "bell", "mu": v.mu, "sigma": v.sigma}
    elif isinstance(v, MidPlateau):
        d = {"variant": "mid-plateau", "lo": v.lo, "hi": v.hi, "floor_mass": v.floor_mass}
    else:
        d = {
            "variant": "mixture",
            "weights": list(v.weights),
            "components": [spec_to_dict(c) for c in v.components],
        }
    d["support_size"] = spec.support_size
    return d


@lru_cache(maxsize=1)
def catalog() -> dict:
    """Name -> DistributionSpec for every frozen preset."""
    raw = resources.files("specpmf").joinpath("data/presets.json").read_text("utf-8")
    doc = json.loads(raw)
    return {name: spec_from_dict(d) for name, d in doc["presets"].items()}


def preset_names() -> tuple:
    return tuple(catalog().keys())


def preset(name: str) -> DistributionSpec:
    try:
        return catalog()[name]
    except KeyError:
        known = ", ".join(sorted(catalog()))
        raise ParameterError(f"unknown preset {name!r}; known presets: {known}") from None
