"""Densities and replayable samplers for the normal, inverse-gamma and uniform laws.

All samplers are inverse-CDF transforms consuming exactly one uniform per
variate, so a stream position fully determines the output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .streams import UniformStream

LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class NormalParams:
    mean: float
    variance: float

    def __post_init__(self):
        if not (self.variance > 0 and math.isfinite(self.variance)):
            raise ValueError(f"normal variance must be positive and finite, got {self.variance}")


@dataclass(frozen=True)
class InvGammaParams:
    """Law of ``v`` where ``1/v ~ Gamma(shape, rate)``; ``E[1/v] = shape / rate``."""

    shape: float
    rate: float

    def __post_init__(self):
        if not (self.shape > 0 and self.rate > 0):
            raise ValueError(f"inverse-gamma shape and rate must be positive, got {self.shape}, {self.rate}")

    @property
    def mode(self) -> float:
        return self.rate / (self.shape + 1.0)


@dataclass(frozen=True)
class AtomMixturePrior:
    """``atom_weight * delta(atom_location) + (1 - atom_weight) * slab``."""

    atom_weight: float
    slab: NormalParams
    atom_location: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.atom_weight < 1.0:
            raise ValueError(f"atom weight must lie in (0, 1), got {self.atom_weight}")

    @property
    def log_odds(self) -> float:
        """``log(p / (1 - p))``."""
        return math.log(self.atom_weight) - math.log1p(-self.atom_weight)


def normal_quantile(u, params: NormalParams):
    return params.mean + math.sqrt(params.variance) * special.ndtri(u)


def invgamma_quantile_upper(u, params: InvGammaParams):
    """``v`` with ``P(V >= v) = 1 - u``, i.e. ``P(1/V >= 1/v) = u``.

    Shape 1 is handled by the closed form ``-log(u)`` of the gamma upper-tail
    inverse.
    """
    if params.shape == 1.0:
        g = -np.log(u)
    else:
        g = special.gammainccinv(params.shape, u)
    return params.rate / g


def uniform01(stream: UniformStream, size: int | None = None):
    """One (or ``size``) uniform variates on ``[0, 1)``."""
    return stream.uniform(size)


def normal_sample(stream: UniformStream, params: NormalParams, size: int | None = None):
    """Normal variate(s); one uniform each."""
    out = normal_quantile(stream.uniform_open(size), params)
    return float(out) if size is None else out


def invgamma_sample(stream: UniformStream, params: InvGammaParams, size: int | None = None):
    """Inverse-gamma variate(s); one uniform each."""
    out = invgamma_quantile_upper(stream.uniform_open(size), params)
    return float(out) if size is None else out


def normal_logpdf(x, params: NormalParams):
    z = np.asarray(x, dtype=np.float64) - params.mean
    out = -0.5 * (LOG_2PI + math.log(params.variance)) - z * z / (2.0 * params.variance)
    return float(out) if np.ndim(out) == 0 else out


def invgamma_logpdf(v, params: InvGammaParams):
    v = np.asarray(v, dtype=np.float64)
    if np.any(v <= 0):
        raise ValueError("inverse-gamma density is defined for v > 0 only")
    k1, k2 = params.shape, params.rate
    out = k1 * math.log(k2) - special.gammaln(k1) - (k1 + 1.0) * np.log(v) - k2 / v
    return float(out) if np.ndim(out) == 0 else out
