"""Summaries over independent perfect draws."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .core import MixedState

Z_95 = 1.96


@dataclass(frozen=True)
class Histogram:
    edges: tuple[float, ...]
    counts: tuple[int, ...]

    @property
    def total(self) -> int:
        return int(sum(self.counts))


@dataclass
class RunSummary:
    n_draws: int
    atom_prob: float
    ci_low: float
    ci_high: float
    bct_mean: float
    bct_min: int
    bct_max: int
    histograms: dict[str, Histogram] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "n_draws": self.n_draws,
            "atom_prob": self.atom_prob,
            "ci": [self.ci_low, self.ci_high],
            "bct": {"mean": self.bct_mean, "min": self.bct_min, "max": self.bct_max},
        }


def atom_probability(draws: Sequence[MixedState], z: float = Z_95) -> tuple[float, float, float]:
    """Fraction of draws on the atom with its Wald interval ``p +- z sqrt(p(1-p)/n)``."""
    n = len(draws)
    if n == 0:
        raise ValueError("need at least one draw")
    p = sum(1 for d in draws if d.atom) / n
    half = z * math.sqrt(p * (1.0 - p) / n)
    return p, p - half, p + half


def bct_summary(times: Iterable[int]) -> tuple[float, int, int]:
    times = [int(t) for t in times]
    if not times:
        raise ValueError("need at least one coupling time")
    # integer sum keeps the mean exact up to the final division
    return sum(times) / len(times), min(times), max(times)


def histogram(values, bin_count: int, value_range: tuple[float, float] | None = None) -> Histogram:
    """Equal-width bins over ``[min, max]`` (or ``value_range``); the last bin is closed."""
    if bin_count < 1:
        raise ValueError("bin_count must be >= 1")
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("cannot bin an empty sequence")
    counts, edges = np.histogram(values, bins=bin_count, range=value_range)
    return Histogram(tuple(edges.tolist()), tuple(int(c) for c in counts))


def summarize(draws: Sequence[MixedState], bcts: Sequence[int], bins: int = 50) -> RunSummary:
    """Atom probability, coupling-time statistics and histograms of ``mu``-type coordinates.

    The first coordinate of each draw and the coupling times are binned.
    """
    p, lo, hi = atom_probability(draws)
    mean, tmin, tmax = bct_summary(bcts)
    hists = {
        "coord0": histogram([d.values[0] for d in draws], bins),
        "bct": histogram(bcts, bins),
    }
    return RunSummary(len(draws), p, lo, hi, mean, tmin, tmax, hists)
