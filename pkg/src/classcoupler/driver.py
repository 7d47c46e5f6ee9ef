"""Run many independent perfect draws, optionally across processes.

Draw ``i`` always reads the deviate store keyed ``(seed, i)``, so results do
not depend on how draws are split between workers.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Sequence

from .core import HorizonExceededError
from .coupler import CouplerModel, couple_single_atom, couple_two_class
from .imh import ImhTarget, imh_backward_sample

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class DrawOutcome:
    index: int
    draw: Any
    bct: int
    mh_steps: int


@dataclass(frozen=True)
class RunResult:
    outcomes: list[DrawOutcome]
    horizon_failures: list[int]

    @property
    def draws(self) -> list:
        return [o.draw for o in self.outcomes]

    @property
    def bcts(self) -> list[int]:
        return [o.bct for o in self.outcomes]


def default_algorithm(model) -> str:
    if isinstance(model, ImhTarget):
        return "imh"
    if getattr(model, "atom_is_singleton", False):
        return "single_atom"
    return "two_class"


def sample_one(model, seed: int, index: int, max_horizon: int, algorithm: str):
    store = model.store(seed, stream=index)
    if algorithm == "imh":
        return imh_backward_sample(model, store, max_horizon)
    if algorithm == "single_atom":
        return couple_single_atom(model, store, max_horizon)
    if algorithm == "two_class":
        return couple_two_class(model, store, max_horizon)
    raise ValueError(f"unknown algorithm {algorithm!r}")


def _run_chunk(model, seed: int, indices: Sequence[int], max_horizon: int, algorithm: str):
    done, failed = [], []
    for i in indices:
        try:
            r = sample_one(model, seed, i, max_horizon, algorithm)
        except HorizonExceededError:
            failed.append(i)
            continue
        done.append(DrawOutcome(i, r.draw, r.bct, r.mh_steps))
    return done, failed


def run_draws(
    model: CouplerModel | ImhTarget,
    n_draws: int,
    seed: int,
    max_horizon: int = 1_000_000,
    workers: int = 1,
    algorithm: str | None = None,
    chunk_size: int = 500,
) -> RunResult:
    """Draws ``0 .. n_draws - 1``; outcomes come back sorted by draw index."""
    if n_draws < 1 or workers < 1:
        raise ValueError("n_draws and workers must be positive")
    algorithm = algorithm or default_algorithm(model)
    indices = list(range(n_draws))
    if workers == 1:
        done, failed = _run_chunk(model, seed, indices, max_horizon, algorithm)
    else:
        chunks = [indices[i:i + chunk_size] for i in range(0, n_draws, chunk_size)]
        done, failed = [], []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_chunk, model, seed, c, max_horizon, algorithm) for c in chunks]
            for f in futures:
                d, fl = f.result()
                done.extend(d)
                failed.extend(fl)
        done.sort(key=lambda o: o.index)
        failed.sort()
    if failed:
        log.warning("%d draws exceeded the horizon of %d steps", len(failed), max_horizon)
    return RunResult(done, failed)
