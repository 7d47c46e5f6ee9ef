"""Perfect independent Metropolis-Hastings sampling.

States are ordered by ``h(x) / q(x)``.  The lowest state ``l`` maximizes that
ratio and is the hardest state to leave, so once the path started at ``l``
accepts a candidate every other path accepts it too.  Only that lower path
is ever simulated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import partial
from typing import Any, Callable, Sequence

import numpy as np

from .core import CouplingResult, HorizonExceededError, accept
from .replay import ContractError, DeviateRecipe, DeviateStore
from .streams import ArrayStream, UniformStream

DEFAULT_MAX_HORIZON = 1_000_000
_PROBE_SEED = 0x5EED_1A5E


@dataclass
class ImhTarget:
    """Unnormalized target ``h`` with an independent candidate density ``q``.

    Parameters
    ----------
    log_h, log_q : callable
        State -> log density (``h`` up to a constant).
    sample_q : callable
        Stream -> state, consuming exactly ``q_uniforms`` uniforms.
    lowest_state :
        State maximizing ``h / q``.  Checked against ``probes`` candidate draws.
    """

    log_h: Callable[[Any], float]
    log_q: Callable[[Any], float]
    sample_q: Callable[[Any], Any]
    lowest_state: Any
    q_uniforms: int = 1
    probes: int = 1000
    _lowest_weight: float = field(init=False, repr=False)

    def __post_init__(self):
        self._lowest_weight = self.log_weight(self.lowest_state)
        if not math.isfinite(self._lowest_weight):
            raise ContractError("log h - log q must be finite at the lowest state")
        stream = UniformStream(_PROBE_SEED)
        for _ in range(self.probes):
            x = self.sample_q(stream)
            w = self.log_weight(x)
            if w > self._lowest_weight + 1e-12 * max(1.0, abs(self._lowest_weight)):
                raise ContractError(
                    f"state {x!r} has larger h/q than the declared lowest state "
                    f"{self.lowest_state!r}"
                )

    def log_weight(self, x) -> float:
        return float(self.log_h(x) - self.log_q(x))

    def recipe(self) -> DeviateRecipe:
        def transform(uniforms: np.ndarray) -> np.ndarray:
            out = np.empty((uniforms.shape[0], 1), dtype=object)
            for i, row in enumerate(uniforms):
                out[i, 0] = self.sample_q(ArrayStream(row))
            return out

        return DeviateRecipe(arity=1, transform=transform, name="imh-candidate",
                             uniforms=self.q_uniforms)

    def store(self, seed: int, stream: int = 0) -> DeviateStore:
        return DeviateStore(seed, self.recipe(), stream=stream, chunk=16)


def _lookup(table, i):
    return table[i]


def _constant(value, _state):
    return value


def _uniform_index(k, stream):
    return min(int(stream.uniform() * k), k - 1)


def discrete_target(weights: Sequence[float]) -> ImhTarget:
    """Finite target ``h(i) = weights[i]`` with a uniform candidate over the indices."""
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size == 0 or np.any(w <= 0):
        raise ValueError("weights must be a nonempty list of positive numbers")
    k = w.size
    return ImhTarget(
        log_h=partial(_lookup, tuple(np.log(w).tolist())),
        log_q=partial(_constant, -math.log(k)),
        sample_q=partial(_uniform_index, k),
        lowest_state=int(np.argmax(w)),
        probes=min(1000, 50 * k),
    )


def imh_accept_ratio(target: ImhTarget, x, y) -> float:
    """``min{1, [h(y)/q(y)] / [h(x)/q(x)]}``; 1 when ``h(x) q(y) = 0``."""
    lhx, lqy = target.log_h(x), target.log_q(y)
    if lhx == -math.inf or lqy == -math.inf:
        return 1.0
    log_r = (target.log_h(y) - lqy) - (lhx - target.log_q(x))
    if math.isnan(log_r) or lhx == math.inf:
        raise ValueError("acceptance ratio undefined for these states")
    return float(np.exp(min(log_r, 0.0)))


def imh_forward(target: ImhTarget, store: DeviateStore, start, horizon: int):
    """Run the IMH chain from ``start`` at time ``-horizon`` up to time 0."""
    x, wx = start, target.log_weight(start)
    for t in range(horizon, 0, -1):
        rec = store.get_or_generate(t)
        y = rec.candidate_deviates[0]
        wy = target.log_weight(y)
        if accept(wy - wx, rec.accept_u):
            x, wx = y, wy
    return x


def imh_backward_sample(
    target: ImhTarget,
    store: DeviateStore,
    max_horizon: int = DEFAULT_MAX_HORIZON,
    schedule: str = "increment",
) -> CouplingResult:
    """One exact draw from ``h`` by backward coupling of the lower path.

    ``schedule="increment"`` extends the horizon one step at a time and
    reports the smallest coupling time.  ``schedule="double"`` tries
    horizons 1, 2, 4, ...; it returns the same draw with the horizon rounded
    up to a power of two.
    """
    if schedule == "double":
        return _backward_doubling(target, store, max_horizon)
    if schedule != "increment":
        raise ValueError(f"unknown schedule {schedule!r}")

    w_low = target._lowest_weight
    steps = 0
    for t in range(1, max_horizon + 1):
        rec = store.get_or_generate(t)
        steps += 1
        y = rec.candidate_deviates[0]
        wy = target.log_weight(y)
        if not accept(wy - w_low, rec.accept_u):
            continue
        x, wx = y, wy
        for j in range(t - 1, 0, -1):
            rec = store.get_or_generate(j)
            c = rec.candidate_deviates[0]
            wc = target.log_weight(c)
            steps += 1
            if accept(wc - wx, rec.accept_u):
                x, wx = c, wc
        return CouplingResult(x, t, steps)
    raise HorizonExceededError(max_horizon, steps)


def _backward_doubling(target: ImhTarget, store: DeviateStore, max_horizon: int) -> CouplingResult:
    w_low = target._lowest_weight
    steps = 0
    horizon = 1
    while horizon <= max_horizon:
        x, wx, moved = target.lowest_state, w_low, False
        for t in range(horizon, 0, -1):
            rec = store.get_or_generate(t)
            y = rec.candidate_deviates[0]
            wy = target.log_weight(y)
            steps += 1
            if accept(wy - wx, rec.accept_u):
                x, wx, moved = y, wy, True
        if moved:
            return CouplingResult(x, horizon, steps)
        horizon *= 2
    raise HorizonExceededError(max_horizon, steps)
