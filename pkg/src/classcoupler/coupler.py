"""Two-class backward coupling ("class coupler").

The state space is split into class I (the null set, e.g. ``mu == theta0``)
and class II (its complement).  Every state of a class is offered the same
candidate at a given time step, and that candidate always lies in the other
class.  With such candidates the Metropolis-Hastings ratio factors as

    r(x, y) = exp(w(y) - w(x)),   w(z) = log target(z) - log q_into(z),

where ``q_into`` is the density proposing into ``z``'s class.  A whole class
accepts its candidate at once when ``u`` falls below the ratio evaluated at
the class maximizer of ``w`` (a likelihood maximizer for the shipped
models).

Record ``t`` of a :class:`~classcoupler.replay.DeviateStore` carries the two
candidates born at time ``-t + 1`` and the uniform for step ``-t -> -t + 1``.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .core import (
    ClassId,
    CouplingResult,
    HorizonExceededError,
    MixedState,
    accept,
    accept_many,
)
from .replay import ContractError, DeviateRecipe, DeviateRecord, DeviateStore

DEFAULT_MAX_HORIZON = 1_000_000
# Below three steps the two stage-one survivors cannot meet before time 0.
TWO_CLASS_MIN_HORIZON = 3


class CouplerModel(ABC):
    """What the coupler needs to know about a target.

    Subclasses provide the deviate recipe, the candidate built for each
    class from one record, the log weight ``w`` and its supremum over each
    class.  ``atom_is_singleton`` marks models whose class I is one point.
    """

    atom_is_singleton: bool = False

    @abstractmethod
    def recipe(self) -> DeviateRecipe: ...

    @abstractmethod
    def candidate_for_class(self, cls: ClassId, record: DeviateRecord) -> MixedState:
        """Candidate offered at this step to every state of class ``cls``."""

    @abstractmethod
    def log_weight(self, state: MixedState) -> float: ...

    @abstractmethod
    def candidate_log_weights(self, deviates: np.ndarray) -> np.ndarray:
        """``(2, m)`` array; row ``k`` is ``w`` of the candidate offered to class ``k``.

        Must agree bit for bit with :meth:`log_weight` on the same states.
        """

    @abstractmethod
    def max_log_weight(self, cls: ClassId) -> float:
        """Supremum of ``w`` over class ``cls``."""

    @property
    def deviates_per_step(self) -> int:
        return self.recipe().arity

    def class_of(self, state: MixedState) -> ClassId:
        return state.class_id

    def store(self, seed: int, stream: int = 0) -> DeviateStore:
        return DeviateStore(seed, self.recipe(), stream=stream)

    def log_accept_ratio(self, x: MixedState, y: MixedState) -> float:
        """Unclamped ``log r(x, y)`` for a cross-class move."""
        if self.class_of(x) == self.class_of(y):
            raise ContractError("acceptance ratio requested for a same-class pair")
        return self.log_weight(y) - self.log_weight(x)

    def log_min_ratio_into(self, candidate: MixedState, source: ClassId) -> float:
        if self.class_of(candidate) == source:
            raise ContractError("candidate must lie outside the source class")
        return self.log_weight(candidate) - self.max_log_weight(source)

    def min_ratio_into(self, candidate: MixedState, source: ClassId) -> float:
        """Smallest ratio with which any class-``source`` state accepts ``candidate``."""
        return float(np.exp(self.log_min_ratio_into(candidate, source)))


@dataclass(frozen=True)
class TwoStageState:
    """Surviving paths after a stage-one event, born at time ``-birth_t + 1``."""

    survivors: tuple[MixedState, ...]
    birth_t: int

    def __post_init__(self):
        if not 1 <= len(self.survivors) <= 2:
            raise ValueError("a two-stage state holds one or two survivors")


def forward_run(model: CouplerModel, store: DeviateStore, survivors: TwoStageState) -> tuple:
    """Run each survivor forward to time 0 with the stored deviates.

    Plain step-by-step simulation through the model's scalar interface.
    Returns the distinct time-0 states, in survivor order; a single state
    means the paths merged.
    """
    states = list(survivors.survivors)
    for j in range(survivors.birth_t - 1, 0, -1):
        rec = store.get_or_generate(j)
        for i, x in enumerate(states):
            cand = model.candidate_for_class(model.class_of(x), rec)
            if accept(model.log_accept_ratio(x, cand), rec.accept_u):
                states[i] = cand
    return tuple(dict.fromkeys(states))


def run_from(model: CouplerModel, store: DeviateStore, start: MixedState, horizon: int) -> MixedState:
    """Time-0 state of the path started at ``start`` at time ``-horizon``."""
    (out,) = forward_run(model, store, TwoStageState((start,), horizon + 1))
    return out


class _Paths:
    """Vectorized view of one draw's records plus memoized forward paths.

    A node ``(k, s)`` is the candidate offered to class ``k`` by record ``s``;
    it lies in class ``1 - k`` and is born at time ``-s + 1``.  Every path
    that has accepted at least once sits on such a node, so following the
    first acceptance after each node gives the time-0 state.
    """

    def __init__(self, model: CouplerModel, store: DeviateStore):
        self.model = model
        self.store = store
        self.n = 0
        self.w = np.zeros((2, 1))
        self.memo: dict[tuple[int, int], tuple[int, int]] = {}
        self.steps = 0

    def extend(self, t: int) -> None:
        if t <= self.n:
            return
        self.store.ensure(t)
        n_new = len(self.store)
        fresh = self.model.candidate_log_weights(self.store.deviates[self.n + 1:n_new + 1])
        self.w = np.concatenate([self.w, fresh], axis=1)
        self.n = n_new

    @property
    def u(self) -> np.ndarray:
        return self.store.accept_u

    def state(self, node: tuple[int, int]) -> MixedState:
        k, s = node
        return self.model.candidate_for_class(ClassId(k), self.store.get_or_generate(s))

    def _next(self, node: tuple[int, int]):
        k, s = node
        cls = 1 - k
        wx = self.w[k, s]
        hi, width = s, 16
        while hi > 1:
            lo = max(1, hi - width)
            hits = np.flatnonzero(accept_many(self.w[cls, lo:hi] - wx, self.u[lo:hi]))
            if hits.size:
                j = lo + int(hits[-1])
                self.steps += s - j
                return (cls, j)
            hi, width = lo, width * 4
        self.steps += s - 1
        return None

    def final(self, node: tuple[int, int]) -> tuple[int, int]:
        """Node occupied at time 0 by the path sitting on ``node``."""
        chain = []
        while node not in self.memo:
            chain.append(node)
            nxt = self._next(node)
            if nxt is None:
                result = node
                break
            node = nxt
        else:
            result = self.memo[node]
        for c in chain:
            self.memo[c] = result
        return result

    def events(self, first: int, max_horizon: int, log_ratio) -> Iterator[int]:
        """Times ``t >= first`` (ascending) where ``u_t`` passes ``log_ratio(w, lo, hi)``."""
        t = first
        while t <= max_horizon:
            self.extend(t)
            hi = min(self.n, max_horizon) + 1
            hits = np.flatnonzero(accept_many(log_ratio(self.w, t, hi), self.u[t:hi]))
            for h in hits:
                yield t + int(h)
            t = hi


def couple_two_class(
    model: CouplerModel,
    store: DeviateStore,
    max_horizon: int = DEFAULT_MAX_HORIZON,
    min_horizon: int = TWO_CLASS_MIN_HORIZON,
) -> CouplingResult:
    """Exact draw by the conservative two-class coupler.

    At each backward time ``-t`` stage one requires every class-I state and
    every class-II state to accept their candidates on the same uniform.
    The two survivors are then run forward; the draw is returned only if
    they coincide at time 0, otherwise the horizon grows by one.
    """
    paths = _Paths(model, store)
    max_i = model.max_log_weight(ClassId.I)
    max_ii = model.max_log_weight(ClassId.II)

    def stage_one(w, lo, hi):
        return np.minimum(w[0, lo:hi] - max_i, w[1, lo:hi] - max_ii)

    n_events = 0
    for t in paths.events(min_horizon, max_horizon, stage_one):
        n_events += 1
        a = paths.final((0, t))
        b = paths.final((1, t))
        if a == b or paths.state(a) == paths.state(b):
            return CouplingResult(paths.state(a), t, paths.steps + t)
    raise HorizonExceededError(max_horizon, paths.steps + max_horizon, n_events)


def couple_single_atom(
    model: CouplerModel,
    store: DeviateStore,
    max_horizon: int = DEFAULT_MAX_HORIZON,
) -> CouplingResult:
    """Exact draw when class I is the single atom ``theta0``.

    With ``R1`` the smallest ratio for a class-II state to accept the atom
    and ``R2`` the ratio for the atom to accept its candidate ``Q``:

    * ``R2 < u <= R1``: every path is at the atom at time ``-t + 1``
      (one-step coupling);
    * ``u <= min(R1, R2)``: survivors ``{Q, atom}`` must merge by time 0.
    """
    if not model.atom_is_singleton:
        raise ContractError("couple_single_atom needs a model whose class I is a single point")
    paths = _Paths(model, store)
    max_i = model.max_log_weight(ClassId.I)
    max_ii = model.max_log_weight(ClassId.II)

    def all_class_ii_accept(w, lo, hi):
        return w[1, lo:hi] - max_ii

    n_events = 0
    for t in paths.events(1, max_horizon, all_class_ii_accept):
        n_events += 1
        atom_moves = accept(paths.w[0, t] - max_i, paths.u[t])
        if not atom_moves:
            out = paths.final((1, t))
            return CouplingResult(paths.state(out), t, paths.steps + t)
        if t == 1:
            continue
        a = paths.final((0, t))
        b = paths.final((1, t))
        if a == b or paths.state(a) == paths.state(b):
            return CouplingResult(paths.state(a), t, paths.steps + t)
    raise HorizonExceededError(max_horizon, paths.steps + max_horizon, n_events)
