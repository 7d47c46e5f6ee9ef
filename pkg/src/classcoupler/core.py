"""Shared result and state types."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any

import numpy as np


class ClassId(enum.IntEnum):
    """State-space class.  ``I`` is the null (atom) class, ``II`` its complement."""

    I = 0
    II = 1

    @property
    def other(self) -> "ClassId":
        return ClassId(1 - self.value)


@dataclass(frozen=True)
class MixedState:
    """Point of a mixed discrete/continuous state space.

    ``atom`` is the exact class tag: True iff the state lies on the null set
    (e.g. ``mu == theta0`` or ``mu1 == mu2``).  ``values`` is the full
    coordinate vector in the model's layout.  Equality is exact and
    tag-aware.
    """

    atom: bool
    values: tuple[float, ...]

    def __getitem__(self, i: int) -> float:
        return self.values[i]

    @property
    def class_id(self) -> ClassId:
        return ClassId.I if self.atom else ClassId.II


@dataclass(frozen=True)
class CouplingResult:
    draw: Any
    bct: int
    mh_steps: int = 0


class HorizonExceededError(RuntimeError):
    """Raised when no coupling is certified within ``max_horizon`` backward steps."""

    def __init__(self, max_horizon: int, mh_steps: int = 0, stage_one_events: int = 0):
        super().__init__(max_horizon, mh_steps, stage_one_events)
        self.max_horizon = max_horizon
        self.mh_steps = mh_steps
        self.stage_one_events = stage_one_events

    def __str__(self) -> str:
        return (
            f"no coupling within {self.max_horizon} backward steps "
            f"({self.stage_one_events} stage-one events, {self.mh_steps} kernel evaluations)"
        )


def accept(log_r: float, u: float) -> bool:
    """Metropolis-Hastings test ``u <= min(1, exp(log_r))``."""
    return bool(u <= np.exp(min(log_r, 0.0)))


def accept_many(log_r: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Vectorized :func:`accept`; identical arithmetic elementwise."""
    return u <= np.exp(np.minimum(log_r, 0.0))
