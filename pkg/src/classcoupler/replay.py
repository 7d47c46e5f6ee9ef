"""Time-indexed, replayable random inputs for backward coupling.

Record ``t`` holds the candidate deviates proposed for time ``-t + 1`` and the
acceptance uniform ``u_{-t}`` that drives the transition ``-t -> -t + 1``.
Each record is derived from its own block of Philox counters keyed by
``(seed, stream)``, so its value depends on ``(seed, stream, t)`` only and
never on the order in which records are requested.

Draw ``i`` of a run seeded with ``seed`` uses ``DeviateStore(seed, stream=i)``:
the Philox key is the pair ``(seed mod 2**64, i)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .streams import philox_words, to_unit_closed_open, to_unit_open


class ContractError(RuntimeError):
    """A model, target or store was used against its declared contract."""


@dataclass(frozen=True)
class DeviateRecipe:
    """How one backward step's candidate deviates are made from uniforms.

    ``transform`` maps an ``(m, uniforms)`` array of open-interval uniforms to
    an ``(m, arity)`` array of realized deviates, row by row.  ``uniforms``
    defaults to ``arity``.
    """

    arity: int
    transform: Callable[[np.ndarray], np.ndarray]
    name: str = "deviates"
    uniforms: int | None = None

    @property
    def n_uniforms(self) -> int:
        return self.arity if self.uniforms is None else self.uniforms

    @property
    def blocks_per_record(self) -> int:
        # candidate words + one acceptance word, 4 words per Philox block
        return (self.n_uniforms + 1 + 3) // 4


@dataclass(frozen=True)
class DeviateRecord:
    t: int
    candidate_deviates: tuple
    accept_u: float


class DeviateStore:
    """Lazily materialized records ``t = 1, 2, ...`` for one draw.

    Records are materialized as a contiguous prefix, in chunks.  Because each
    record is a pure function of ``(seed, stream, t)``, materializing more
    than asked for is unobservable.
    """

    def __init__(self, seed: int, recipe: DeviateRecipe, stream: int = 0, chunk: int = 256):
        self.recipe = recipe
        self._chunk = chunk
        self.reset(seed, stream)

    def reset(self, seed: int, stream: int | None = None) -> "DeviateStore":
        """Drop every record and rekey the store."""
        self.seed = int(seed)
        self.stream = int(stream) if stream is not None else getattr(self, "stream", 0)
        self._n = 0
        # row 0 is a placeholder so that arrays are indexed by t directly
        self._deviates = np.zeros((1, self.recipe.arity))
        self._u = np.zeros(1)
        return self

    def __len__(self) -> int:
        return self._n

    def _generate(self, t_first: int, t_last: int) -> tuple[np.ndarray, np.ndarray]:
        b = self.recipe.blocks_per_record
        m = t_last - t_first + 1
        words = philox_words(self.seed, self.stream, t_first * b, m * b).reshape(m, 4 * b)
        k = self.recipe.n_uniforms
        deviates = np.asarray(self.recipe.transform(to_unit_open(words[:, :k])))
        if deviates.shape != (m, self.recipe.arity):
            raise ContractError(
                f"recipe {self.recipe.name!r} returned shape {deviates.shape}, "
                f"expected {(m, self.recipe.arity)}"
            )
        return deviates, to_unit_closed_open(words[:, k])

    def ensure(self, t: int) -> None:
        """Materialize every record up to and including ``t``."""
        if t <= self._n:
            return
        target = max(t, self._n + self._chunk, 2 * self._n)
        deviates, u = self._generate(self._n + 1, target)
        self._deviates = np.concatenate([self._deviates, deviates])
        self._u = np.concatenate([self._u, u])
        self._n = target

    def get_or_generate(self, t: int, recipe: DeviateRecipe | None = None) -> DeviateRecord:
        if t < 1:
            raise ValueError(f"record index must be >= 1, got {t}")
        if recipe is not None and recipe.arity != self.recipe.arity:
            raise ContractError(
                f"recipe arity {recipe.arity} does not match stored arity {self.recipe.arity}"
            )
        self.ensure(t)
        return DeviateRecord(t, tuple(self._deviates[t].tolist()), float(self._u[t]))

    # Array views used by the vectorized engines.  Row ``t`` is record ``t``.
    @property
    def deviates(self) -> np.ndarray:
        return self._deviates

    @property
    def accept_u(self) -> np.ndarray:
        return self._u
