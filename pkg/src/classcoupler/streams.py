"""Counter-based uniform streams.

Every uniform is a pure function of ``(seed, stream, position)``: position
``i`` reads 64-bit word ``i % 4`` of the Philox-4x64 block at counter
``i // 4`` keyed by ``(seed, stream)``.  Seeking, replaying and reading
out of order therefore always reproduce the same values.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_TWO_M53 = 2.0 ** -53


def philox_words(seed: int, stream: int, first_block: int, n_blocks: int) -> np.ndarray:
    """Raw 64-bit words of Philox blocks ``first_block .. first_block + n_blocks - 1``."""
    # an explicit uint64 key: a plain list goes through float for values >= 2**63
    key = np.array([seed & _MASK64, stream & _MASK64], dtype=np.uint64)
    bitgen = np.random.Philox(key=key, counter=first_block)
    return bitgen.random_raw(4 * n_blocks)


def to_unit_closed_open(words: np.ndarray) -> np.ndarray:
    """Top 53 bits mapped onto ``[0, 1)``."""
    return (words >> np.uint64(11)).astype(np.float64) * _TWO_M53


def to_unit_open(words: np.ndarray) -> np.ndarray:
    """Top 53 bits mapped onto the open interval ``(0, 1)`` (midpoint rule)."""
    return ((words >> np.uint64(11)).astype(np.float64) + 0.5) * _TWO_M53


class UniformStream:
    """Position-keyed source of uniform variates.

    Parameters
    ----------
    seed : int
        Master seed, reduced modulo 2**64.
    stream : int, optional
        Substream identifier, also part of the Philox key.
    position : int, optional
        Index of the next word to read.
    """

    def __init__(self, seed: int, stream: int = 0, position: int = 0):
        self.seed = int(seed) & _MASK64
        self.stream = int(stream) & _MASK64
        self.position = int(position)

    def __repr__(self) -> str:
        return f"UniformStream(seed={self.seed}, stream={self.stream}, position={self.position})"

    def seek(self, position: int) -> None:
        self.position = int(position)

    def _words(self, n: int) -> np.ndarray:
        start = self.position
        first = start // 4
        last = (start + n - 1) // 4
        raw = philox_words(self.seed, self.stream, first, last - first + 1)
        offset = start - 4 * first
        self.position += n
        return raw[offset:offset + n]

    def uniform(self, size: int | None = None):
        """Uniform(s) on ``[0, 1)``; one word per variate."""
        if size is None:
            return float(to_unit_closed_open(self._words(1))[0])
        return to_unit_closed_open(self._words(int(size)))

    def uniform_open(self, size: int | None = None):
        """Uniform(s) on ``(0, 1)``, for inverse-CDF transforms that blow up at 0."""
        if size is None:
            return float(to_unit_open(self._words(1))[0])
        return to_unit_open(self._words(int(size)))


class ArrayStream:
    """Stream over a fixed array of uniforms; used to replay stored record inputs."""

    def __init__(self, values):
        self._values = np.asarray(values, dtype=np.float64)
        self.position = 0

    def _take(self, n: int) -> np.ndarray:
        if self.position + n > self._values.size:
            raise IndexError("array stream exhausted")
        out = self._values[self.position:self.position + n]
        self.position += n
        return out

    def uniform(self, size: int | None = None):
        if size is None:
            return float(self._take(1)[0])
        return self._take(int(size)).copy()

    uniform_open = uniform
