"""Counter-based random streams for the synchronous update.

The uniform for (step t, vertex v) is a pure function of (seed, t, v): a
Philox generator keyed by the seed with its counter positioned at t yields
the per-vertex draws in ascending vertex order. Steps can therefore be
replayed or split across workers without sharing state.
"""

from dataclasses import dataclass

import numpy as np

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class CounterStream:
    seed: int

    def generator(self, step: int) -> np.random.Generator:
        key = np.array([self.seed & _MASK64, 0], dtype=np.uint64)
        counter = np.array([0, 0, 0, step & _MASK64], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key, counter=counter))

    def uniforms(self, step: int, n: int) -> np.ndarray:
        """n uniforms in [0, 1) for ``step``; entry v belongs to vertex v."""
        return self.generator(step).random(n)
