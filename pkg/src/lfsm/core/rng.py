from dataclasses import dataclass

import numpy as np

from lfsm_common.exceptions import ParameterError


@dataclass(frozen=True, slots=True)
class RngState:
    """
    Seed plus spawn key of a counter-based (Philox) generator.

    The same RngState always yields the same stream, and child(i) derives an
    independent stream for trajectory i, so grid studies stay reproducible
    whatever the order or process they run in.
    """

    seed: int
    key: tuple[int, ...] = ()

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ParameterError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    def child(self, index: int) -> "RngState":
        return RngState(self.seed, self.key + (int(index),))

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(self.seed, spawn_key=self.key)
        return np.random.Generator(np.random.Philox(seq))
