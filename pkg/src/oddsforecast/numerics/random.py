"""Reproducible, splittable random streams."""
from dataclasses import dataclass, field

import numpy as np

from ..errors import InputError

_U64 = 2**64


@dataclass(frozen=True)
class RngStream:
    """Immutable descriptor of a random stream.

    The same ``(seed, stream_id)`` always yields the same draws. Generators are
    counter-based (Philox), and :meth:`substream` derives independent children,
    so parallel replicates stay reproducible regardless of scheduling.
    """

    seed: int
    stream_id: int = 0
    path: tuple = field(default=(), repr=False)

    def __post_init__(self):
        if not (0 <= int(self.seed) < _U64):
            raise InputError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if int(self.stream_id) < 0:
            raise InputError(f"stream_id must be non-negative, got {self.stream_id}")

    def substream(self, index):
        return RngStream(self.seed, self.stream_id, self.path + (int(index),))

    def generator(self):
        ss = np.random.SeedSequence(int(self.seed), spawn_key=(int(self.stream_id),) + self.path)
        return np.random.Generator(np.random.Philox(ss))
