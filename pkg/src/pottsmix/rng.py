"""Reproducible random streams.

Backed by the Philox4x64-10 counter-based generator of the Random123 family,
through numpy's ``Philox`` bit generator.  Only the raw 64-bit output is used;
the conversion to doubles happens here, so trajectories depend only on the
Philox stream itself and are bit-identical across platforms and numpy
versions.
"""

from __future__ import annotations

import numpy as np

DEFAULT_SEED = 20120101
_BLOCK = 4096
_TO_UNIT = 2.0 ** -53


class RngStream:
    """Buffered uniform doubles from one Philox stream.

    ``stream`` selects a disjoint substream: the counter is jumped by
    ``stream * 2**128`` draws, so substreams never overlap.
    """

    def __init__(self, seed: int = DEFAULT_SEED, stream: int = 0):
        if not 0 <= seed < 2**64:
            raise ValueError("seed must fit in 64 bits")
        self.seed = seed
        self.stream = stream
        bitgen = np.random.Philox(key=seed)
        if stream:
            bitgen = bitgen.jumped(stream)
        self._bitgen = bitgen
        self._buf: list[float] = []
        self._pos = 0

    def _refill(self) -> None:
        raw = self._bitgen.random_raw(_BLOCK)
        self._buf = ((raw >> np.uint64(11)).astype(np.float64) * _TO_UNIT).tolist()
        self._pos = 0

    def random(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        if self._pos >= len(self._buf):
            self._refill()
        x = self._buf[self._pos]
        self._pos += 1
        return x

    def randbelow(self, n: int) -> int:
        return int(self.random() * n)

    def spawn(self, i: int) -> "RngStream":
        """Independent child stream ``i`` (i >= 1) of the same seed."""
        return RngStream(self.seed, self.stream + i)
