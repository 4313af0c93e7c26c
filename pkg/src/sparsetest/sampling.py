"""Seeded randomness: uniform node choice and the inverse-square range sampler."""
from __future__ import annotations

import math

import numpy as np


class RandomSource:
    """A seeded stream that can be split into independent child streams.

    Children are derived from ``(seed, worker, round)`` through numpy's
    ``SeedSequence`` spawn keys, so the derivation is deterministic and two
    different keys never share draws.
    """

    def __init__(self, seed: int | None = None, _key: tuple = ()):
        if seed is None:
            seed = int(np.random.SeedSequence().entropy % (1 << 64))
        self.seed = int(seed)
        self.key = tuple(_key)
        self._ss = np.random.SeedSequence(self.seed, spawn_key=self.key)
        self.gen = np.random.Generator(np.random.PCG64(self._ss))

    def child(self, *key: int) -> "RandomSource":
        return RandomSource(self.seed, self.key + tuple(int(k) for k in key))

    def random(self, size=None):
        return self.gen.random(size)


def rand_index(rng: RandomSource, n: int, size=None):
    """Uniform node index in ``[0, n)``."""
    if n < 1:
        raise ValueError("rand_index needs n >= 1")
    out = rng.gen.integers(0, n, size=size)
    return int(out) if size is None else out


def range_bound(delta: float, scale: float = 2.0) -> int:
    """Upper bound ``ceil(scale / delta)`` for :func:`rand_range`."""
    # tolerate float noise such as 2/0.1 == 20.000000000000004
    return max(1, math.ceil(scale / delta - 1e-9))


def rand_range(rng: RandomSource, i: int, size=None):
    """Integer ``j`` in ``[1, i]`` with ``P(j >= x) = x**-2`` for ``x <= i``.

    So ``P(j) = j**-2 - (j+1)**-2`` for ``j < i`` and ``P(i) = i**-2``.
    Inverse transform: for ``u`` uniform on (0, 1], ``floor(u**-0.5) >= x``
    exactly when ``u <= x**-2``.
    """
    if i < 1:
        raise ValueError("rand_range needs i >= 1")
    u = 1.0 - rng.gen.random(size)
    j = np.floor(u ** -0.5)
    j = np.minimum(j, i).astype(np.int64)
    return int(j) if size is None else j


def range_pmf(i: int) -> np.ndarray:
    """Exact probabilities of ``rand_range(·, i)`` for ``j = 1..i`` (index j-1)."""
    j = np.arange(1, i + 1, dtype=float)
    p = j ** -2 - (j + 1) ** -2
    p[-1] = float(i) ** -2
    return p
