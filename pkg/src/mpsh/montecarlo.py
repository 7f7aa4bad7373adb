"""Seeded uniform sampling in the unit ball of C^n.

Samples come in fixed-size chunks; chunk ``i`` draws from its own Philox
(counter-based) stream spawned from the root seed, so the sample set is a
function of ``(seed, count, chunk)`` only and not of how chunks are
scheduled.
"""

from __future__ import annotations

import math
from typing import Iterator

import numpy as np

DEFAULT_CHUNK = 1 << 19


def chunk_generators(seed: int, count: int, chunk: int = DEFAULT_CHUNK) -> Iterator[tuple[int, np.random.Generator]]:
    n_chunks = max(1, math.ceil(count / chunk))
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    for i, child in enumerate(children):
        size = min(chunk, count - i * chunk)
        yield size, np.random.Generator(np.random.Philox(child))


def ball_chunks(n: int, count: int, seed: int, chunk: int = DEFAULT_CHUNK) -> Iterator[np.ndarray]:
    """Uniform points of the unit ball in C^n = R^(2n), as (size, 2n) real arrays.

    Gaussian direction times radius U^(1/(2n)).
    """
    for size, rng in chunk_generators(seed, count, chunk):
        g = rng.standard_normal((size, 2 * n))
        g /= np.linalg.norm(g, axis=1)[:, None]
        r = rng.random(size) ** (1.0 / (2 * n))
        yield g * r[:, None]


def ball_volume(n: int) -> float:
    """Volume of the unit ball in C^n."""
    return math.pi**n / math.factorial(n)
