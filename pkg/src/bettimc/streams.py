"""Counter-style random streams.

Samples are grouped into fixed-size blocks; block ``b`` of the stream
identified by ``key`` draws from ``SeedSequence(entropy=seed,
spawn_key=(*key, b))``. The randomness of sample ``i`` is therefore a pure
function of ``(seed, key, i)``, independent of how blocks are scheduled
across workers.
"""
from __future__ import annotations

from typing import Callable, Iterator

import numpy as np

BLOCK = 8192


def _entropy(seed: int) -> int:
    if seed < 0:
        raise ValueError("seeds must be non-negative")
    return int(seed)


def generator(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(_entropy(seed), spawn_key=tuple(key))))


def sample_stream(seed: int, index: int, *key: int) -> np.random.Generator:
    """Stream for a single sample, used by the scalar reference paths."""
    return generator(seed, *key, 1 << 20, index)


def blocks(total: int, seed: int, *key: int,
           block: int = BLOCK) -> Iterator[tuple[int, int, np.random.Generator]]:
    """Yield ``(offset, size, rng)`` covering ``total`` samples in fixed-size blocks."""
    for b, start in enumerate(range(0, total, block)):
        yield start, min(block, total - start), generator(seed, *key, b)


def full_block(rng: np.random.Generator, size: int, d: int,
               draw_starts: Callable[[np.random.Generator, int], np.ndarray],
               block: int = BLOCK) -> tuple[np.ndarray, np.ndarray]:
    """Start indices and ``(size, d)`` uniforms, always drawn for a whole block then truncated.

    A partially used final block therefore agrees with the prefix of a full one.
    """
    starts = draw_starts(rng, block)[:size]
    uniforms = rng.random((block, d))[:size]
    return starts, uniforms
