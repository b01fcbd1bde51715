"""Seeded, block-structured random streams.

Every randomized routine draws from named streams derived from a single
integer seed.  A stream is cut into fixed-size blocks and each block owns an
independent counter-based generator keyed by ``(seed, stream, block)``, so
any block can be regenerated on its own.  Processing blocks in parallel, or in
any order, reproduces the sequential result bit for bit.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterator, TypeVar

import numpy as np

BLOCK = 1 << 16

# stream identifiers
WEIGHTS = 1
MEMBERSHIP = 2
TRIPLE_STATES = 4
ORACLE = 5

T = TypeVar("T")


def block_generator(seed: int, stream: int, block: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(stream), int(block)))
    return np.random.Generator(np.random.Philox(ss))


def blocks(n: int, block: int = BLOCK) -> Iterator[tuple[int, int, int]]:
    """Yield ``(index, start, stop)`` for the blocks covering ``range(n)``."""
    for b, start in enumerate(range(0, n, block)):
        yield b, start, min(start + block, n)


def map_blocks(
    fn: Callable[[np.random.Generator, int, int], T],
    seed: int,
    stream: int,
    n: int,
    block: int = BLOCK,
    workers: int | None = None,
) -> list[T]:
    """Apply ``fn(rng, start, stop)`` to every block, results in block order."""
    jobs = list(blocks(n, block))

    def run(job):
        b, start, stop = job
        return fn(block_generator(seed, stream, b), start, stop)

    if workers is None or workers <= 1 or len(jobs) <= 1:
        return [run(j) for j in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, jobs))


def uniforms(seed: int, stream: int, n: int, block: int = BLOCK,
             workers: int | None = None) -> np.ndarray:
    """``n`` uniforms on [0, 1) from the given stream."""
    if n == 0:
        return np.empty(0)
    parts = map_blocks(lambda rng, a, b: rng.random(b - a), seed, stream, n,
                       block, workers)
    return np.concatenate(parts)
