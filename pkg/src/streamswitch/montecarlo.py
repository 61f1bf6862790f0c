"""Sampling estimates of acceptance probabilities for instances too large to enumerate.

Samples are processed in fixed-size blocks, each with its own child seed
spawned from the caller's seed, so results do not depend on the number of
workers.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .streaming import StreamAlgorithm, run_batch, sample_batch

DEFAULT_BLOCK = 20_000


@dataclass(frozen=True)
class Estimate:
    value: float
    stderr: float
    samples: int
    seed: int | None
    hits: int | None = None


def _bernoulli(hits: int, samples: int, seed) -> Estimate:
    p = hits / samples
    return Estimate(p, math.sqrt(p * (1 - p) / samples), samples, seed, hits)


def _count_block(alg: StreamAlgorithm, replace: bool, rows: int, seed_seq) -> int:
    rng = np.random.default_rng(seed_seq)
    xs = sample_batch(alg.profile.n, alg.profile.q, rows, rng, replace=replace)
    return int(alg.output_bits(run_batch(alg, xs)).sum())


def estimate_accept(alg: StreamAlgorithm, source: str, samples: int, seed: int | None,
                    block: int = DEFAULT_BLOCK, workers: int = 1) -> Estimate:
    """Fraction of runs whose decision bit is 1.

    ``source`` is ``"P"`` (without replacement) or ``"Q"`` (with replacement).
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    if source not in ("P", "Q"):
        raise ValueError(f"source must be 'P' or 'Q', got {source!r}")
    sizes = [block] * (samples // block) + ([samples % block] if samples % block else [])
    seqs = np.random.SeedSequence(seed).spawn(len(sizes))
    replace = source == "Q"
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            hits = sum(pool.map(lambda a: _count_block(alg, replace, *a), zip(sizes, seqs)))
    else:
        hits = sum(_count_block(alg, replace, rows, ss) for rows, ss in zip(sizes, seqs))
    return _bernoulli(hits, samples, seed)


def estimate_tv_advantage(alg: StreamAlgorithm, samples: int, seed: int | None,
                          block: int = DEFAULT_BLOCK, workers: int = 1) -> Estimate:
    """``|P[A=1] - Q[A=1]|`` from independent runs on both sources."""
    p_seed, q_seed = (int(s.generate_state(1, np.uint64)[0])
                      for s in np.random.SeedSequence(seed).spawn(2))
    p = estimate_accept(alg, "P", samples, p_seed, block, workers)
    q = estimate_accept(alg, "Q", samples, q_seed, block, workers)
    return Estimate(abs(p.value - q.value), math.hypot(p.stderr, q.stderr), samples, seed)
