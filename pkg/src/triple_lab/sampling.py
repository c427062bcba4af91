"""Deterministic random streams, sampling budgets, worker limits."""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import UsageError

THREADS_ENV = "TRIPLE_LAB_THREADS"


@dataclass(frozen=True)
class SamplingBudget:
    """Knobs for every statistical estimator in the package.

    samples       random draws per estimate (per shell for shell sweeps)
    ascent_steps  greedy local-ascent iterations after the sampling pass
    probes        candidate directions tried per ascent step
    seed          root seed; all streams derive from it deterministically
    """

    samples: int = 10_000
    ascent_steps: int = 100
    probes: int = 32
    seed: int = 0

    def __post_init__(self):
        if self.samples < 1 or self.ascent_steps < 0 or self.probes < 1:
            raise UsageError("sampling budget fields must be positive")
        if self.seed < 0:
            raise UsageError("seed must be non-negative")


def stream(seed: int, *path: int) -> np.random.Generator:
    """Independent generator for (seed, *path).

    Distinct paths give statistically independent streams, and the same path
    always reproduces the same draws regardless of evaluation order.
    """
    if seed < 0:
        raise UsageError("seed must be non-negative")
    return np.random.default_rng(np.random.SeedSequence((int(seed),) + tuple(int(p) for p in path)))


def gaussian_complex(rng: np.random.Generator, shape) -> np.ndarray:
    """Standard complex Gaussian draws, variance 1 per complex entry."""
    re = rng.standard_normal(shape)
    im = rng.standard_normal(shape)
    return (re + 1j * im) / np.sqrt(2.0)


def worker_count() -> int:
    """Thread cap for embarrassingly parallel sweeps.

    Reads TRIPLE_LAB_THREADS; defaults to 1 (deterministic single-thread).
    Results never depend on this value, only wall time does.
    """
    raw = os.environ.get(THREADS_ENV, "")
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be an integer, got {raw!r}")
    if n < 1:
        raise UsageError(f"{THREADS_ENV} must be >= 1, got {n}")
    return n
