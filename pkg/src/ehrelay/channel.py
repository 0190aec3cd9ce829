"""Rayleigh block-fading channel draws on reproducible parallel substreams.

Channel gains h and g are unit-variance circularly symmetric complex
Gaussians, so the power gains |h|^2 and |g|^2 are Exp(1).  Variates are
produced by inverse-CDF sampling (-log1p(-u)) on a counter-based Philox
generator, which gives statistically independent, replayable substreams
keyed by (seed, worker_index).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["ChannelBlock", "split_stream", "draw_block", "draw_blocks"]


@dataclass(frozen=True)
class ChannelBlock:
    """Squared channel gains of one fading block."""

    h2: float  # source-to-relay power gain |h|^2
    g2: float  # relay-to-destination power gain |g|^2


def split_stream(seed: int, worker_index: int = 0) -> np.random.Generator:
    """Independent substream, a pure function of (seed, worker_index)."""
    if worker_index < 0:
        raise ValueError("worker_index must be >= 0")
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(worker_index,))
    return np.random.Generator(np.random.Philox(ss))


def draw_block(rng: np.random.Generator) -> ChannelBlock:
    """Draw one block: (h2, g2) independent Exp(1) variates.

    Uses -log1p(-u) with u in [0, 1), so the argument of the log never
    reaches zero.
    """
    u = rng.random(2)
    return ChannelBlock(h2=-np.log1p(-u[0]), g2=-np.log1p(-u[1]))


def draw_blocks(rng: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Draw n blocks at once.

    Consumes the stream in the same order as n successive draw_block
    calls (row-major uniforms, h2 before g2), so looped and vectorized
    simulations see identical channels.
    """
    u = rng.random((n, 2))
    return -np.log1p(-u[:, 0]), -np.log1p(-u[:, 1])
