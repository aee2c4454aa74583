"""Rayleigh channel draws and complex AWGN.

Channel entries are i.i.d. circularly-symmetric complex Gaussian with unit
variance; noise samples have total variance n0 (n0/2 per real and imaginary
dimension). Reproducibility contract: a simulation is a deterministic
function of (config, seed); the per-worker generators returned by
substream() never overlap.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ChannelRealization:
    """One draw of all links for an N-antenna source (batch dims allowed)."""

    h_r: np.ndarray  # (..., N) source -> relay
    h_d: np.ndarray  # (..., N) source -> destination
    g_d: np.ndarray  # (...) relay -> destination
    f_r: np.ndarray  # (...) destination -> relay (used by destination jamming)

    @property
    def n(self) -> int:
        return self.h_r.shape[-1]


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed))


def substream(seed: int, *key: int) -> np.random.Generator:
    """Independent deterministic stream for (seed, key...), e.g. per worker."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, key)]))


def crandn(rng: np.random.Generator, shape=()) -> np.ndarray:
    """CN(0, 1) samples: unit total variance, half per dimension."""
    return np.sqrt(0.5) * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def draw_channel(n: int, rng: np.random.Generator, size=None) -> ChannelRealization:
    """Fresh i.i.d. CN(0,1) realization of h_r, h_d, g_d, f_r (in that order)."""
    if n < 1:
        raise ValueError("need at least one source antenna")
    vec_shape = (n,) if size is None else (size, n)
    sc_shape = () if size is None else (size,)
    return ChannelRealization(
        h_r=crandn(rng, vec_shape),
        h_d=crandn(rng, vec_shape),
        g_d=crandn(rng, sc_shape),
        f_r=crandn(rng, sc_shape),
    )


def awgn(shape, n0: float, rng: np.random.Generator) -> np.ndarray:
    """Complex white Gaussian noise with E|n|^2 = n0."""
    if n0 <= 0:
        raise ValueError("noise variance must be positive")
    return np.sqrt(n0) * crandn(rng, shape)
