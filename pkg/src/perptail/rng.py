"""Counter-based uniforms keyed by (seed, worker, draw, term).

Each uniform is a pure function of its coordinates, a SplitMix64 finaliser
applied to a keyed counter. No generator state is carried between draws, so
results do not depend on scheduling, and the compiled kernel reproduces the
same bit stream in C.
"""

from __future__ import annotations

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
ALT = np.uint64(0xD1B54A32D192ED03)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1
TWO_M53 = 2.0 ** -53


def mix64(z):
    """SplitMix64 finaliser, elementwise on uint64 arrays (wrapping arithmetic)."""
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def stream_key(seed: int, worker: int) -> int:
    """Key of worker ``worker``'s substream under a 64-bit ``seed``."""
    s = mix64(np.uint64(int(seed) & _MASK64))
    with np.errstate(over="ignore"):
        k = mix64(s + np.uint64(worker + 1) * GOLDEN)
    return int(k)


def draw_keys(key: int, first: int, count: int) -> np.ndarray:
    idx = np.arange(first + 1, first + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return mix64(np.uint64(key) + idx * ALT)


def term_uniforms(dkeys: np.ndarray, t: int) -> np.ndarray:
    """Uniforms on [0, 1) for term ``t`` (1-based) of each draw."""
    with np.errstate(over="ignore"):
        u = mix64(dkeys + np.uint64(t) * GOLDEN)
    return (u >> np.uint64(11)).astype(np.float64) * TWO_M53


class DrawStream:
    """Caller-owned randomness for single draws: a (seed, worker) substream."""

    def __init__(self, seed: int, worker: int = 0):
        self.seed = int(seed)
        self.worker = int(worker)
        self.key = stream_key(self.seed, self.worker)

    def __repr__(self):
        return f"DrawStream(seed={self.seed}, worker={self.worker})"
