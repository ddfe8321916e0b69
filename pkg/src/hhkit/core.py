"""Packet/flow model, seeded hashing, and the deterministic random-bit source.

Every downstream component (table indexing, admission coins, trace synthesis)
draws its randomness from the splitmix64 stream defined here, so an entire
experiment is reproducible from a single 64-bit seed.  The compiled kernels
implement the exact same arithmetic; both backends produce identical bits.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MASK64 = (1 << 64) - 1

# Reserved key marking an unoccupied table slot.  The trace sources only ever
# produce dense non-negative ids, so no real flow can collide with it.
EMPTY_KEY = MASK64

GOLDEN = 0x9E3779B97F4A7C15
_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB

FlowId = int


@dataclass(frozen=True)
class Packet:
    """One stream element: an opaque 64-bit flow id plus its 0-based position."""

    flow: int
    seq: int = 0


def mix64(x: int) -> int:
    """Finalizing 64-bit mixer (splitmix64); bijective with full avalanche."""
    x &= MASK64
    x ^= x >> 30
    x = (x * _MIX_A) & MASK64
    x ^= x >> 27
    x = (x * _MIX_B) & MASK64
    return x ^ (x >> 31)


def splitmix_at(seed: int, i: int) -> int:
    """The i-th output (0-based) of the splitmix64 stream seeded with `seed`."""
    return mix64((seed + (i + 1) * GOLDEN) & MASK64)


def coin_threshold(m: int) -> int:
    """Threshold t such that a uniform 64-bit draw u wins (u < t) with
    probability floor(2^64 / m) / 2^64, which never exceeds 1/m.

    Requires m >= 2; callers short-circuit m == 1 to certain success.
    """
    if m < 2:
        raise ValueError("coin_threshold requires m >= 2")
    t = MASK64 // m
    if MASK64 % m == m - 1:  # m divides 2^64 exactly
        t += 1
    return t


class RandomSource:
    """Deterministic 64-bit generator modelling a hardware random-bit tap.

    `bits(n)` returns n uniform bits (the top bits of one fresh 64-bit
    output), `block(n)` returns n outputs as a vector while advancing the
    same stream.
    """

    def __init__(self, seed: int):
        self.seed = seed & MASK64
        self._state = seed & MASK64

    def next64(self) -> int:
        self._state = (self._state + GOLDEN) & MASK64
        return mix64(self._state)

    def bits(self, n: int) -> int:
        if not 1 <= n <= 64:
            raise ValueError(f"bit count must be in [1, 64], got {n}")
        return self.next64() >> (64 - n)

    def block(self, n: int) -> np.ndarray:
        """n consecutive 64-bit outputs as a uint64 array (vectorized)."""
        ks = np.arange(1, n + 1, dtype=np.uint64)
        z = np.uint64(self._state) + ks * np.uint64(GOLDEN)
        z ^= z >> np.uint64(30)
        z *= np.uint64(_MIX_A)
        z ^= z >> np.uint64(27)
        z *= np.uint64(_MIX_B)
        z ^= z >> np.uint64(31)
        self._state = (self._state + n * GOLDEN) & MASK64
        return z

    def uniform_block(self, n: int) -> np.ndarray:
        """n doubles uniform on the open interval (0, 1)."""
        return ((self.block(n) >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53


class HashFamily:
    """d independently seeded hash functions onto [0, entries_per_way)."""

    def __init__(self, d: int, entries_per_way: int, seeds):
        if d < 1:
            raise ValueError("way count must be >= 1")
        if entries_per_way < 1:
            raise ValueError("entries_per_way must be >= 1")
        seeds = tuple(int(s) & MASK64 for s in seeds)
        if len(seeds) != d:
            raise ValueError("need exactly one seed per way")
        self.d = d
        self.entries_per_way = entries_per_way
        self.seeds = seeds

    @classmethod
    def from_seed(cls, seed: int, d: int, entries_per_way: int) -> "HashFamily":
        return cls(d, entries_per_way, (splitmix_at(seed, i) for i in range(d)))

    def way_index(self, way: int, key: int) -> int:
        if not 0 <= way < self.d:
            raise ValueError(f"way {way} out of range [0, {self.d})")
        return mix64((key ^ self.seeds[way]) & MASK64) % self.entries_per_way


def hash_way(h: HashFamily, way: int, key: int) -> int:
    """Slot index of `key` in register array `way`."""
    return h.way_index(way, key)


def random_bits(r: RandomSource, n: int) -> int:
    """n uniform random bits as an integer in [0, 2^n)."""
    return r.bits(n)
