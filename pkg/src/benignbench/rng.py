"""Deterministic random numbers for reproducible noise injection.

The noise operator must produce bit-identical output for a given
(master seed, frame id, stage index) on every platform and thread
count, so the generator is implemented here rather than delegated to
library RNGs whose stream definitions may drift between versions:

* xoshiro256++ supplies the uniform stream (public domain algorithm by
  Blackman and Vigna),
* splitmix64 expands a 64-bit seed into the 256-bit xoshiro state, as
  the xoshiro authors recommend,
* Box-Muller maps uniform pairs to Gaussian samples,
* ``mix_seed`` hashes heterogeneous values (seed, frame id, stage
  index) into a fresh 64-bit sub-seed so that per-frame and per-stage
  streams are independent of scheduling order.
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


def splitmix64(seed: int):
    """Yield an endless splitmix64 sequence starting from ``seed``."""
    state = seed & _MASK64
    while True:
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        yield z ^ (z >> 31)


def mix_seed(*parts) -> int:
    """Collapse ints and strings into one 64-bit sub-seed.

    Parts are length-prefixed and type-tagged before hashing so that
    e.g. ``("ab", "c")`` and ``("a", "bc")`` cannot collide.
    """
    h = hashlib.sha256()
    for part in parts:
        if isinstance(part, bool):
            raise TypeError("bool is not a valid seed part")
        if isinstance(part, int):
            data = (part & _MASK64).to_bytes(8, "big")
            h.update(b"i")
        elif isinstance(part, str):
            data = part.encode("utf-8")
            h.update(b"s")
        else:
            raise TypeError(f"cannot mix {type(part).__name__} into a seed")
        h.update(len(data).to_bytes(4, "big"))
        h.update(data)
    return int.from_bytes(h.digest()[:8], "big")


class Xoshiro256pp:
    """xoshiro256++ stream with helpers for uniform and Gaussian draws."""

    def __init__(self, seed: int):
        sm = splitmix64(seed)
        self._s = [next(sm) for _ in range(4)]

    def next_u64(self) -> int:
        s = self._s
        result = (_rotl((s[0] + s[3]) & _MASK64, 23) + s[0]) & _MASK64
        t = (s[1] << 17) & _MASK64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def _raw(self, n: int) -> np.ndarray:
        nxt = self.next_u64
        return np.array([nxt() for _ in range(n)], dtype=np.uint64)

    def uniforms(self, n: int) -> np.ndarray:
        """``n`` doubles in [0, 1) with 53-bit resolution."""
        return (self._raw(n) >> np.uint64(11)) * 2.0**-53

    def normals(self, n: int, mean: float = 0.0, std: float = 1.0) -> np.ndarray:
        """``n`` Gaussian samples via Box-Muller.

        Each pair consumes two consecutive uniforms; u1 is shifted into
        (0, 1] so the log never sees zero.
        """
        if n == 0:
            return np.empty(0)
        pairs = (n + 1) // 2
        raw = self._raw(2 * pairs)
        u1 = ((raw[0::2] >> np.uint64(11)) + np.uint64(1)) * 2.0**-53
        u2 = (raw[1::2] >> np.uint64(11)) * 2.0**-53
        radius = np.sqrt(-2.0 * np.log(u1))
        angle = 2.0 * np.pi * u2
        out = np.empty(2 * pairs)
        out[0::2] = radius * np.cos(angle)
        out[1::2] = radius * np.sin(angle)
        return out[:n] * std + mean
