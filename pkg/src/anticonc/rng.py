"""Deterministic randomness.

All randomized operations take a 64-bit seed and derive independent
counter-based streams from it.  Streams are addressed by a path of labels
and integers (for example ``stream(seed, "greedy", trial)``), hashed into
a Philox key, so adding parallelism or reordering work never changes which
stream a given trial consumes.  Monte-Carlo loops draw trial i from the
stream addressed by its block index, which makes results independent of
thread count.
"""

import hashlib

import numpy as np

BLOCK = 8192  # trials per derived stream in Monte-Carlo loops


def derive_key(seed: int, *path) -> int:
    """Hash (seed, path) into a 128-bit Philox key."""
    h = hashlib.sha256()
    h.update(str(int(seed)).encode())
    for part in path:
        h.update(b"/")
        h.update(str(part).encode())
    return int.from_bytes(h.digest()[:16], "little")


def stream(seed: int, *path) -> np.random.Generator:
    """Independent generator for the given seed and path."""
    return np.random.Generator(np.random.Philox(key=derive_key(seed, *path)))


def random_permutation(n: int, gen: np.random.Generator) -> list[int]:
    """Uniform permutation of 1..n as a list, by Fisher-Yates."""
    perm = list(range(1, n + 1))
    for i in range(n - 1, 0, -1):
        j = int(gen.integers(0, i + 1))
        perm[i], perm[j] = perm[j], perm[i]
    return perm


def random_signs(m: int, gen: np.random.Generator) -> list[int]:
    """Uniform vector in {-1,+1}^m."""
    return [1 if b else -1 for b in gen.integers(0, 2, size=m)]


def random_ksubset(n: int, k: int, gen: np.random.Generator) -> int:
    """Uniform k-subset of {1..n} as a bitmask, by partial Fisher-Yates."""
    pool = list(range(n))
    mask = 0
    for i in range(k):
        j = int(gen.integers(i, n))
        pool[i], pool[j] = pool[j], pool[i]
        mask |= 1 << pool[i]
    return mask
