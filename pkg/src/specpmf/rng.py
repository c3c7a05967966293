"""Counter-based deterministic random numbers (stream spec: splitmix64-counter v1).

All randomness in this package flows through one tiny, stateless generator so
that every batch is reproducible from ``(seed, index)`` alone, on any platform:

    draw(seed, i) = finalize((seed + (i + 1) * GOLDEN) mod 2**64)

where ``GOLDEN = 0x9E3779B97F4A7C15`` and ``finalize`` is the standard
splitmix64 output mix::

    z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9
    z ^= z >> 27;  z *= 0x94D049BB133111EB
    z ^= z >> 31

Uniform doubles take the top 53 bits: ``u = (draw >> 11) * 2**-53`` in [0, 1).
Because draws are indexed, extending a batch never changes its prefix, and
batches may be generated in any order or in parallel.
"""

import numpy as np

GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_MASK = (1 << 64) - 1


def mix64(z: int) -> int:
    """splitmix64 finalizer on a 64-bit integer."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


def random_u64(seed: int, count: int, start: int = 0) -> np.ndarray:
    """Draws ``start .. start+count-1`` of stream ``seed`` as uint64."""
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    z = np.uint64(seed & _MASK) + idx * np.uint64(GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def random_uniform(seed: int, count: int, start: int = 0) -> np.ndarray:
    """Uniform float64 draws in [0, 1), indexed like :func:`random_u64`."""
    return (random_u64(seed, count, start) >> np.uint64(11)).astype(np.float64) * 2.0**-53


def derive_seed(seed: int, *parts) -> int:
    """Fold integers and strings into a child seed.

    Strings are folded byte by byte (UTF-8) so the result does not depend on
    the process hash seed. Used to give every benchmark cell its own stream.
    """
    s = seed & _MASK
    for part in parts:
        if isinstance(part, str):
            s = mix64(s + GOLDEN)
            for byte in part.encode("utf-8"):
                s = mix64(s + GOLDEN + byte)
        else:
            s = mix64(s + GOLDEN + (int(part) & _MASK))
    return s
