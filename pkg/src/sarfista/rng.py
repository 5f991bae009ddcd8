"""Counter-based deterministic random primitives (SplitMix64).

These are used wherever reproducibility from a seed alone must survive
library upgrades: pulse schedules and power-iteration start vectors.
Noise injection uses numpy generators (see harness).
"""

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(state: int) -> int:
    """One SplitMix64 finalization step; maps a 64-bit counter to 64 bits."""
    z = (state + _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def counter_uniform(seed: int, index: int) -> float:
    """Deterministic uniform draw in [0, 1) for (seed, index)."""
    mixed = splitmix64(((seed & _MASK64) * _GOLDEN + index + 1) & _MASK64)
    return (mixed >> 11) * 2.0 ** -53


def counter_unit_complex_vector(n: int, salt: int = 0x5EED) -> np.ndarray:
    """Deterministic complex start vector of unit 2-norm (power iteration)."""
    re = np.array([counter_uniform(salt, 2 * i) - 0.5 for i in range(n)])
    im = np.array([counter_uniform(salt, 2 * i + 1) - 0.5 for i in range(n)])
    v = re + 1j * im
    nrm = np.linalg.norm(v)
    if nrm == 0.0:  # cannot happen for n >= 1, guard anyway
        v = np.ones(n, dtype=np.complex128)
        nrm = np.sqrt(float(n))
    return v / nrm
