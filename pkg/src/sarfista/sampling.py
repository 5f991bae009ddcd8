"""Bernoulli pulse schedules and exact-recovery diagnostics."""

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .rng import counter_uniform


@dataclass
class PulseSchedule:
    selected_indices: tuple
    p: float
    seed: int
    num_positions: int


def bernoulli_schedule(num_positions, p, seed):
    """Independent Bernoulli(p) draw per slow-time position.

    Uses the counter-based generator so a (num_positions, p, seed)
    triple reproduces the same schedule on any platform or library
    version. Empty schedules are legal.
    """
    n = int(num_positions)
    if n < 1:
        raise ValueError("num_positions must be at least 1")
    if not 0.0 < p <= 1.0:
        raise ValueError("p must lie in (0, 1]")
    sel = tuple(k for k in range(n) if counter_uniform(seed, k) < p)
    return PulseSchedule(sel, float(p), int(seed), n)


def probability_for_expected(num_positions, expected_pulses):
    """p such that num_positions * p equals the target expected pulse count."""
    n = int(num_positions)
    if n < 1:
        raise ValueError("num_positions must be at least 1")
    if not expected_pulses > 0:
        raise ValueError("expected_pulses must be positive")
    return min(1.0, float(expected_pulses) / n)


def required_pulses(sparsity, scene_size, constant=1.0):
    """Advisory sampling budget ceil(constant * K * ln(N / K))."""
    K = int(sparsity)
    N = int(scene_size)
    if K < 1 or K >= N:
        raise ValueError("need 1 <= K < N")
    if not constant > 0.0:
        raise ValueError("constant must be positive")
    return math.ceil(constant * K * math.log(N / K))


def rip_constant(stacked_G, sparsity, max_supports=10**6):
    """Exhaustive restricted-isometry constant of order K.

    Columns are normalized to unit l2 norm first; delta_K is the worst
    eigenvalue deviation of any K-column Gram block from the identity.
    Refuses when the support count C(M, K) exceeds max_supports rather
    than silently subsampling.
    """
    G = np.asarray(stacked_G, dtype=np.complex128)
    if G.ndim != 2:
        raise ValueError("expected a 2-d measurement matrix")
    m_atoms = G.shape[1]
    K = int(sparsity)
    if not 1 <= K <= m_atoms:
        raise ValueError("sparsity out of range")
    if math.comb(m_atoms, K) > max_supports:
        raise ValueError(
            f"C({m_atoms}, {K}) supports exceed the exhaustive-search guard ({max_supports})"
        )
    norms = np.linalg.norm(G, axis=0)
    if np.any(norms == 0.0):
        raise ValueError("zero column cannot be normalized")
    Gn = G / norms
    delta = 0.0
    for support in combinations(range(m_atoms), K):
        B = Gn[:, support]
        w = np.linalg.eigvalsh(B.conj().T @ B)
        delta = max(delta, 1.0 - float(w[0]), float(w[-1]) - 1.0)
    return max(delta, 0.0)
