"""Reconstruction metrics: support SNR, active-atom counts, storage accounting."""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

LARGE_COEFF_THRESHOLD = 2e-2


class Method(Enum):
    ONLINE_FISTA = "online_fista"
    BATCH_FISTA = "batch_fista"


@dataclass
class SnrReport:
    snr_db: float
    signal_power: float
    noise_power: float


@dataclass
class MemoryReport:
    method: Method
    values_stored: int


def snr_db(reconstruction, truth_mask):
    """Mean |pixel| over the support vs its complement, in dB.

    An exactly clean background reports +inf; an all-zero image reports
    0 dB (equal means by convention).
    """
    rec = np.asarray(reconstruction)
    mask = np.asarray(truth_mask, dtype=bool)
    if rec.shape != mask.shape or rec.ndim != 1:
        raise ValueError("reconstruction and mask must be matching 1-d vectors")
    if not mask.any() or mask.all():
        raise ValueError("mask needs at least one signal and one background pixel")
    mu_s = float(np.abs(rec[mask]).mean())
    mu_n = float(np.abs(rec[~mask]).mean())
    if mu_n == 0.0:
        value = 0.0 if mu_s == 0.0 else math.inf
    elif mu_s == 0.0:
        value = -math.inf
    else:
        value = 20.0 * math.log10(mu_s / mu_n)
    return SnrReport(value, mu_s, mu_n)


def count_large(coeffs, threshold=LARGE_COEFF_THRESHOLD):
    """Number of coefficients with |c_j| above the threshold."""
    if not threshold > 0.0:
        raise ValueError("threshold must be positive")
    return int(np.count_nonzero(np.abs(np.asarray(coeffs)) > threshold))


def memory_values(method, m_atoms, n_pixels, n_freqs, n_pulses):
    """Closed-form stored-value counts; complex entries count double.

    Both methods keep the dictionary (M N) and the estimate (M). The
    streaming method adds the complex pair A (M x M) and b (M); the
    batch method instead retains every pulse's complex d (N_r) and
    G (N_r x M) plus its covariance diagonal (N_r).
    """
    M, N, Nr, n = (int(v) for v in (m_atoms, n_pixels, n_freqs, n_pulses))
    if min(M, N, Nr, n) < 1:
        raise ValueError("all sizes must be at least 1")
    if method == Method.ONLINE_FISTA:
        stored = M * (N + 1) + (2 * M) * (M + 1)
    elif method == Method.BATCH_FISTA:
        stored = M * (N + 1) + (2 * n * Nr) * (1 + M + Nr)
    else:
        raise ValueError(f"unknown method: {method!r}")
    return MemoryReport(method, stored)
