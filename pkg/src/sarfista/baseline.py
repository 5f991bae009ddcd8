"""Back-projection baseline: adjoint images accumulated pulse by pulse."""

from dataclasses import dataclass

import numpy as np

DB_FLOOR = 1e-12


@dataclass
class BpAccumulator:
    image_sum: np.ndarray
    pulse_count: int = 0

    @classmethod
    def empty(cls, n_pixels):
        n = int(n_pixels)
        if n < 1:
            raise ValueError("need at least one pixel")
        return cls(np.zeros(n, dtype=np.complex128), 0)


def bp_accumulate(acc, forward, d):
    """Add one pulse's adjoint image F^H d; no pulse retention."""
    F = np.asarray(forward)
    d = np.asarray(d)
    if F.ndim != 2 or d.ndim != 1 or F.shape[0] != d.shape[0]:
        raise ValueError("forward matrix and data dimensions disagree")
    if F.shape[1] != acc.image_sum.shape[0]:
        raise ValueError("forward matrix does not match the accumulator size")
    return BpAccumulator(acc.image_sum + F.conj().T @ d, acc.pulse_count + 1)


def bp_image_linear(acc):
    """Magnitude of the pulse-averaged adjoint image."""
    if acc.pulse_count < 1:
        raise RuntimeError("no pulses accumulated")
    return np.abs(acc.image_sum) / acc.pulse_count


def bp_image_db(acc, floor=DB_FLOOR):
    """20 log10 of the averaged magnitude image, floored to keep zeros finite."""
    mean = bp_image_linear(acc)
    return 20.0 * np.log10(np.maximum(mean, floor))
