"""Spotlight trajectory and per-pulse frequency-domain forward operators."""

import math
from dataclasses import dataclass

import numpy as np

from .kernels import delay_phase_matrix
from .scene import pixel_positions

SPEED_OF_LIGHT = 299_792_458.0


@dataclass
class TrajectoryConfig:
    """Circular-arc platform path around the scene center."""

    radius: float = 4000.0
    altitude: float = 1000.0
    arc_start: float = 0.0
    arc_end: float = math.radians(2.0)
    num_positions: int = 1000

    def __post_init__(self):
        if self.radius <= 0.0:
            raise ValueError("radius must be positive")
        if self.altitude < 0.0:
            raise ValueError("altitude must be nonnegative")
        if not self.arc_end > self.arc_start:
            raise ValueError("arc_end must exceed arc_start")
        if self.num_positions < 1:
            raise ValueError("num_positions must be at least 1")


@dataclass
class PulseGeometry:
    slow_time_index: int
    position: np.ndarray
    frequencies: np.ndarray

    def __post_init__(self):
        self.position = np.asarray(self.position, dtype=np.float64).reshape(3)
        self.frequencies = np.asarray(self.frequencies, dtype=np.float64)
        if self.frequencies.ndim != 1 or self.frequencies.size < 1:
            raise ValueError("frequencies must be a nonempty 1-d vector")
        if np.any(np.diff(self.frequencies) <= 0.0):
            raise ValueError("frequencies must be strictly increasing")


def trajectory_angle(cfg, k) -> float:
    if not 0 <= k < cfg.num_positions:
        raise ValueError("position index out of range")
    if cfg.num_positions == 1:
        return cfg.arc_start
    frac = k / (cfg.num_positions - 1)
    return cfg.arc_start + frac * (cfg.arc_end - cfg.arc_start)


def platform_position(cfg, scene_center, k):
    """Platform location for slow-time position k, offset from the scene center."""
    theta = trajectory_angle(cfg, k)
    cx, cy, cz = (float(v) for v in scene_center)
    return np.array([
        cx + cfg.radius * math.cos(theta),
        cy + cfg.radius * math.sin(theta),
        cz + cfg.altitude,
    ])


def round_trip_delay(position, target) -> float:
    diff = np.asarray(position, dtype=np.float64) - np.asarray(target, dtype=np.float64)
    dist = float(np.linalg.norm(diff))
    if dist == 0.0:
        raise ValueError("platform position and target coincide")
    return 2.0 * dist / SPEED_OF_LIGHT


def angular_frequencies(n_frequencies=64, center_hz=1.0e9, bandwidth_hz=1.0e8):
    """Uniform angular-frequency samples spanning the band, strictly increasing."""
    n = int(n_frequencies)
    if n < 1:
        raise ValueError("need at least one frequency sample")
    if center_hz <= 0.0:
        raise ValueError("center frequency must be positive")
    if n == 1:
        return np.array([2.0 * math.pi * center_hz])
    if bandwidth_hz <= 0.0:
        raise ValueError("bandwidth must be positive for multiple samples")
    f = np.linspace(center_hz - 0.5 * bandwidth_hz, center_hz + 0.5 * bandwidth_hz, n)
    return 2.0 * math.pi * f


def pulse_at(cfg, scene_center, k, frequencies) -> PulseGeometry:
    return PulseGeometry(int(k), platform_position(cfg, scene_center, int(k)), frequencies)


def build_forward_matrix(pulse, grid):
    """Dense N_r x N matrix with entries exp(-j * w_m * delay_i), unit modulus."""
    pos = pixel_positions(grid)
    diff = pos - pulse.position[None, :]
    dists = np.sqrt((diff * diff).sum(axis=1))
    if np.any(dists == 0.0):
        raise ValueError("platform position coincides with a scene pixel")
    delays = (2.0 / SPEED_OF_LIGHT) * dists
    return delay_phase_matrix(
        np.ascontiguousarray(pulse.frequencies), np.ascontiguousarray(delays)
    )
