"""Hot numeric kernels, each with a numba-jitted and a pure-numpy path.

The two per-pulse inner loops that dominate runtime live here:

* ``delay_phase_matrix`` -- fills the N_r x N unit-modulus measurement
  matrix exp(-j * omega_m * delay_i) for one pulse.
* ``fista_inner`` -- runs the m proximal-gradient steps of one solver
  update against the real parts of the running statistics.

The active path is chosen once at import time: numba is used when it
imports successfully and the environment variable ``SARFISTA_NUMBA`` is
not set to ``0`` / ``false`` / ``off``. Both implementations stay
importable under ``*_numpy`` / ``*_numba`` names so tests and
``benchmarks/bench_kernels.py`` can compare them directly.
"""

import os

import numpy as np


def _env_wants_numba() -> bool:
    flag = os.environ.get("SARFISTA_NUMBA", "1").strip().lower()
    return flag not in ("0", "false", "off", "no")


def delay_phase_matrix_numpy(omegas: np.ndarray, delays: np.ndarray) -> np.ndarray:
    """Pure-numpy phase fill: entry (m, i) = exp(-j * omegas[m] * delays[i])."""
    return np.exp(-1j * np.outer(omegas, delays))


def fista_inner_numpy(gram_re, corr_re, c0, t0, tau, thresh, steps):
    """Pure-numpy FISTA inner loop.

    Runs ``steps`` iterations of gradient / shrink / momentum /
    extrapolation on the real-projected quadratic with Hessian
    ``gram_re`` and linear term ``corr_re``, warm-started at ``c0``
    with momentum scalar ``t0`` and fixed step ``tau``.

    Returns the final iterate and the advanced momentum scalar.
    """
    c_prev = c0.copy()
    z = c0.copy()
    t = t0
    for _ in range(steps):
        g = gram_re @ z - corr_re
        u = z - tau * g
        c = np.sign(u) * np.maximum(np.abs(u) - thresh, 0.0)
        t_next = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
        z = c + ((t - 1.0) / t_next) * (c - c_prev)
        c_prev = c
        t = t_next
    return c_prev, t


NUMBA_REQUESTED = _env_wants_numba()
NUMBA_ACTIVE = False

delay_phase_matrix_numba = None
fista_inner_numba = None

if NUMBA_REQUESTED:
    try:
        from numba import njit

        @njit(cache=True)
        def _delay_phase_matrix_jit(omegas, delays):
            n_r = omegas.shape[0]
            n = delays.shape[0]
            out = np.empty((n_r, n), dtype=np.complex128)
            for m in range(n_r):
                w = omegas[m]
                for i in range(n):
                    ph = -w * delays[i]
                    out[m, i] = complex(np.cos(ph), np.sin(ph))
            return out

        @njit(cache=True)
        def _fista_inner_jit(gram_re, corr_re, c0, t0, tau, thresh, steps):
            m = c0.shape[0]
            c_prev = c0.copy()
            cur = np.empty(m, dtype=np.float64)
            z = c0.copy()
            t = t0
            for _ in range(steps):
                g = np.dot(gram_re, z)
                t_next = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
                w = (t - 1.0) / t_next
                for i in range(m):
                    u = z[i] - tau * (g[i] - corr_re[i])
                    if u > thresh:
                        ci = u - thresh
                    elif u < -thresh:
                        ci = u + thresh
                    else:
                        ci = 0.0
                    z[i] = ci + w * (ci - c_prev[i])
                    cur[i] = ci
                tmp = c_prev
                c_prev = cur
                cur = tmp
                t = t_next
            return c_prev.copy(), t

        delay_phase_matrix_numba = _delay_phase_matrix_jit
        fista_inner_numba = _fista_inner_jit
        NUMBA_ACTIVE = True
    except ImportError:
        NUMBA_ACTIVE = False

if NUMBA_ACTIVE:
    delay_phase_matrix = delay_phase_matrix_numba
    fista_inner = fista_inner_numba
else:
    delay_phase_matrix = delay_phase_matrix_numpy
    fista_inner = fista_inner_numpy
