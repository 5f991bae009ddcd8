"""Timing comparison of the jitted and pure-numpy kernel paths.

Run as a script:  python3 benchmarks/bench_kernels.py

The two hot loops are the per-pulse phase-matrix fill and the m-step
inner solver update. Sizes mirror the shipped presets (N_r = 64,
N = 256 pixels, M = 416/624 atoms). The jitted functions are called
once before timing so compilation cost is excluded.
"""

import time

import numpy as np

from sarfista import kernels


def time_call(fn, *args, repeats=50):
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def bench_phase_matrix(n_r=64, n_pixels=256):
    rng = np.random.default_rng(7)
    omegas = 2.0 * np.pi * np.linspace(9.5e9, 9.7e9, n_r)
    delays = (2.0 / 3.0e8) * (4000.0 + rng.random(n_pixels))
    rows = [("numpy", kernels.delay_phase_matrix_numpy)]
    if kernels.delay_phase_matrix_numba is not None:
        kernels.delay_phase_matrix_numba(omegas, delays)  # compile
        rows.append(("numba", kernels.delay_phase_matrix_numba))
    print(f"delay_phase_matrix  ({n_r} x {n_pixels})")
    base = None
    for name, fn in rows:
        t = time_call(fn, omegas, delays)
        base = base or t
        print(f"  {name:6s} {1e6 * t:10.1f} us   x{base / t:.2f}")


def bench_fista_inner(m_atoms=416, steps=20):
    rng = np.random.default_rng(11)
    B = rng.standard_normal((m_atoms, m_atoms))
    gram = np.ascontiguousarray(B @ B.T / m_atoms)
    corr = np.ascontiguousarray(rng.standard_normal(m_atoms))
    c0 = np.zeros(m_atoms)
    L = float(np.linalg.eigvalsh(gram)[-1])
    tau = 1.0 / L
    args = (gram, corr, c0, 1.0, tau, 0.05 * tau, steps)
    rows = [("numpy", kernels.fista_inner_numpy)]
    if kernels.fista_inner_numba is not None:
        kernels.fista_inner_numba(*args)  # compile
        rows.append(("numba", kernels.fista_inner_numba))
    print(f"fista_inner  (M = {m_atoms}, {steps} steps)")
    base = None
    for name, fn in rows:
        t = time_call(fn, *args)
        base = base or t
        print(f"  {name:6s} {1e6 * t:10.1f} us   x{base / t:.2f}")


if __name__ == "__main__":
    print(f"numba requested = {kernels.NUMBA_REQUESTED}, active = {kernels.NUMBA_ACTIVE}")
    bench_phase_matrix()
    bench_fista_inner(416)
    bench_fista_inner(624)
