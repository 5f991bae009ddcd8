"""End-to-end acceptance gate.

Each test checks one shipping criterion and emits a single
"ACCEPTANCE NN <label>: PASS/FAIL" line (echoed in the terminal
summary). Criteria 5-7 share two module-scoped sweeps over the four
scene presets and seeds 1..10, so this file runs the full desk-scale
experiment grid once.
"""

import dataclasses
import math
import statistics
import time

import numpy as np
import pytest
from conftest import ACCEPTANCE_LINES, random_pulse_set

from sarfista.cli import load_preset
from sarfista.dictionary import DictionarySpec, build_dictionary, compose
from sarfista.geometry import TrajectoryConfig, angular_frequencies, build_forward_matrix, pulse_at
from sarfista.harness import (
    TERMINATION_IDEAL,
    StreamingRunner,
    run_experiment,
    simulate_pulse,
)
from sarfista.metrics import Method, memory_values
from sarfista.sampling import required_pulses, rip_constant
from sarfista.scene import SceneGrid, make_scene
from sarfista.solver import (
    SolverConfig,
    SolverState,
    SufficientStatistics,
    accumulate,
    batch_fista,
    batch_gradient,
    batch_objective,
    online_fista_pulse,
)

SEEDS = tuple(range(1, 11))


def _report(num, label, ok):
    line = f"ACCEPTANCE {num:02d} {label}: {'PASS' if ok else 'FAIL'}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    return ok


@pytest.fixture(scope="module")
def preset_sweep():
    """Full preset runs (run-to-convergence), scene -> one trace per seed."""
    out = {}
    for n in range(1, 5):
        base = load_preset(n)
        out[n] = [run_experiment(dataclasses.replace(base, seed=s)) for s in SEEDS]
    return out


@pytest.fixture(scope="module")
def fixed10_sweep():
    """Preset runs truncated at exactly 10 fired pulses (no early stop)."""
    out = {}
    for n in range(1, 5):
        base = load_preset(n)
        out[n] = [
            run_experiment(
                dataclasses.replace(base, seed=s, max_pulses=10), stop_on_ideal=False
            )
            for s in SEEDS
        ]
    return out


def test_criterion_01_stats_gradient_equivalence():
    t0 = time.perf_counter()
    worst = 0.0
    for seed in range(20):
        pulses, m = random_pulse_set(1000 + seed)
        stats = SufficientStatistics.empty(m)
        for p in pulses:
            stats = accumulate(stats, p)
        rng = np.random.default_rng(seed)
        c = rng.standard_normal(m)
        g_stats = stats.A.real @ c - stats.b.real
        g_ref = batch_gradient(c, pulses)
        rel = float(np.linalg.norm(g_stats - g_ref)) / max(1.0, float(np.linalg.norm(g_ref)))
        worst = max(worst, rel)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-10 and elapsed < 1.0
    assert _report(1, "stats_gradient_equivalence", ok), (worst, elapsed)


def test_criterion_02_online_reaches_batch_objective():
    t0 = time.perf_counter()
    worst = 0.0
    lam = 5.0
    for seed in range(10):
        pulses, m = random_pulse_set(2000 + seed, n_pulses=4, m_atoms=12, n_r=10)
        stats = SufficientStatistics.empty(m)
        for p in pulses:
            stats = accumulate(stats, p)
        cfg = SolverConfig(lam=lam, inner_steps=10**4)
        state = online_fista_pulse(SolverState(np.zeros(m), 1.0, stats), cfg)
        c_batch = batch_fista(pulses, SolverConfig(lam=lam), iterations=10**4)
        f_online = batch_objective(state.c_hat, pulses, lam)
        f_batch = batch_objective(c_batch, pulses, lam)
        worst = max(worst, abs(f_online - f_batch) / abs(f_batch))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-6 and elapsed < 30.0
    assert _report(2, "online_objective_matches_batch", ok), (worst, elapsed)


def test_criterion_03_gradient_matches_finite_differences():
    h = 1e-5
    worst = 0.0
    for seed in range(5):
        pulses, m = random_pulse_set(3000 + seed, n_pulses=3, m_atoms=6, n_r=8)
        rng = np.random.default_rng(seed)
        # keep coordinates away from 0 so the objective is smooth on the stencil
        c = rng.uniform(0.5, 1.5, size=m) * rng.choice([-1.0, 1.0], size=m)
        g = batch_gradient(c, pulses)
        scale = max(1.0, float(np.abs(g).max()))
        for j in range(m):
            e = np.zeros(m)
            e[j] = h
            fd = (batch_objective(c + e, pulses, 0.0) - batch_objective(c - e, pulses, 0.0)) / (2 * h)
            worst = max(worst, abs(fd - g[j]) / scale)
    ok = worst <= 1e-5
    assert _report(3, "gradient_matches_central_differences", ok), worst


def test_criterion_04_lipschitz_bound_holds():
    ok = True
    for seed in range(20):
        pulses, m = random_pulse_set(4000 + seed)
        stats = SufficientStatistics.empty(m)
        prev_L = stats.L
        for p in pulses:
            stats = accumulate(stats, p)
            lam_max = float(np.linalg.eigvalsh(stats.A)[-1])
            if stats.L < lam_max * (1.0 - 1e-10) or stats.L < prev_L:
                ok = False
            prev_L = stats.L
    assert _report(4, "lipschitz_upper_bound", ok)


def test_criterion_05_scene_recovery_counts(preset_sweep):
    ideal = {1: 4, 2: 8, 3: 5, 4: 5}
    ok = True
    medians = {}
    for n, traces in preset_sweep.items():
        base = load_preset(n)
        truth = make_scene(base.scene, base.side_pixels, base.pixel_spacing).reflectivity
        tnorm = float(np.linalg.norm(truth))
        good = 0
        for trace in traces:
            residual = float(np.linalg.norm(trace.reconstruction - truth)) / tnorm
            if trace.final_count == ideal[n] and residual <= 0.05:
                good += 1
        if good < 8:
            ok = False
        medians[n] = statistics.median(t.pulses_fired for t in traces)
    if not (medians[3] > medians[1] and medians[4] > medians[1]):
        ok = False
    assert _report(5, "preset_scene_recovery", ok), medians


def test_criterion_06_post_convergence_snr(preset_sweep):
    ok = True
    for traces in preset_sweep.values():
        for trace in traces:
            if trace.termination_reason == TERMINATION_IDEAL:
                if trace.rows[-1].snr_online_db < 40.0:
                    ok = False
    assert _report(6, "post_convergence_snr", ok)


def test_criterion_07_gain_over_bp_at_ten_pulses(fixed10_sweep):
    ok = True
    worst = math.inf
    for traces in fixed10_sweep.values():
        for trace in traces:
            last = trace.rows[-1]
            assert last.pulse_index == 10
            worst = min(worst, last.gain_db)
            if not last.gain_db > 10.0:
                ok = False
    assert _report(7, "ten_pulse_gain_over_bp", ok), worst


def test_criterion_08_memory_accounting():
    ok = True
    rng = np.random.default_rng(0)
    for _ in range(50):
        M = int(rng.integers(1, 700))
        N = int(rng.integers(1, 700))
        Nr = int(rng.integers(1, 200))
        n = int(rng.integers(1, 10**6))
        online = M * N + M + 2 * M * M + 2 * M
        batch = M * N + M + 2 * n * Nr + 2 * n * Nr * M + 2 * n * Nr * Nr
        if memory_values(Method.ONLINE_FISTA, M, N, Nr, n).values_stored != online:
            ok = False
        if memory_values(Method.BATCH_FISTA, M, N, Nr, n).values_stored != batch:
            ok = False

    # live audit of what the streaming runner actually holds
    cfg = dataclasses.replace(load_preset(1), bernoulli_p=1.0, num_positions=4)
    grid = make_scene(cfg.scene, cfg.side_pixels)
    dictionary = build_dictionary(cfg.dictionary_spec())
    freqs = angular_frequencies(cfg.n_frequencies, cfg.center_frequency_hz, cfg.bandwidth_hz)
    runner = StreamingRunner(cfg, grid, dictionary)
    sim_rng = np.random.default_rng(cfg.seed)
    rows = []
    for k in range(3):
        pulse = pulse_at(cfg.trajectory(), grid.center, k, freqs)
        measurement, F = simulate_pulse(grid, pulse, dictionary, cfg.noise_sigma, sim_rng)
        rows.append(runner.process(F, measurement, k + 1))
    live = (
        dictionary.atoms.size
        + runner.state.c_hat.size
        + 2 * runner.state.stats.A.size
        + 2 * runner.state.stats.b.size
    )
    M = dictionary.m_atoms
    if live != M * (grid.n_pixels + 1) + 2 * M * (M + 1):
        ok = False
    if any(r.memory_online != live for r in rows):
        ok = False  # the trace must report the audited footprint, constant in n
    slopes = {b.memory_batch - a.memory_batch for a, b in zip(rows, rows[1:])}
    Nr = cfg.n_frequencies
    if slopes != {2 * Nr * (1 + M + Nr)}:
        ok = False
    assert _report(8, "memory_accounting", ok)


def test_criterion_09_forward_operator_properties():
    ok = True
    grid = SceneGrid(6)
    traj = TrajectoryConfig(num_positions=20)
    freqs = angular_frequencies(8, 9.6e9, 2.0e8)
    pulse = pulse_at(traj, grid.center, 7, freqs)
    F = build_forward_matrix(pulse, grid)
    if np.abs(np.abs(F) - 1.0).max() > 1e-12:
        ok = False
    rng = np.random.default_rng(11)
    for _ in range(20):
        x = rng.standard_normal(F.shape[1]) + 1j * rng.standard_normal(F.shape[1])
        y = rng.standard_normal(F.shape[0]) + 1j * rng.standard_normal(F.shape[0])
        lhs = np.vdot(y, F @ x)
        rhs = np.vdot(F.conj().T @ y, x)
        if abs(lhs - rhs) / max(1.0, abs(lhs)) > 1e-10:
            ok = False
    dictionary = build_dictionary(DictionarySpec((2, 3), (0.0, math.pi / 2), 6))
    G = compose(F, dictionary)
    H = dictionary.atoms
    ref = np.zeros_like(G)
    for i in range(F.shape[0]):
        for j in range(H.shape[1]):
            acc = 0.0 + 0.0j
            for p in range(F.shape[1]):
                acc += F[i, p] * H[p, j]
            ref[i, j] = acc
    if np.abs(G - ref).max() > 1e-12:
        ok = False
    assert _report(9, "forward_operator_properties", ok)


def test_criterion_10_sampling_diagnostics():
    ok = True
    Q, _ = np.linalg.qr(np.random.default_rng(2).standard_normal((16, 8)))
    if not all(rip_constant(Q, K) < 1e-12 for K in (1, 2, 3)):
        ok = False
    rng = np.random.default_rng(7)
    G = rng.standard_normal((24, 8)) + 1j * rng.standard_normal((24, 8))
    deltas = [rip_constant(G, K) for K in range(1, 6)]
    if not all(b >= a - 1e-12 for a, b in zip(deltas, deltas[1:])):
        ok = False
    Gn = G / np.linalg.norm(G, axis=0)
    K = 3
    delta = rip_constant(G, K)
    for _ in range(1000):
        x = np.zeros(8, dtype=np.complex128)
        support = rng.choice(8, size=K, replace=False)
        x[support] = rng.standard_normal(K) + 1j * rng.standard_normal(K)
        n2 = float(np.vdot(x, x).real)
        e2 = float(np.linalg.norm(Gn @ x) ** 2)
        if not ((1.0 - delta) * n2 - 1e-9 <= e2 <= (1.0 + delta) * n2 + 1e-9):
            ok = False
    if required_pulses(255, 256) != 1:
        ok = False
    if required_pulses(4, 256) != 17:
        ok = False
    if required_pulses(8, 256, 2.0) != 56:
        ok = False
    assert _report(10, "sampling_diagnostics", ok)


def test_criterion_11_deterministic_trace(tmp_path):
    cfg = dataclasses.replace(load_preset(1), max_pulses=12)
    a, b = tmp_path / "a", tmp_path / "b"
    run_experiment(cfg, out_dir=a, stop_on_ideal=False)
    run_experiment(cfg, out_dir=b, stop_on_ideal=False)
    ok = (a / "trace.csv").read_bytes() == (b / "trace.csv").read_bytes()
    assert _report(11, "deterministic_trace", ok)
