import numpy as np
import pytest

from sarfista.sampling import (
    bernoulli_schedule,
    probability_for_expected,
    required_pulses,
    rip_constant,
)


def test_schedule_p_one_selects_everything():
    sched = bernoulli_schedule(17, 1.0, seed=3)
    assert sched.selected_indices == tuple(range(17))
    assert sched.num_positions == 17


def test_schedule_is_deterministic_and_seed_sensitive():
    a = bernoulli_schedule(500, 0.1, seed=7)
    b = bernoulli_schedule(500, 0.1, seed=7)
    c = bernoulli_schedule(500, 0.1, seed=8)
    assert a.selected_indices == b.selected_indices
    assert a.selected_indices != c.selected_indices
    assert all(0 <= k < 500 for k in a.selected_indices)
    assert list(a.selected_indices) == sorted(set(a.selected_indices))


def test_schedule_golden_prefix():
    # frozen against the counter generator; a change here means schedules
    # (and every downstream trace) silently moved
    sched = bernoulli_schedule(1000, 0.1, seed=42)
    assert sched.selected_indices[:8] == (1, 3, 7, 17, 24, 42, 49, 50)
    assert len(sched.selected_indices) == 101


def test_schedule_count_concentrates_near_np():
    counts = [
        len(bernoulli_schedule(1000, 0.1, seed=s).selected_indices) for s in range(200)
    ]
    assert abs(float(np.mean(counts)) - 100.0) < 10.0


def test_schedule_rejects_bad_arguments():
    with pytest.raises(ValueError):
        bernoulli_schedule(0, 0.5, seed=1)
    with pytest.raises(ValueError):
        bernoulli_schedule(10, 0.0, seed=1)
    with pytest.raises(ValueError):
        bernoulli_schedule(10, 1.5, seed=1)


def test_probability_for_expected():
    assert probability_for_expected(1000, 100) == pytest.approx(0.1)
    assert probability_for_expected(10, 50) == 1.0  # capped
    with pytest.raises(ValueError):
        probability_for_expected(0, 5)
    with pytest.raises(ValueError):
        probability_for_expected(10, 0)


def test_required_pulses_examples():
    assert required_pulses(255, 256, 1.0) == 1
    assert required_pulses(4, 256, 1.0) == 17
    assert required_pulses(8, 256, 2.0) == 56
    with pytest.raises(ValueError):
        required_pulses(256, 256)
    with pytest.raises(ValueError):
        required_pulses(0, 256)
    with pytest.raises(ValueError):
        required_pulses(4, 256, 0.0)


def test_rip_orthonormal_columns_have_zero_constant():
    Q, _ = np.linalg.qr(np.random.default_rng(0).standard_normal((12, 6)))
    for K in (1, 2, 3):
        assert rip_constant(Q, K) == pytest.approx(0.0, abs=1e-12)


def test_rip_duplicate_columns_saturate():
    g = np.random.default_rng(1).standard_normal(8)
    G = np.column_stack([g, g, np.random.default_rng(2).standard_normal(8)])
    assert rip_constant(G, 2) >= 1.0 - 1e-12


def test_rip_is_nondecreasing_in_order():
    rng = np.random.default_rng(5)
    G = rng.standard_normal((20, 7)) + 1j * rng.standard_normal((20, 7))
    deltas = [rip_constant(G, K) for K in range(1, 6)]
    assert all(b >= a - 1e-12 for a, b in zip(deltas, deltas[1:]))


def test_rip_sandwich_on_sparse_vectors():
    rng = np.random.default_rng(9)
    G = rng.standard_normal((24, 8)) + 1j * rng.standard_normal((24, 8))
    Gn = G / np.linalg.norm(G, axis=0)
    K = 3
    delta = rip_constant(G, K)
    for _ in range(1000):
        x = np.zeros(8, dtype=np.complex128)
        support = rng.choice(8, size=K, replace=False)
        x[support] = rng.standard_normal(K) + 1j * rng.standard_normal(K)
        n2 = float(np.vdot(x, x).real)
        e2 = float(np.linalg.norm(Gn @ x) ** 2)
        assert e2 >= (1.0 - delta) * n2 - 1e-9
        assert e2 <= (1.0 + delta) * n2 + 1e-9


def test_rip_guards():
    rng = np.random.default_rng(3)
    with pytest.raises(ValueError):
        rip_constant(rng.standard_normal((10, 60)), 30, max_supports=10**6)
    G = rng.standard_normal((6, 4))
    G[:, 2] = 0.0
    with pytest.raises(ValueError):
        rip_constant(G, 2)
    with pytest.raises(ValueError):
        rip_constant(rng.standard_normal((6, 4)), 0)
    with pytest.raises(ValueError):
        rip_constant(rng.standard_normal(6), 1)
