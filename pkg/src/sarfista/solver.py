"""Streaming sparse solver: sufficient statistics, per-pulse FISTA, batch oracle.

The running pair (A, b) summarizes every pulse seen so far, so the
per-pulse update never touches raw measurements again; the step-size
bound L grows by each increment's spectral norm instead of being
recomputed from scratch. A batch weighted-LASSO FISTA over retained
pulses serves as the equivalence oracle in tests.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .rng import counter_unit_complex_vector


class NoiseCovariance:
    """Noise covariance R: either sigma^2 * I or a full positive-definite matrix.

    Only two applications are ever needed: R^{-1} x for the statistics
    and R^{-1/2} x for the Lipschitz increment and whitening checks.
    """

    def __init__(self, sigma2=None, matrix=None):
        if (sigma2 is None) == (matrix is None):
            raise ValueError("give exactly one of sigma2 or matrix")
        if matrix is None:
            self.sigma2 = float(sigma2)
            if not self.sigma2 > 0.0:
                raise ValueError("sigma2 must be positive")
            self.matrix = None
            self._inv = None
            self._inv_sqrt = None
        else:
            R = np.asarray(matrix, dtype=np.complex128)
            if R.ndim != 2 or R.shape[0] != R.shape[1]:
                raise ValueError("covariance matrix must be square")
            if not np.allclose(R, R.conj().T, rtol=1e-12, atol=1e-12):
                raise ValueError("covariance matrix must be Hermitian")
            try:
                np.linalg.cholesky(R)
            except np.linalg.LinAlgError:
                raise ValueError("covariance matrix must be positive definite") from None
            w, U = np.linalg.eigh(R)
            self.sigma2 = None
            self.matrix = R
            self._inv = (U / w) @ U.conj().T
            self._inv_sqrt = (U / np.sqrt(w)) @ U.conj().T

    @classmethod
    def from_sigma(cls, sigma):
        """Scalar noise level; sigma = 0 is the noiseless convention R = I."""
        s = float(sigma)
        if s < 0.0:
            raise ValueError("sigma must be nonnegative")
        return cls(sigma2=s * s if s > 0.0 else 1.0)

    def apply_inverse(self, x):
        if self.matrix is None:
            return x / self.sigma2
        return self._inv @ x

    def apply_inverse_sqrt(self, x):
        if self.matrix is None:
            return x / math.sqrt(self.sigma2)
        return self._inv_sqrt @ x


@dataclass
class PulseMeasurement:
    """One pulse's data d, operator G, and noise covariance."""

    d: np.ndarray
    G: np.ndarray
    noise_cov: NoiseCovariance

    def __post_init__(self):
        self.d = np.asarray(self.d, dtype=np.complex128)
        self.G = np.asarray(self.G, dtype=np.complex128)
        if self.d.ndim != 1 or self.G.ndim != 2 or self.G.shape[0] != self.d.shape[0]:
            raise ValueError("measurement dimensions are inconsistent")
        if self.noise_cov.matrix is not None and self.noise_cov.matrix.shape[0] != self.d.shape[0]:
            raise ValueError("noise covariance does not match the data length")


@dataclass
class SufficientStatistics:
    A: np.ndarray
    b: np.ndarray
    L: float
    pulse_count: int = 0
    power_iteration_fallbacks: int = 0

    @classmethod
    def empty(cls, m_atoms, l_floor=1e-12):
        m = int(m_atoms)
        if m < 1:
            raise ValueError("need at least one atom")
        if not l_floor > 0.0:
            raise ValueError("l_floor must be positive")
        return cls(
            A=np.zeros((m, m), dtype=np.complex128),
            b=np.zeros(m, dtype=np.complex128),
            L=float(l_floor),
            pulse_count=0,
            power_iteration_fallbacks=0,
        )


@dataclass
class SolverState:
    c_hat: np.ndarray
    momentum_t: float
    stats: SufficientStatistics

    @classmethod
    def initial(cls, m_atoms, l_floor=1e-12):
        return cls(np.zeros(int(m_atoms)), 1.0, SufficientStatistics.empty(m_atoms, l_floor))


@dataclass
class SolverConfig:
    lam: float
    inner_steps: int = 20
    l_floor: float = 1e-12
    reset_momentum: bool = False

    def __post_init__(self):
        if not self.lam > 0.0:
            raise ValueError("lambda must be positive")
        if int(self.inner_steps) < 1:
            raise ValueError("inner_steps must be at least 1")
        if not self.l_floor > 0.0:
            raise ValueError("l_floor must be positive")


def hermitian_top_eigenvalue(X, rel_tol=1e-6, max_iter=500):
    """Largest eigenvalue of a Hermitian PSD matrix via power iteration.

    Returns (estimate, converged). On convergence the Rayleigh value is
    biased upward by the outstanding geometric tail plus one stopping
    increment; Rayleigh quotients approach the top eigenvalue from
    below, and the accumulated step bound must never fall under the
    true spectral norm. Exact fixed points (the identity, the zero
    matrix) get a zero correction. Non-convergence returns the last
    Rayleigh value with converged=False; callers fall back to the
    Frobenius norm.
    """
    X = np.asarray(X)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ValueError("matrix must be square")
    v = counter_unit_complex_vector(X.shape[0])
    lam_prev = None
    delta_prev = None
    for _ in range(int(max_iter)):
        w = X @ v
        lam = float(np.real(np.vdot(v, w)))
        norm_w = float(np.linalg.norm(w))
        if norm_w == 0.0:
            return 0.0, True
        v = w / norm_w
        if lam_prev is not None:
            delta = lam - lam_prev
            if abs(delta) <= rel_tol * max(abs(lam), 1e-300):
                tail = 0.0
                if delta_prev is not None and abs(delta_prev) > abs(delta) > 0.0:
                    q = delta / delta_prev
                    if 0.0 < q < 1.0:
                        tail = delta * q / (1.0 - q)
                return lam + tail + abs(delta), True
            delta_prev = delta
        lam_prev = lam
    return (lam_prev if lam_prev is not None else 0.0), False


def _pulse_increments(pulse):
    gh = pulse.G.conj().T
    dA = gh @ pulse.noise_cov.apply_inverse(pulse.G)
    dA = 0.5 * (dA + dA.conj().T)
    db = gh @ pulse.noise_cov.apply_inverse(pulse.d)
    return dA, db


def accumulate(stats, pulse):
    """Fold one pulse into (A, b, L); the pulse itself need not be kept."""
    m = stats.A.shape[0]
    if pulse.G.shape[1] != m:
        raise ValueError("pulse operator does not match the atom count")
    dA, db = _pulse_increments(pulse)
    A = stats.A + dA
    A = 0.5 * (A + A.conj().T)
    inc, converged = hermitian_top_eigenvalue(dA)
    fallbacks = stats.power_iteration_fallbacks
    if not converged:
        # ||X||_2 <= ||X||_F keeps the bound valid when iteration stalls
        inc = float(np.linalg.norm(dA, "fro"))
        fallbacks += 1
    return SufficientStatistics(
        A=A,
        b=stats.b + db,
        L=stats.L + max(inc, 0.0),
        pulse_count=stats.pulse_count + 1,
        power_iteration_fallbacks=fallbacks,
    )


def online_fista_pulse(state, cfg):
    """Run cfg.inner_steps proximal-gradient steps against the running statistics.

    Warm-starts at the previous estimate and, by default, resumes the
    carried momentum scalar; the step size is 1 / L for the current L.
    The estimate is real, so the gradient Re(A z - b) reduces to
    Re(A) z - Re(b) and the whole inner loop runs on real parts.
    """
    stats = state.stats
    if stats.pulse_count < 1:
        raise RuntimeError("no pulses accumulated yet")
    tau = 1.0 / stats.L
    a_re = np.ascontiguousarray(stats.A.real)
    b_re = np.ascontiguousarray(stats.b.real)
    c0 = np.ascontiguousarray(state.c_hat, dtype=np.float64)
    t0 = 1.0 if cfg.reset_momentum else float(state.momentum_t)
    c, t = kernels.fista_inner(a_re, b_re, c0, t0, tau, cfg.lam * tau, int(cfg.inner_steps))
    return SolverState(c_hat=c, momentum_t=float(t), stats=stats)


def soft_threshold(u, alpha):
    """Sign/phase-preserving shrinkage: 0 if |u| <= alpha, else u (1 - alpha/|u|)."""
    if alpha < 0.0:
        raise ValueError("alpha must be nonnegative")
    arr = np.asarray(u)
    mag = np.abs(arr)
    keep = np.maximum(mag - alpha, 0.0)
    scale = np.divide(keep, mag, out=np.zeros_like(keep, dtype=np.float64), where=mag > 0)
    out = arr * scale
    if arr.ndim == 0:
        return out.item()
    return out


def batch_objective(c, pulses, lam):
    """Weighted LASSO value over retained pulses (test oracle)."""
    c = np.asarray(c, dtype=np.float64)
    quad = 0.0 + 0.0j
    for p in pulses:
        r = p.d - p.G @ c
        quad += np.vdot(r, p.noise_cov.apply_inverse(r))
    if abs(quad.imag) > 1e-10 * max(1.0, abs(quad.real)):
        raise RuntimeError("quadratic term has a non-negligible imaginary part")
    return 0.5 * quad.real + lam * float(np.abs(c).sum())


def batch_gradient(c, pulses):
    """Gradient of the smooth term with respect to real c."""
    c = np.asarray(c, dtype=np.float64)
    g = None
    for p in pulses:
        term = p.G.conj().T @ p.noise_cov.apply_inverse(p.G @ c - p.d)
        g = term if g is None else g + term
    if g is None:
        raise ValueError("need at least one pulse")
    return np.ascontiguousarray(g.real)


def batch_fista(pulses, cfg, iterations):
    """Classical FISTA on the full pulse set from a zero start."""
    if int(iterations) < 1:
        raise ValueError("iterations must be at least 1")
    if not pulses:
        raise ValueError("need at least one pulse")
    m = pulses[0].G.shape[1]
    A = np.zeros((m, m), dtype=np.complex128)
    b = np.zeros(m, dtype=np.complex128)
    for p in pulses:
        dA, db = _pulse_increments(p)
        A += dA
        b += db
    A = 0.5 * (A + A.conj().T)
    L, converged = hermitian_top_eigenvalue(A)
    if not converged:
        L = float(np.linalg.norm(A, "fro"))
    L = max(L, cfg.l_floor)
    c0 = np.zeros(m)
    tau = 1.0 / L
    c, _ = kernels.fista_inner(
        np.ascontiguousarray(A.real), np.ascontiguousarray(b.real),
        c0, 1.0, tau, cfg.lam * tau, int(iterations),
    )
    return c


def reconstruct(state, dictionary):
    """Image synthesis H c for the current estimate."""
    H = dictionary.atoms if hasattr(dictionary, "atoms") else np.asarray(dictionary)
    if H.shape[1] != state.c_hat.shape[0]:
        raise ValueError("dictionary does not match the coefficient vector")
    return H @ state.c_hat


_CHECKPOINT_MAGIC = "sarfista-checkpoint 1"


def _hex_line(tag, values):
    return tag + " " + " ".join(float(v).hex() for v in values)


def save_checkpoint(path, state):
    """Text dump of (A, b, L, c, t, n); floats as hex for bit-exact round-trips."""
    stats = state.stats
    m = stats.b.shape[0]
    lines = [
        _CHECKPOINT_MAGIC,
        f"m {m}",
        f"pulse_count {stats.pulse_count}",
        f"fallbacks {stats.power_iteration_fallbacks}",
        "momentum_t " + float(state.momentum_t).hex(),
        "L " + float(stats.L).hex(),
        _hex_line("c_hat", state.c_hat),
    ]
    flat_b = []
    for z in stats.b:
        flat_b.extend((z.real, z.imag))
    lines.append(_hex_line("b", flat_b))
    for row in stats.A:
        flat = []
        for z in row:
            flat.extend((z.real, z.imag))
        lines.append(_hex_line("A", flat))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_checkpoint(path):
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    if not lines or lines[0] != _CHECKPOINT_MAGIC:
        raise ValueError("not a recognizable checkpoint file")
    fields = {}
    a_rows = []
    for ln in lines[1:]:
        tag, rest = ln.split(" ", 1)
        if tag == "A":
            a_rows.append(rest)
        else:
            fields[tag] = rest
    m = int(fields["m"])
    def _floats(text):
        return [float.fromhex(tok) for tok in text.split()]
    c_hat = np.array(_floats(fields["c_hat"]))
    raw_b = _floats(fields["b"])
    b = np.array([complex(raw_b[2 * i], raw_b[2 * i + 1]) for i in range(m)])
    if len(a_rows) != m or c_hat.shape != (m,):
        raise ValueError("checkpoint dimensions are inconsistent")
    A = np.empty((m, m), dtype=np.complex128)
    for i, row_text in enumerate(a_rows):
        raw = _floats(row_text)
        if len(raw) != 2 * m:
            raise ValueError("checkpoint row length mismatch")
        A[i] = [complex(raw[2 * j], raw[2 * j + 1]) for j in range(m)]
    stats = SufficientStatistics(
        A=A,
        b=b,
        L=float.fromhex(fields["L"]),
        pulse_count=int(fields["pulse_count"]),
        power_iteration_fallbacks=int(fields["fallbacks"]),
    )
    return SolverState(c_hat=c_hat, momentum_t=float.fromhex(fields["momentum_t"]), stats=stats)
