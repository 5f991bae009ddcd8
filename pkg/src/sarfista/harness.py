"""Experiment configuration, pulse simulation, and the streaming run loop."""

import hashlib
import math
import os
from dataclasses import dataclass, fields

import numpy as np

from .baseline import BpAccumulator, bp_accumulate, bp_image_linear
from .dictionary import DictionarySpec, build_dictionary, compose
from .geometry import TrajectoryConfig, angular_frequencies, build_forward_matrix, pulse_at
from .imgio import (
    atom_gallery,
    fmt_float,
    write_matrix_csv,
    write_pgm,
    write_schedule_csv,
    write_trace_csv,
)
from .metrics import Method, count_large, memory_values, snr_db
from .sampling import bernoulli_schedule
from .scene import IDEAL_COEFF_COUNTS, SceneId, make_scene, parse_scene_id
from .solver import (
    NoiseCovariance,
    PulseMeasurement,
    SolverConfig,
    SolverState,
    accumulate,
    online_fista_pulse,
    reconstruct,
)

# paired dictionary per scene: lengths and rotations (degrees)
_PAIRED_DICTS = {
    SceneId.SCENE1: ((4,), (0.0, 90.0)),
    SceneId.SCENE2: ((4,), (0.0, 90.0)),
    SceneId.SCENE3: ((2, 4, 6), (0.0,)),
    SceneId.SCENE4: ((2, 4, 6), (0.0,)),
}

TERMINATION_IDEAL = "ideal_count_reached"
TERMINATION_EXHAUSTED = "trajectory_exhausted"
TERMINATION_MAX_PULSES = "max_pulses"


@dataclass
class ExperimentConfig:
    """Flat experiment description; every field doubles as a config-file key.

    The l1 weight is stored as `lam` because `lambda` is reserved in
    Python; config files may spell the key either way.
    """

    scene: SceneId
    side_pixels: int = 16
    pixel_spacing: float = 1.0
    dict_lengths: tuple = ()
    dict_rotations_deg: tuple = ()
    allow_dictionary_mismatch: bool = False
    radius: float = 4000.0
    altitude: float = 1000.0
    arc_start_deg: float = 0.0
    arc_end_deg: float = 2.0
    num_positions: int = 1000
    center_frequency_hz: float = 1.0e9
    bandwidth_hz: float = 1.0e8
    n_frequencies: int = 64
    noise_sigma: float = 0.0
    lam: float = 1.0
    inner_steps: int = 20
    bernoulli_p: float = 0.1
    seed: int = 0
    ideal_coeff_count: int = 0
    large_coeff_threshold: float = 2e-2
    max_pulses: int = 1000
    l_floor: float = 1e-12
    reset_momentum: bool = False
    strict_count_termination: bool = False
    residual_tol: float = 0.05

    def __post_init__(self):
        if isinstance(self.scene, str):
            self.scene = parse_scene_id(self.scene)
        paired_lengths, paired_rots = _PAIRED_DICTS[self.scene]
        if not self.dict_lengths:
            self.dict_lengths = paired_lengths
        if not self.dict_rotations_deg:
            self.dict_rotations_deg = paired_rots
        self.dict_lengths = tuple(sorted(int(v) for v in self.dict_lengths))
        self.dict_rotations_deg = tuple(sorted(float(v) for v in self.dict_rotations_deg))
        paired = (tuple(sorted(paired_lengths)), tuple(sorted(paired_rots)))
        if (self.dict_lengths, self.dict_rotations_deg) != paired and not self.allow_dictionary_mismatch:
            raise ValueError(
                "dictionary does not match the scene pairing; "
                "set allow_dictionary_mismatch = true to override"
            )
        if self.ideal_coeff_count <= 0:
            self.ideal_coeff_count = IDEAL_COEFF_COUNTS[self.scene]
        if self.noise_sigma < 0.0:
            raise ValueError("noise_sigma must be nonnegative")
        if not 0.0 < self.bernoulli_p <= 1.0:
            raise ValueError("bernoulli_p must lie in (0, 1]")
        if self.max_pulses < 1:
            raise ValueError("max_pulses must be at least 1")
        if not self.residual_tol > 0.0:
            raise ValueError("residual_tol must be positive")

    def dictionary_spec(self):
        rotations = tuple(math.radians(v) for v in self.dict_rotations_deg)
        return DictionarySpec(self.dict_lengths, rotations, self.side_pixels)

    def trajectory(self):
        return TrajectoryConfig(
            radius=self.radius,
            altitude=self.altitude,
            arc_start=math.radians(self.arc_start_deg),
            arc_end=math.radians(self.arc_end_deg),
            num_positions=self.num_positions,
        )

    def solver_config(self):
        return SolverConfig(
            lam=self.lam,
            inner_steps=self.inner_steps,
            l_floor=self.l_floor,
            reset_momentum=self.reset_momentum,
        )


_LIST_FIELDS = {"dict_lengths", "dict_rotations_deg"}
_BOOL_FIELDS = {"allow_dictionary_mismatch", "reset_momentum", "strict_count_termination"}
_INT_FIELDS = {
    "side_pixels", "num_positions", "n_frequencies", "inner_steps",
    "seed", "ideal_coeff_count", "max_pulses",
}


def _parse_bool(text):
    t = text.strip().lower()
    if t in ("true", "1", "yes", "on"):
        return True
    if t in ("false", "0", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def parse_config_text(text):
    """Parse `key = value` lines ('#' comments) into a raw string mapping."""
    raw = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ValueError(f"line {lineno}: expected 'key = value'")
        key, value = stripped.split("=", 1)
        key = key.strip()
        value = value.strip()
        if not key or not value:
            raise ValueError(f"line {lineno}: empty key or value")
        if key in raw:
            raise ValueError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = value
    return raw


def config_from_mapping(raw):
    """Coerce a raw string mapping into an ExperimentConfig."""
    known = {f.name for f in fields(ExperimentConfig)}
    kwargs = {}
    for key, value in raw.items():
        name = "lam" if key == "lambda" else key
        if name not in known:
            raise ValueError(f"unknown config key: {key!r}")
        if name == "scene":
            kwargs[name] = parse_scene_id(value)
        elif name in _LIST_FIELDS:
            kwargs[name] = tuple(float(tok) for tok in str(value).split(",") if tok.strip())
        elif name in _BOOL_FIELDS:
            kwargs[name] = _parse_bool(str(value))
        elif name in _INT_FIELDS:
            kwargs[name] = int(str(value))
        else:
            kwargs[name] = float(str(value))
    if "scene" not in kwargs:
        raise ValueError("config must set 'scene'")
    return ExperimentConfig(**kwargs)


def load_config(path):
    with open(path) as fh:
        return config_from_mapping(parse_config_text(fh.read()))


def _format_value(name, value):
    if name == "scene":
        return value.value
    if name in _LIST_FIELDS:
        return ",".join(fmt_float(v) if isinstance(v, float) else str(v) for v in value)
    if name in _BOOL_FIELDS:
        return "true" if value else "false"
    if isinstance(value, float):
        return fmt_float(value)
    return str(value)


def config_canonical_text(cfg):
    """Sorted `key = value` rendering used for hashing and the manifest."""
    lines = []
    for f in sorted(fields(ExperimentConfig), key=lambda f: f.name):
        key = "lambda" if f.name == "lam" else f.name
        lines.append(f"{key} = {_format_value(f.name, getattr(cfg, f.name))}")
    return "\n".join(lines) + "\n"


def config_hash(cfg):
    return hashlib.sha256(config_canonical_text(cfg).encode("ascii")).hexdigest()


def simulate_pulse(grid, pulse, dictionary, sigma, rng):
    """One pulse of data: d = F rho plus circular complex Gaussian noise.

    Per-component noise variance is sigma^2, split evenly between real
    and imaginary parts. Returns the measurement and the forward matrix
    (the latter is only needed by the back-projection baseline).
    """
    F = build_forward_matrix(pulse, grid)
    d = F @ grid.reflectivity
    if sigma > 0.0:
        scale = sigma / math.sqrt(2.0)
        d = d + scale * (rng.standard_normal(d.size) + 1j * rng.standard_normal(d.size))
    measurement = PulseMeasurement(d, compose(F, dictionary), NoiseCovariance.from_sigma(sigma))
    return measurement, F


@dataclass
class TraceRow:
    pulse_index: int
    n_large: int
    snr_online_db: float
    snr_bp_db: float
    gain_db: float
    memory_online: int
    memory_batch: int


@dataclass
class ExperimentTrace:
    rows: list
    termination_reason: str
    reconstruction: np.ndarray
    bp_image: np.ndarray
    c_hat: np.ndarray
    schedule: object
    pulses_fired: int

    @property
    def final_count(self):
        return self.rows[-1].n_large if self.rows else 0


class StreamingRunner:
    """Owns the solver and baseline state for one run; pulses go in one at a time.

    Only sufficient statistics, the BP accumulator, and the ground-truth
    mask live here; measurement objects handed to process() are not
    retained anywhere.
    """

    def __init__(self, cfg, grid, dictionary):
        self.cfg = cfg
        self.grid = grid
        self.dictionary = dictionary
        self.solver_cfg = cfg.solver_config()
        self.state = SolverState.initial(dictionary.m_atoms, cfg.l_floor)
        self.bp = BpAccumulator.empty(grid.n_pixels)
        self.truth = grid.reflectivity
        self.truth_mask = self.truth > 0.0
        self.truth_norm = float(np.linalg.norm(self.truth))

    def process(self, forward, measurement, pulse_index):
        """Accumulate, update the estimate, update BP, and emit one metric row."""
        stats = accumulate(self.state.stats, measurement)
        self.state = online_fista_pulse(
            SolverState(self.state.c_hat, self.state.momentum_t, stats), self.solver_cfg
        )
        self.bp = bp_accumulate(self.bp, forward, measurement.d)
        recon = reconstruct(self.state, self.dictionary)
        n_large = count_large(self.state.c_hat, self.cfg.large_coeff_threshold)
        snr_online = snr_db(recon, self.truth_mask).snr_db
        snr_bp = snr_db(bp_image_linear(self.bp), self.truth_mask).snr_db
        m = self.dictionary.m_atoms
        n = self.grid.n_pixels
        nr = measurement.d.shape[0]
        return TraceRow(
            pulse_index=pulse_index,
            n_large=n_large,
            snr_online_db=snr_online,
            snr_bp_db=snr_bp,
            gain_db=snr_online - snr_bp,
            memory_online=memory_values(Method.ONLINE_FISTA, m, n, nr, pulse_index).values_stored,
            memory_batch=memory_values(Method.BATCH_FISTA, m, n, nr, pulse_index).values_stored,
        )

    def residual(self):
        recon = reconstruct(self.state, self.dictionary)
        if self.truth_norm == 0.0:
            return float(np.linalg.norm(recon))
        return float(np.linalg.norm(recon - self.truth)) / self.truth_norm

    def converged(self):
        """Ideal active-atom count, optionally guarded by a residual check."""
        n_large = count_large(self.state.c_hat, self.cfg.large_coeff_threshold)
        if n_large != self.cfg.ideal_coeff_count:
            return False
        if self.cfg.strict_count_termination:
            return True
        return self.residual() <= self.cfg.residual_tol

    def reconstruction(self):
        return reconstruct(self.state, self.dictionary)

    def bp_linear(self):
        if self.bp.pulse_count < 1:
            return np.zeros(self.grid.n_pixels)
        return bp_image_linear(self.bp)


def run_experiment(cfg, out_dir=None, stop_on_ideal=True):
    """Full streaming run over one Bernoulli schedule.

    Per scheduled position: simulate, fold into the statistics, run the
    inner solver, update BP, log one trace row. Stops on the ideal
    coefficient count (with residual guard), an exhausted schedule, or
    the max_pulses cap.
    """
    grid = make_scene(cfg.scene, cfg.side_pixels, cfg.pixel_spacing)
    dictionary = build_dictionary(cfg.dictionary_spec())
    trajectory = cfg.trajectory()
    freqs = angular_frequencies(cfg.n_frequencies, cfg.center_frequency_hz, cfg.bandwidth_hz)
    schedule = bernoulli_schedule(cfg.num_positions, cfg.bernoulli_p, cfg.seed)
    runner = StreamingRunner(cfg, grid, dictionary)
    rng = np.random.default_rng(cfg.seed)

    rows = []
    reason = TERMINATION_EXHAUSTED
    for fired, k in enumerate(schedule.selected_indices, start=1):
        pulse = pulse_at(trajectory, grid.center, k, freqs)
        measurement, forward = simulate_pulse(grid, pulse, dictionary, cfg.noise_sigma, rng)
        rows.append(runner.process(forward, measurement, fired))
        if stop_on_ideal and runner.converged():
            reason = TERMINATION_IDEAL
            break
        if fired >= cfg.max_pulses:
            reason = TERMINATION_MAX_PULSES
            break

    trace = ExperimentTrace(
        rows=rows,
        termination_reason=reason,
        reconstruction=runner.reconstruction(),
        bp_image=runner.bp_linear(),
        c_hat=runner.state.c_hat.copy(),
        schedule=schedule,
        pulses_fired=len(rows),
    )
    if out_dir is not None:
        write_outputs(cfg, grid, trace, out_dir)
    return trace


def write_manifest(path, cfg, trace):
    lines = [
        "artifact = sarfista " + _package_version(),
        "config_hash = " + config_hash(cfg),
        "termination = " + trace.termination_reason,
        "pulses_fired = " + str(trace.pulses_fired),
        "schedule_length = " + str(len(trace.schedule.selected_indices)),
    ]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
        fh.write(config_canonical_text(cfg))


def _package_version():
    from sarfista import __version__

    return __version__


def write_outputs(cfg, grid, trace, out_dir):
    """Emit trace.csv, images, schedule, and the run manifest into out_dir."""
    os.makedirs(out_dir, exist_ok=True)
    side = grid.side_pixels
    write_trace_csv(os.path.join(out_dir, "trace.csv"), trace.rows)
    write_schedule_csv(os.path.join(out_dir, "schedule.csv"), trace.schedule)
    write_pgm(os.path.join(out_dir, "scene.pgm"), grid.reflectivity.reshape(side, side))
    write_matrix_csv(os.path.join(out_dir, "scene.csv"), grid.reflectivity.reshape(side, side))
    write_pgm(os.path.join(out_dir, "recon_online.pgm"), trace.reconstruction.reshape(side, side))
    write_matrix_csv(
        os.path.join(out_dir, "recon_online.csv"), trace.reconstruction.reshape(side, side)
    )
    write_pgm(os.path.join(out_dir, "recon_bp.pgm"), trace.bp_image.reshape(side, side))
    write_matrix_csv(os.path.join(out_dir, "recon_bp.csv"), trace.bp_image.reshape(side, side))
    write_manifest(os.path.join(out_dir, "manifest.txt"), cfg, trace)


def export_dictionary_gallery(cfg_or_spec, path):
    spec = cfg_or_spec.dictionary_spec() if hasattr(cfg_or_spec, "dictionary_spec") else cfg_or_spec
    dictionary = build_dictionary(spec)
    atom_gallery(path, dictionary)
    return dictionary
