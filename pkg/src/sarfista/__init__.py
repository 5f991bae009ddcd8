"""Streaming sparse SAR reconstruction with per-pulse sufficient statistics."""

__version__ = "0.1.0"

from .baseline import BpAccumulator, bp_accumulate, bp_image_db, bp_image_linear
from .dictionary import (
    DictionarySpec,
    EdgeletDictionary,
    EdgeletParams,
    build_dictionary,
    compose,
    rasterize_edgelet,
    synthesize,
)
from .geometry import (
    SPEED_OF_LIGHT,
    PulseGeometry,
    TrajectoryConfig,
    angular_frequencies,
    build_forward_matrix,
    platform_position,
    pulse_at,
    round_trip_delay,
)
from .harness import (
    ExperimentConfig,
    ExperimentTrace,
    StreamingRunner,
    load_config,
    run_experiment,
    simulate_pulse,
)
from .metrics import Method, MemoryReport, SnrReport, count_large, memory_values, snr_db
from .sampling import PulseSchedule, bernoulli_schedule, required_pulses, rip_constant
from .scene import (
    IDEAL_COEFF_COUNTS,
    SceneGrid,
    SceneId,
    ideal_components,
    make_scene,
    pixel_position,
    pixel_positions,
)
from .solver import (
    NoiseCovariance,
    PulseMeasurement,
    SolverConfig,
    SolverState,
    SufficientStatistics,
    accumulate,
    batch_fista,
    batch_gradient,
    batch_objective,
    hermitian_top_eigenvalue,
    load_checkpoint,
    online_fista_pulse,
    reconstruct,
    save_checkpoint,
    soft_threshold,
)
