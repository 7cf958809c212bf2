"""Anti-diffusive finite-volume transport schemes, with exact-rational
verification of their long-time behaviour.

The library simulates four schemes for constant-velocity 1-D advection
(upwind, Lax-Wendroff, and the discontinuous-reconstruction scheme on a
fixed or alternately shifted grid) over either exact rationals or binary64,
and ships the classifiers that describe what the reconstruction schemes do
over long times: jump-pattern and extremity classification, two-periodicity
and discrete-Heaviside detection, staircase-front tracking, and the
five-configuration exponential-convergence verifier.
"""

from .scalars import BINARY64, RATIONAL
from .state import (
    GridState,
    JumpSequence,
    KIND_INFINITE,
    KIND_PERIODIC,
    PHASE_INTEGER,
    PHASE_SHIFTED,
    TailSpec,
    monotone_decomposition,
)
from .datum import (
    Affine,
    Constant,
    CosSinProduct,
    Piece,
    PiecewiseDatum,
    Sinusoid,
    cell_average,
)
from .schemes import (
    DL_FIXED,
    DL_SHIFTED,
    FROM_LEFT,
    FROM_RIGHT,
    LAX_WENDROFF,
    UPWIND,
    ReconstructionProfile,
    SchemeParams,
    dl_fixed_step,
    half_cell_integrals,
    integrate_reconstruction,
    lax_wendroff_step,
    reconstruct,
    run,
    shifted_step,
    step_once,
    upwind_step,
)
from .analysis import (
    FiveConfigReport,
    HAlphaReport,
    MetricsSample,
    StaircasePrediction,
    StaircaseReport,
    check_five_config_conditions,
    check_Hprime,
    classify_extremities,
    classify_H_alpha,
    count_positive_jumps,
    detect_two_periodicity,
    five_config_predicted_even_step,
    is_discrete_heaviside,
    l1_error_cell_averaged,
    linf_error_pointwise,
    plateau_metric_I,
    run_until_two_periodic,
    staircase_predicted_next,
)
from .experiments import (
    ExperimentConfig,
    TimeSeries,
    build_initial,
    init_periodic_state,
    run_experiment,
)

__version__ = "0.1.0"
