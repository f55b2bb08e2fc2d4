"""Zero-order global optimization by Moreau-envelope descent (MAD / HJ-MAD)."""

from .baselines import BaselineConfig, run_gd_fd, run_prs
from .envelope import (
    GradientEstimate,
    GridSpec,
    SamplerConfig,
    VarianceMode,
    estimate_gradient,
    ewma_update,
    exact_envelope_grid,
    exact_prox_grid,
    quadrature_gradient_oracle,
    smoothed_envelope_value,
)
from .errors import (
    EstimationError,
    HJMADError,
    InvalidArgumentError,
    NumericalFailureError,
    UnsupportedDimensionError,
)
from .objectives import GammaSpec, Objective, make_objective
from .schedule import TimeStepParams, time_step
from .solver import SolverConfig, StopReason, Trace, check_assumptions, run_hj_mad, run_mad

__version__ = "0.1.0"
