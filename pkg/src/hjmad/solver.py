"""Moreau Adaptive Descent loops.

``run_mad`` uses the exact grid prox (1-D and 2-D only); ``run_hj_mad`` swaps
the prox for the sampled viscous-envelope gradient and works in any
dimension.  Both take the step ``x <- x - alpha * t * g`` without projection,
then adapt ``t`` with :func:`hjmad.schedule.time_step`.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .envelope import (
    GridSpec,
    SamplerConfig,
    estimate_gradient,
    ewma_update,
    grid_prox_and_envelope,
)
from .errors import EstimationError, InvalidArgumentError, NumericalFailureError, UnsupportedDimensionError
from .objectives import GammaSpec, Objective
from .schedule import TimeStepParams, time_step

__all__ = [
    "StopReason",
    "SolverConfig",
    "IterateRecord",
    "Trace",
    "AssumptionReport",
    "run_mad",
    "run_hj_mad",
    "check_assumptions",
]


class StopReason(str, enum.Enum):
    TARGET_REACHED = "target_reached"
    GRAD_SMALL_AT_T = "grad_small_at_T"
    MAX_ITERS = "max_iters"
    # baselines only: gradient vanished for a method with no time variable
    GRAD_SMALL = "grad_small"


@dataclass
class SolverConfig:
    """Settings shared by MAD and HJ-MAD.

    ``seed`` drives the solver's random stream; ``sampler.seed`` is only used
    by standalone calls to :func:`hjmad.envelope.estimate_gradient`.
    ``max_evals`` caps the algorithm's evaluation cost (sampling or grid
    evaluations; trace bookkeeping is excluded unless ``count_trace_evals``).
    """

    alpha: float = 1.0
    t1: float = 1.0
    params: TimeStepParams = field(default_factory=TimeStepParams)
    sampler: SamplerConfig = field(default_factory=SamplerConfig)
    ewma_beta: float = 0.0
    max_iters: int = 1000
    target_tolerance: Optional[float] = 5e-2
    grad_tolerance: float = 1e-6
    seed: int = 0
    max_evals: Optional[int] = None
    stall_iters: int = 5
    count_trace_evals: bool = False
    alpha_policy: str = "warn"

    def __post_init__(self):
        p = self.params
        if not p.tau <= self.t1 <= p.T:
            raise InvalidArgumentError(f"need tau <= t1 <= T, got t1={self.t1!r} with [{p.tau!r}, {p.T!r}]")
        if not 0.0 <= self.ewma_beta < 1.0:
            raise InvalidArgumentError(f"ewma_beta must lie in [0, 1), got {self.ewma_beta!r}")
        if int(self.max_iters) < 1:
            raise InvalidArgumentError(f"max_iters must be >= 1, got {self.max_iters!r}")
        if self.alpha_policy not in ("warn", "error", "ignore"):
            raise InvalidArgumentError(f"alpha_policy must be warn, error or ignore, got {self.alpha_policy!r}")
        if not self.alpha > 0:
            raise InvalidArgumentError(f"alpha must be positive, got {self.alpha!r}")
        if not _alpha_ok(self.alpha, p.eta_minus):
            msg = (f"alpha={self.alpha!r} outside ({1 - math.sqrt(p.eta_minus):.4g}, "
                   f"{1 + math.sqrt(p.eta_minus):.4g}); convergence guarantee does not apply")
            if self.alpha_policy == "error":
                raise InvalidArgumentError(msg)
            if self.alpha_policy == "warn":
                warnings.warn(msg, RuntimeWarning, stacklevel=3)


def _alpha_ok(alpha, eta_minus):
    r = math.sqrt(eta_minus)
    return 1.0 - r < alpha < 1.0 + r


@dataclass(frozen=True)
class IterateRecord:
    k: int
    x: np.ndarray
    f_x: float
    t: float
    g_norm: float
    u_est: float
    cum_evals: int


@dataclass
class Trace:
    records: List[IterateRecord]
    stop_reason: StopReason
    best_x: np.ndarray
    best_f: float
    method: str = ""

    @property
    def final(self) -> IterateRecord:
        return self.records[-1]

    def as_arrays(self):
        """Column arrays keyed by record field name."""
        cols = {name: np.array([getattr(r, name) for r in self.records])
                for name in ("k", "f_x", "t", "g_norm", "u_est", "cum_evals")}
        cols["x"] = np.array([r.x for r in self.records])
        return cols

    def evals_to_target(self, f_star, tolerance):
        """``cum_evals`` of the first record with ``f_x <= f_star + tolerance``."""
        for r in self.records:
            if r.f_x <= f_star + tolerance:
                return r.cum_evals
        return None


class _Recorder:
    """Accumulates records and the incumbent; builds the trace on demand."""

    def __init__(self, method):
        self.method = method
        self.records = []
        self.best_x = None
        self.best_f = math.inf

    def add(self, k, x, fx, t, g_norm, u_est, cum_evals):
        self.records.append(IterateRecord(k, x.copy(), float(fx), float(t), float(g_norm), float(u_est), int(cum_evals)))
        if fx < self.best_f or self.best_x is None:
            self.best_f = float(fx)
            self.best_x = x.copy()

    def trace(self, reason):
        return Trace(self.records, StopReason(reason), self.best_x, self.best_f, self.method)


def _start(obj, x1):
    x = np.array(x1, dtype=float).reshape(-1)
    if x.shape != (obj.dim,):
        raise InvalidArgumentError(f"x1 must have dimension {obj.dim}, got {x.shape}")
    if not np.all(np.isfinite(x)):
        raise InvalidArgumentError("x1 must be finite")
    return x


def _descend(obj, x1, cfg, method, gradient):
    """Shared loop.  ``gradient(x, t)`` returns ``(g, u_est)``."""
    x = _start(obj, x1)
    t = float(cfg.t1)
    p = cfg.params
    target = None
    if cfg.target_tolerance is not None and obj.optimum is not None:
        target = obj.optimum[1] + cfg.target_tolerance
    rec = _Recorder(method)
    start = obj.counter
    g_avg, q_norm, stall = None, None, 0
    for k in range(1, int(cfg.max_iters) + 1):
        try:
            g, u_est = gradient(x, t)
        except EstimationError as err:
            err.trace = rec.trace(StopReason.MAX_ITERS) if rec.records else None
            raise
        if cfg.ewma_beta > 0:
            g = ewma_update(g_avg, g, cfg.ewma_beta)
            g_avg = g
        fx = obj(x) if cfg.count_trace_evals else obj.peek(x)
        g_norm = float(np.linalg.norm(g))
        used = obj.counter - start
        rec.add(k, x, fx, t, g_norm, u_est, used)

        if target is not None and fx <= target:
            return rec.trace(StopReason.TARGET_REACHED)
        stall = stall + 1 if (t == p.T and g_norm <= cfg.grad_tolerance) else 0
        if stall >= cfg.stall_iters:
            return rec.trace(StopReason.GRAD_SMALL_AT_T)
        if cfg.max_evals is not None and used >= cfg.max_evals:
            return rec.trace(StopReason.MAX_ITERS)
        if k == cfg.max_iters:
            break

        x_next = x - cfg.alpha * t * g
        if not np.all(np.isfinite(x_next)):
            raise NumericalFailureError(f"non-finite iterate at k={k + 1}", trace=rec.trace(StopReason.MAX_ITERS))
        # no previous gradient at k = 1, so t2 = t1
        t = t if q_norm is None else time_step(t, g_norm, q_norm, p)
        q_norm = g_norm
        x = x_next
    return rec.trace(StopReason.MAX_ITERS)


def run_mad(obj: Objective, x1, cfg: SolverConfig, grid: Optional[GridSpec] = None) -> Trace:
    """Moreau Adaptive Descent with the exact grid prox.

    ``grid=None`` rebuilds the default grid around each iterate.  Each
    iteration costs one counted evaluation per grid node, and ``u_est`` is the
    grid envelope value ``u(x^k, t_k)``.
    """
    if obj.dim > 2:
        raise UnsupportedDimensionError(f"run_mad needs dim <= 2, got {obj.dim}")

    def gradient(x, t):
        z, u = grid_prox_and_envelope(obj, x, t, grid)
        return (x - z) / t, u

    return _descend(obj, x1, cfg, "mad", gradient)


def run_hj_mad(obj: Objective, x1, cfg: SolverConfig) -> Trace:
    """Hamilton-Jacobi Moreau Adaptive Descent.

    Each iteration draws ``cfg.sampler.n_samples`` points from a generator
    seeded with ``cfg.seed``, so a run is a pure function of its inputs.

    Examples
    --------
    >>> from hjmad.objectives import make_objective
    >>> trace = run_hj_mad(make_objective("quadratic"), [2.0], SolverConfig(seed=1))
    >>> trace.stop_reason.value
    'target_reached'
    """
    rng = np.random.default_rng(cfg.seed)

    def gradient(x, t):
        est = estimate_gradient(obj, x, t, cfg.sampler, rng)
        return est.g, est.envelope_value

    return _descend(obj, x1, cfg, "hj-mad", gradient)


@dataclass
class AssumptionReport:
    alpha_ok: bool
    times_ordered: bool
    t1_covers_optimum: bool
    details: dict

    @property
    def all_passed(self):
        return self.alpha_ok and self.times_ordered and self.t1_covers_optimum


def check_assumptions(obj: Objective, x1, cfg: SolverConfig, gamma: GammaSpec) -> AssumptionReport:
    """Check the step-size and initial-time conditions of the convergence theorem.

    Never raises on a failed check; callers decide whether to run anyway.
    """
    if obj.optimum is None:
        raise InvalidArgumentError(f"{obj.name} has no known optimum")
    p = cfg.params
    x1 = np.asarray(x1, dtype=float)
    r = math.sqrt(p.eta_minus)
    need_t1 = float(np.sum((obj.optimum[0] - x1) ** 2)) / (2.0 * gamma.gamma)
    return AssumptionReport(
        alpha_ok=_alpha_ok(cfg.alpha, p.eta_minus),
        times_ordered=p.tau <= cfg.t1 <= p.T,
        t1_covers_optimum=cfg.t1 >= need_t1,
        details={"alpha_interval": (1.0 - r, 1.0 + r), "t1_lower_bound": need_t1},
    )
