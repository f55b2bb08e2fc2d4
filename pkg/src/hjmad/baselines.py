"""Reference methods: finite-difference gradient descent and pure random search."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidArgumentError, NumericalFailureError
from .objectives import Objective
from .solver import StopReason, Trace, _Recorder, _start

__all__ = ["GRIEWANK_TRAP_START", "BaselineMethod", "BaselineConfig", "fd_gradient", "run_gd_fd", "run_prs"]

# Interior of the basin of the Griewank (n = 2) local minimizer near
# (9.4201, 13.3153), where f = 0.0666.  Found by BFGS from a 41 x 41 grid of
# starts over [-20, 20]^2; used to show gradient descent stalling above the
# 5e-2 target.
GRIEWANK_TRAP_START = (9.42, 13.32)


class BaselineMethod(str, enum.Enum):
    GD_FD = "gd_fd"
    PRS = "prs"


@dataclass
class BaselineConfig:
    method: BaselineMethod = BaselineMethod.GD_FD
    step_size: float = 0.5
    fd_step: float = 1e-6
    budget: int = 10_000
    seed: int = 0
    domain: Optional[tuple] = None
    target_tolerance: Optional[float] = 5e-2
    grad_tolerance: float = 1e-8

    def __post_init__(self):
        self.method = BaselineMethod(self.method)
        if int(self.budget) < 1:
            raise InvalidArgumentError(f"budget must be >= 1, got {self.budget!r}")
        if not self.fd_step > 0:
            raise InvalidArgumentError(f"fd_step must be positive, got {self.fd_step!r}")
        if not self.step_size > 0:
            raise InvalidArgumentError(f"step_size must be positive, got {self.step_size!r}")


def fd_gradient(obj: Objective, x, h: float) -> np.ndarray:
    """Central differences; costs ``2 n`` counted evaluations."""
    n = obj.dim
    pts = np.repeat(x[None, :], 2 * n, axis=0)
    idx = np.arange(n)
    pts[2 * idx, idx] += h
    pts[2 * idx + 1, idx] -= h
    f = obj.evaluate_batch(pts)
    return (f[0::2] - f[1::2]) / (2.0 * h)


def _target(obj, tol):
    if tol is None or obj.optimum is None:
        return None
    return obj.optimum[1] + tol


def run_gd_fd(obj: Objective, x1, cfg: BaselineConfig) -> Trace:
    """Gradient descent on ``f`` itself with finite-difference gradients.

    Stops when the next gradient would exceed the evaluation budget, when the
    gradient norm drops to ``cfg.grad_tolerance``, or at the target.  Record
    fields ``t`` and ``u_est`` are NaN (no envelope is involved).
    """
    x = _start(obj, x1)
    rec = _Recorder("gd")
    start = obj.counter
    target = _target(obj, cfg.target_tolerance)
    cost = 2 * obj.dim
    k = 0
    while True:
        k += 1
        if obj.counter - start + cost > cfg.budget:
            if not rec.records:
                rec.add(k, x, obj.peek(x), math.nan, math.nan, math.nan, 0)
            return rec.trace(StopReason.MAX_ITERS)
        g = fd_gradient(obj, x, cfg.fd_step)
        fx = obj.peek(x)
        g_norm = float(np.linalg.norm(g))
        rec.add(k, x, fx, math.nan, g_norm, math.nan, obj.counter - start)
        if not (np.isfinite(fx) and np.all(np.isfinite(g))):
            raise NumericalFailureError(f"non-finite value or gradient at k={k}", trace=rec.trace(StopReason.MAX_ITERS))
        if target is not None and fx <= target:
            return rec.trace(StopReason.TARGET_REACHED)
        if g_norm <= cfg.grad_tolerance:
            return rec.trace(StopReason.GRAD_SMALL)
        x = x - cfg.step_size * g


def run_prs(obj: Objective, cfg: BaselineConfig) -> Trace:
    """Pure random search: i.i.d. uniform samples over the box, one record each.

    ``cfg.domain`` overrides the objective's default domain.
    """
    domain = cfg.domain if cfg.domain is not None else obj.domain
    if domain is None:
        raise InvalidArgumentError(f"{obj.name} has no domain; pass BaselineConfig.domain")
    lo = np.broadcast_to(np.asarray(domain[0], dtype=float), (obj.dim,))
    hi = np.broadcast_to(np.asarray(domain[1], dtype=float), (obj.dim,))
    rng = np.random.default_rng(cfg.seed)
    target = _target(obj, cfg.target_tolerance)
    rec = _Recorder("prs")
    start = obj.counter
    chunk = 4096
    k = 0
    while k < cfg.budget:
        pts = rng.uniform(lo, hi, size=(min(chunk, cfg.budget - k), obj.dim))
        for x in pts:
            k += 1
            fx = obj(x)
            rec.add(k, x, fx, math.nan, math.nan, math.nan, obj.counter - start)
            if target is not None and fx <= target:
                return rec.trace(StopReason.TARGET_REACHED)
    return rec.trace(StopReason.MAX_ITERS)
