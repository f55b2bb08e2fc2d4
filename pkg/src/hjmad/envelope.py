"""Moreau-envelope machinery.

Two families live here:

* the Monte-Carlo estimator of the viscous envelope and its gradient, built
  from softmin-weighted Gaussian samples around the query point, plus the
  moving-average smoother used on top of it;
* deterministic oracles (grid prox, grid envelope, quadrature gradient) that
  are exact up to discretization in one and two dimensions and exist to
  validate the estimator and drive the exact-prox solver.

The Gaussian has mean ``x`` and isotropic variance ``s2``:

``paper_literal``
    ``s2 = 2 t`` (heat kernel written without the viscosity).
``viscosity_consistent``
    ``s2 = delta * t`` (heat kernel of ``v_t = (delta / 2) Lap v``).  Only this
    choice recovers ``(x - prox) / t`` as ``delta -> 0``.

In both cases the gradient is ``(delta / s2) * (x - sum_i w_i y_i)`` with
``w_i`` proportional to ``exp(-f(y_i) / delta)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import logsumexp

from .errors import EstimationError, InvalidArgumentError, UnsupportedDimensionError
from .objectives import Objective

__all__ = [
    "VarianceMode",
    "SamplerConfig",
    "GradientEstimate",
    "GridSpec",
    "sample_variance",
    "estimate_gradient",
    "smoothed_envelope_value",
    "softmin_weights",
    "default_grid",
    "exact_prox_grid",
    "exact_envelope_grid",
    "grid_prox_and_envelope",
    "quadrature_envelope_value",
    "quadrature_gradient_oracle",
    "ewma_update",
]


class VarianceMode(str, enum.Enum):
    PAPER_LITERAL = "paper_literal"
    VISCOSITY_CONSISTENT = "viscosity_consistent"


def sample_variance(t: float, delta: float, mode) -> float:
    """Variance of the isotropic sampling Gaussian for time ``t``."""
    mode = VarianceMode(mode)
    if mode is VarianceMode.PAPER_LITERAL:
        return 2.0 * t
    return delta * t


@dataclass(frozen=True)
class SamplerConfig:
    n_samples: int = 100
    delta: float = 0.1
    variance_mode: VarianceMode = VarianceMode.VISCOSITY_CONSISTENT
    seed: int = 0

    def __post_init__(self):
        if int(self.n_samples) < 1:
            raise InvalidArgumentError(f"n_samples must be >= 1, got {self.n_samples!r}")
        if not self.delta > 0:
            raise InvalidArgumentError(f"delta must be positive, got {self.delta!r}")
        object.__setattr__(self, "n_samples", int(self.n_samples))
        object.__setattr__(self, "variance_mode", VarianceMode(self.variance_mode))


@dataclass(frozen=True)
class GradientEstimate:
    """Estimated envelope gradient with sampling diagnostics.

    Attributes
    ----------
    g : ndarray
        Estimate of the viscous envelope gradient.
    envelope_value : float
        Estimate of the viscous envelope value.
    ess : float
        Effective sample size ``1 / sum(w**2)`` of the normalized weights.
    max_weight : float
        Largest normalized weight.
    std_error : ndarray
        Delta-method standard error of each component of ``g``.
    best_point, best_value
        Lowest sampled objective value and where it was found.
    """

    g: np.ndarray
    envelope_value: float
    ess: float
    max_weight: float
    std_error: np.ndarray
    best_point: np.ndarray
    best_value: float


def _as_rng(rng, seed):
    if rng is None:
        return np.random.default_rng(seed)
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def softmin_weights(values, delta):
    """Normalized ``exp(-values / delta)`` computed relative to the minimum.

    Returns the normalized weights, the unnormalized (stabilized) weights and
    the minimum.  The largest unnormalized weight is exactly 1.
    """
    values = np.asarray(values, dtype=float)
    m = values.min()
    w = np.exp(-(values - m) / delta)
    return w / w.sum(), w, m


def estimate_gradient(obj: Objective, x, t: float, cfg: SamplerConfig, rng=None) -> GradientEstimate:
    """Monte-Carlo estimate of the viscous envelope gradient at ``(x, t)``.

    Draws ``cfg.n_samples`` Gaussian points around ``x`` (one batch, so the
    objective counter grows by exactly that many) and reduces them in index
    order.  ``rng`` may be a ``numpy.random.Generator``, a seed, or ``None``
    (use ``cfg.seed``).

    Raises
    ------
    InvalidArgumentError
        If ``t <= 0`` or ``x`` has the wrong dimension.
    EstimationError
        If the objective is non-finite at a sample; ``.point`` holds it.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (obj.dim,):
        raise InvalidArgumentError(f"expected a point of dimension {obj.dim}, got shape {x.shape}")
    if not t > 0:
        raise InvalidArgumentError(f"t must be positive, got {t!r}")
    rng = _as_rng(rng, cfg.seed)
    s2 = sample_variance(t, cfg.delta, cfg.variance_mode)
    y = x + np.sqrt(s2) * rng.standard_normal((cfg.n_samples, obj.dim))
    fy = obj.evaluate_batch(y)
    bad = ~np.isfinite(fy)
    if bad.any():
        p = y[np.argmax(bad)]
        raise EstimationError(f"non-finite objective value at sample {p.tolist()}", point=p)
    return _reduce(x, y, fy, s2, cfg.delta)


def _reduce(x, y, fy, s2, delta):
    wbar, w, m = softmin_weights(fy, delta)
    y_mean = wbar @ y
    scale = delta / s2
    g = scale * (x - y_mean)
    value = m - delta * np.log(w.sum() / w.size)
    se = scale * np.sqrt(wbar**2 @ (y - y_mean) ** 2)
    i = int(np.argmin(fy))
    return GradientEstimate(
        g=g,
        envelope_value=float(value),
        ess=float(1.0 / np.sum(wbar**2)),
        max_weight=float(wbar.max()),
        std_error=se,
        best_point=y[i].copy(),
        best_value=float(fy[i]),
    )


def smoothed_envelope_value(obj: Objective, x, t: float, cfg: SamplerConfig, rng=None) -> float:
    """Monte-Carlo estimate of the viscous envelope value.

    Uses the same draw as :func:`estimate_gradient`; when both numbers are
    needed call that function once and read ``envelope_value``.
    """
    return estimate_gradient(obj, x, t, cfg, rng).envelope_value


def ewma_update(g_avg, g, beta: float):
    """Exponentially weighted moving average of gradient estimates.

    ``g_avg=None`` initializes the average with ``g``; ``beta=0`` disables
    smoothing.
    """
    if not 0.0 <= beta < 1.0:
        raise InvalidArgumentError(f"beta must lie in [0, 1), got {beta!r}")
    g = np.asarray(g, dtype=float)
    if g_avg is None:
        return g.copy()
    g_avg = np.asarray(g_avg, dtype=float)
    if g_avg.shape != g.shape:
        raise InvalidArgumentError(f"shape mismatch: {g_avg.shape} vs {g.shape}")
    return beta * g_avg + (1.0 - beta) * g


# --------------------------------------------------------------------------
# grid oracles


@dataclass(frozen=True)
class GridSpec:
    """Tensor grid over an axis-aligned box (at most two dimensions)."""

    lower: tuple
    upper: tuple
    points_per_axis: int

    def __post_init__(self):
        lo = tuple(float(v) for v in np.atleast_1d(self.lower))
        hi = tuple(float(v) for v in np.atleast_1d(self.upper))
        if len(lo) != len(hi):
            raise InvalidArgumentError("lower and upper must have equal length")
        if len(lo) > 2:
            raise UnsupportedDimensionError(f"grid oracles support dim <= 2, got {len(lo)}")
        if int(self.points_per_axis) < 3:
            raise InvalidArgumentError(f"points_per_axis must be >= 3, got {self.points_per_axis!r}")
        if not all(h > l for l, h in zip(lo, hi)):
            raise InvalidArgumentError("upper must exceed lower on every axis")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)
        object.__setattr__(self, "points_per_axis", int(self.points_per_axis))

    @property
    def dim(self):
        return len(self.lower)

    @property
    def spacing(self):
        n = self.points_per_axis
        return np.array([(h - l) / (n - 1) for l, h in zip(self.lower, self.upper)])

    def axes(self):
        # Offsets are symmetric integers times the spacing, so a box centred on
        # zero gives a grid that is exactly symmetric under z -> -z.
        n = self.points_per_axis
        j = np.arange(n) - (n - 1) / 2.0
        return [0.5 * (l + h) + j * s for l, h, s in zip(self.lower, self.upper, self.spacing)]

    def nodes(self):
        """All nodes as an ``(m, dim)`` array in lexicographic order."""
        axes = self.axes()
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([a.ravel() for a in mesh], axis=-1)


def default_grid(obj: Objective, x, t: float, delta: Optional[float] = None) -> GridSpec:
    """Objective's default box widened to contain ``x`` with a sampling margin.

    Resolution is 4001 nodes in 1-D and 601 per axis in 2-D.
    """
    if obj.dim > 2:
        raise UnsupportedDimensionError(f"grid oracles support dim <= 2, got {obj.dim}")
    x = np.asarray(x, dtype=float)
    margin = 3.0 * np.sqrt(2.0 * t * max(1.0, delta if delta is not None else 1.0))
    lo, hi = x - margin, x + margin
    if obj.domain is not None:
        lo = np.minimum(lo, obj.domain[0])
        hi = np.maximum(hi, obj.domain[1])
    return GridSpec(tuple(lo), tuple(hi), 4001 if obj.dim == 1 else 601)


def grid_prox_and_envelope(obj: Objective, x, t: float, grid: Optional[GridSpec] = None):
    """Grid minimizer of ``f(z) + |z - x|^2 / (2t)`` and the minimum value.

    Near-ties (relative gap below 1e-12) go to the lexicographically smallest
    node.  Every node costs one counted evaluation.
    """
    if obj.dim > 2:
        raise UnsupportedDimensionError(f"grid oracles support dim <= 2, got {obj.dim}")
    x = np.asarray(x, dtype=float)
    if x.shape != (obj.dim,):
        raise InvalidArgumentError(f"expected a point of dimension {obj.dim}, got shape {x.shape}")
    if not t > 0:
        raise InvalidArgumentError(f"t must be positive, got {t!r}")
    if grid is None:
        grid = default_grid(obj, x, t)
    if grid.dim != obj.dim:
        raise InvalidArgumentError(f"grid dimension {grid.dim} != objective dimension {obj.dim}")
    z = grid.nodes()
    vals = obj.evaluate_batch(z) + np.sum((z - x) ** 2, axis=1) / (2.0 * t)
    vmin = vals.min()
    i = int(np.argmax(vals <= vmin + 1e-12 * max(1.0, abs(vmin))))
    return z[i].copy(), float(vals[i])


def exact_prox_grid(obj: Objective, x, t: float, grid: Optional[GridSpec] = None) -> np.ndarray:
    """Grid approximation of the proximal point of ``t f`` at ``x``."""
    return grid_prox_and_envelope(obj, x, t, grid)[0]


def exact_envelope_grid(obj: Objective, x, t: float, grid: Optional[GridSpec] = None) -> float:
    """Grid approximation of the Moreau envelope ``u(x, t)``."""
    return grid_prox_and_envelope(obj, x, t, grid)[1]


# --------------------------------------------------------------------------
# quadrature oracle


def quadrature_envelope_value(obj: Objective, x, t, delta, variance_mode, quad_points=None, half_width=12.0):
    """``-delta * log E[exp(-f(y) / delta)]`` for ``y ~ N(x, s2 I)`` by
    trapezoidal quadrature on a tensor grid in standardized coordinates.

    Nodes are fixed in standardized coordinates, so shifting ``x`` moves them
    rigidly; this keeps finite differences of the value smooth.  Evaluations
    bypass the objective's counter.
    """
    if obj.dim > 2:
        raise UnsupportedDimensionError(f"quadrature oracle supports dim <= 2, got {obj.dim}")
    if quad_points is None:
        quad_points = 20001 if obj.dim == 1 else 801
    x = np.asarray(x, dtype=float)
    s = np.sqrt(sample_variance(t, delta, variance_mode))
    z1 = np.linspace(-half_width, half_width, int(quad_points))
    dz = z1[1] - z1[0]
    trap = np.full(z1.size, dz)
    trap[[0, -1]] *= 0.5
    log_w1 = -0.5 * z1**2 - 0.5 * np.log(2.0 * np.pi) + np.log(trap)
    if obj.dim == 1:
        z, log_w = z1[:, None], log_w1
    else:
        za, zb = np.meshgrid(z1, z1, indexing="ij")
        z = np.stack([za.ravel(), zb.ravel()], axis=-1)
        log_w = (log_w1[:, None] + log_w1[None, :]).ravel()
    fy = np.asarray(obj.func(x + s * z), dtype=float)
    m = fy.min()
    return float(m - delta * logsumexp(log_w - (fy - m) / delta))


def quadrature_gradient_oracle(obj: Objective, x, t, delta, variance_mode, quad_points=None):
    """Central finite difference (step ``1e-5 * max(1, |x|)``) of
    :func:`quadrature_envelope_value`."""
    x = np.asarray(x, dtype=float)
    h = 1e-5 * max(1.0, float(np.linalg.norm(x)))
    g = np.empty(x.size)
    for i in range(x.size):
        e = np.zeros(x.size)
        e[i] = h
        up = quadrature_envelope_value(obj, x + e, t, delta, variance_mode, quad_points)
        dn = quadrature_envelope_value(obj, x - e, t, delta, variance_mode, quad_points)
        g[i] = (up - dn) / (2.0 * h)
    return g
