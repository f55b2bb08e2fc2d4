"""Benchmark objectives with known optima, default domains and evaluation counting.

All benchmark formulas are vectorized over the last axis, so a batch of
points with shape ``(k, n)`` is evaluated in one call.  Definitions follow
the Virtual Library of Simulation Experiments (Surjanovic & Bingham); Alpine
N.1 follows Rahnamayan et al. as catalogued by Jamil & Yang (2013).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import InvalidArgumentError

__all__ = [
    "Objective",
    "GammaSpec",
    "evaluate",
    "known_optimum",
    "default_domain",
    "make_objective",
    "available_functions",
    "griewank",
    "drop_wave",
    "alpine_n1",
    "ackley",
    "levy",
    "rastrigin",
    "quadratic",
    "double_well",
]


def griewank(x):
    x = np.asarray(x, dtype=float)
    i = np.arange(1, x.shape[-1] + 1)
    return 1.0 + np.sum(x**2, axis=-1) / 4000.0 - np.prod(np.cos(x / np.sqrt(i)), axis=-1)


def drop_wave(x):
    # Defined for n = 2 in the reference; the radial form extends it to any n.
    r2 = np.sum(np.asarray(x, dtype=float) ** 2, axis=-1)
    return -(1.0 + np.cos(12.0 * np.sqrt(r2))) / (0.5 * r2 + 2.0)


def alpine_n1(x):
    x = np.asarray(x, dtype=float)
    return np.sum(np.abs(x * np.sin(x) + 0.1 * x), axis=-1)


def ackley(x, a=20.0, b=0.2, c=2.0 * np.pi):
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    s1 = np.sum(x**2, axis=-1) / n
    s2 = np.sum(np.cos(c * x), axis=-1) / n
    return -a * np.exp(-b * np.sqrt(s1)) - np.exp(s2) + a + np.e


def levy(x):
    x = np.asarray(x, dtype=float)
    w = 1.0 + (x - 1.0) / 4.0
    head = np.sin(np.pi * w[..., 0]) ** 2
    mid = np.sum((w[..., :-1] - 1.0) ** 2 * (1.0 + 10.0 * np.sin(np.pi * w[..., :-1] + 1.0) ** 2), axis=-1)
    tail = (w[..., -1] - 1.0) ** 2 * (1.0 + np.sin(2.0 * np.pi * w[..., -1]) ** 2)
    return head + mid + tail


def rastrigin(x):
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    return 10.0 * n + np.sum(x**2 - 10.0 * np.cos(2.0 * np.pi * x), axis=-1)


def quadratic(x):
    """Half the squared Euclidean norm; its prox and envelope are closed form."""
    return 0.5 * np.sum(np.asarray(x, dtype=float) ** 2, axis=-1)


def double_well(x):
    """Sum of ``(x_i**2 - 1)**2``: two equal global wells per axis at +-1."""
    return np.sum((np.asarray(x, dtype=float) ** 2 - 1.0) ** 2, axis=-1)


@dataclass(frozen=True)
class GammaSpec:
    """Level-set margin: the sublevel set ``{f <= min f + gamma}`` is compact
    and holds no non-global critical points."""

    gamma: float

    def __post_init__(self):
        if not self.gamma > 0:
            raise InvalidArgumentError(f"gamma must be positive, got {self.gamma!r}")


class Objective:
    """A named black-box function with a thread-safe evaluation counter.

    Parameters
    ----------
    name : str
        Registry id.
    dim : int
        Input dimension.
    func : callable
        Maps an array of shape ``(..., dim)`` to values of shape ``(...)``.
    optimum : tuple of (array_like, float), optional
        Known global minimizer and minimum value.
    domain : tuple of (array_like, array_like), optional
        Lower and upper corners of an axis-aligned box.
    """

    def __init__(
        self,
        name: str,
        dim: int,
        func: Callable[[np.ndarray], np.ndarray],
        optimum: Optional[tuple] = None,
        domain: Optional[tuple] = None,
    ):
        if int(dim) < 1:
            raise InvalidArgumentError(f"dim must be positive, got {dim!r}")
        self.name = name
        self.dim = int(dim)
        self.func = func
        self.optimum = None
        if optimum is not None:
            x_star, f_star = optimum
            self.optimum = (np.asarray(x_star, dtype=float).reshape(self.dim), float(f_star))
        self.domain = None
        if domain is not None:
            lo, hi = (np.broadcast_to(np.asarray(b, dtype=float), (self.dim,)).copy() for b in domain)
            self.domain = (lo, hi)
        self._count = 0
        self._lock = threading.Lock()

    def __repr__(self):
        return f"Objective({self.name!r}, dim={self.dim}, evals={self._count})"

    @property
    def counter(self) -> int:
        return self._count

    def _check(self, x, batch):
        x = np.asarray(x, dtype=float)
        if batch:
            if x.ndim != 2 or x.shape[1] != self.dim:
                raise InvalidArgumentError(f"{self.name}: expected shape (k, {self.dim}), got {x.shape}")
        elif x.shape != (self.dim,):
            raise InvalidArgumentError(f"{self.name}: expected a point of dimension {self.dim}, got shape {x.shape}")
        return x

    def _add(self, k):
        with self._lock:
            self._count += k

    def __call__(self, x) -> float:
        x = self._check(x, batch=False)
        self._add(1)
        return float(self.func(x))

    def evaluate_batch(self, points) -> np.ndarray:
        """Evaluate ``k`` points stacked row-wise; the counter grows by ``k``."""
        points = self._check(points, batch=True)
        self._add(points.shape[0])
        return np.asarray(self.func(points), dtype=float).reshape(points.shape[0])

    def peek(self, x) -> float:
        """Evaluate without touching the counter (trace bookkeeping only)."""
        return float(self.func(self._check(x, batch=False)))

    def reset_counter(self):
        with self._lock:
            self._count = 0


def evaluate(obj: Objective, x) -> float:
    """Counted evaluation of ``obj`` at ``x``."""
    return obj(x)


def known_optimum(obj: Objective):
    return obj.optimum


def default_domain(obj: Objective):
    return obj.domain


# id -> (function, default dim, minimizer(n), minimum, half-width of symmetric box or (lo, hi))
_REGISTRY = {
    "griewank": (griewank, 2, lambda n: np.zeros(n), 0.0, 600.0),
    "drop_wave": (drop_wave, 2, lambda n: np.zeros(n), -1.0, 5.12),
    "alpine_n1": (alpine_n1, 2, lambda n: np.zeros(n), 0.0, 10.0),
    "ackley": (ackley, 2, lambda n: np.zeros(n), 0.0, 32.768),
    "levy": (levy, 2, lambda n: np.ones(n), 0.0, 10.0),
    "rastrigin": (rastrigin, 2, lambda n: np.zeros(n), 0.0, 5.12),
    "quadratic": (quadratic, 1, lambda n: np.zeros(n), 0.0, 10.0),
    "double_well": (double_well, 1, lambda n: np.ones(n), 0.0, 3.0),
}

_ALIASES = {"drop-wave": "drop_wave", "dropwave": "drop_wave", "alpine": "alpine_n1",
            "alpine-n1": "alpine_n1", "double-well": "double_well"}

# The six functions of the published comparison table.
BENCHMARKS = ("griewank", "drop_wave", "alpine_n1", "ackley", "levy", "rastrigin")


def available_functions():
    return tuple(_REGISTRY)


def make_objective(name: str, dim: Optional[int] = None) -> Objective:
    """Build a fresh (zero-count) objective from the registry.

    Raises
    ------
    KeyError
        If ``name`` is not registered.
    """
    key = _ALIASES.get(name.lower(), name.lower())
    if key not in _REGISTRY:
        raise KeyError(f"unknown function {name!r}; choose from {', '.join(_REGISTRY)}")
    func, d0, xstar, fstar, half = _REGISTRY[key]
    n = d0 if dim is None else int(dim)
    if n < 1:
        raise InvalidArgumentError(f"dim must be positive, got {dim!r}")
    return Objective(key, n, func, optimum=(xstar(n), fstar), domain=(-half * np.ones(n), half * np.ones(n)))
