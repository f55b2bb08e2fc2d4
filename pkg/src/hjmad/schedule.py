"""Trust-region style adaptive time stepping for the envelope time ``t``."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidArgumentError

__all__ = ["TimeStepParams", "time_step"]


@dataclass(frozen=True)
class TimeStepParams:
    """Parameters of the time-step rule.

    ``delta_ts`` is the additive slack in the growth test.  It is a separate
    knob from the viscosity ``delta`` of the sampler, although profiles
    usually set both to the same number.
    """

    eta_minus: float = 0.5
    eta_plus: float = 2.0
    theta: float = 0.9
    delta_ts: float = 0.1
    tau: float = 1e-2
    T: float = 10.0

    def __post_init__(self):
        if not 0.0 < self.eta_minus < 1.0 < self.eta_plus:
            raise InvalidArgumentError(
                f"need 0 < eta_minus < 1 < eta_plus, got {self.eta_minus!r}, {self.eta_plus!r}"
            )
        if not 0.0 < self.theta < 1.0:
            raise InvalidArgumentError(f"theta must lie in (0, 1), got {self.theta!r}")
        if not self.delta_ts >= 0.0:
            raise InvalidArgumentError(f"delta_ts must be nonnegative, got {self.delta_ts!r}")
        if not 0.0 < self.tau <= self.T:
            raise InvalidArgumentError(f"need 0 < tau <= T, got tau={self.tau!r}, T={self.T!r}")


def time_step(t: float, p_norm: float, q_norm: float, params: TimeStepParams) -> float:
    """Next time from the current time and two consecutive gradient norms.

    Time grows by ``eta_plus`` (capped at ``T``) when the new gradient norm
    ``p_norm`` has not exceeded ``theta * q_norm + delta_ts``; otherwise it
    shrinks by ``eta_minus`` (floored at ``tau``).

    >>> time_step(1.0, 0.0, 5.0, TimeStepParams(eta_plus=2.0, T=10.0, theta=0.9, delta_ts=1e-3))
    2.0
    """
    if not params.tau <= t <= params.T:
        raise InvalidArgumentError(f"t={t!r} outside [tau, T] = [{params.tau!r}, {params.T!r}]")
    if p_norm <= params.theta * q_norm + params.delta_ts:
        return min(params.eta_plus * t, params.T)
    return max(params.eta_minus * t, params.tau)
