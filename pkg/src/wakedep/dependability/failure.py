"""Parametric lifetime models and availability quantities.

The lifetime family is Weibull with shape ``k`` and scale ``eta`` (in ms),
the standard choice when the failure rate follows a power law in time.
The hazard exponent is ``k - 1``, so any shape ``k > 0`` keeps the
exponent above -1 and the cumulative hazard finite near zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class HazardSingularityError(ValueError):
    """Raised when the hazard is evaluated at a point where it diverges."""


@dataclass(frozen=True)
class FailureModel:
    """Weibull lifetime with shape ``k`` (dimensionless) and scale ``eta`` (ms)."""

    shape: float
    scale: float

    def __post_init__(self) -> None:
        if not (self.shape > 0.0 and math.isfinite(self.shape)):
            raise ValueError(f"shape must be a finite positive real, got {self.shape}")
        if not (self.scale > 0.0 and math.isfinite(self.scale)):
            raise ValueError(f"scale must be a finite positive real, got {self.scale}")


@dataclass(frozen=True)
class AvailabilityRecord:
    """Observed mean uptime / downtime pair (ms), both nonnegative, not both zero."""

    mean_uptime: float
    mean_downtime: float

    def __post_init__(self) -> None:
        if self.mean_uptime < 0.0 or self.mean_downtime < 0.0:
            raise ValueError("mean uptime and downtime must be >= 0")
        if self.mean_uptime + self.mean_downtime <= 0.0:
            raise ValueError("mean uptime and downtime cannot both be zero")


def reliability_at(model: FailureModel, t: float) -> float:
    """Probability of surviving [0, t] without failure: exp(-(t/eta)^k)."""
    if t < 0.0:
        raise ValueError(f"time must be >= 0, got {t}")
    return math.exp(-((t / model.scale) ** model.shape))


def hazard_at(model: FailureModel, t: float) -> float:
    """Instantaneous failure rate (k/eta) * (t/eta)^(k-1) in 1/ms.

    For ``k < 1`` the rate diverges as t -> 0, so t = 0 is rejected there;
    for ``k = 1`` the rate is the constant 1/eta.
    """
    if t < 0.0:
        raise ValueError(f"time must be >= 0, got {t}")
    k, eta = model.shape, model.scale
    if t == 0.0:
        if k < 1.0:
            raise HazardSingularityError(
                f"hazard diverges at t=0 for shape {k} < 1"
            )
        if k == 1.0:
            return 1.0 / eta
        return 0.0
    return (k / eta) * (t / eta) ** (k - 1.0)


def steady_state_availability(record: AvailabilityRecord) -> float:
    """Long-run fraction of time operational: uptime / (uptime + downtime)."""
    return record.mean_uptime / (record.mean_uptime + record.mean_downtime)
