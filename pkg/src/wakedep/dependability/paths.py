"""Redundant-path delivery analytics for replicated frames.

A message is replicated over independent paths; each path delivers with
some probability and, when it delivers, incurs a discrete slot-count
delay.  The in-deadline delivery probability is the complement of every
path missing the deadline, i.e. the parallel-structure formula applied
to the per-path probabilities of a timely arrival.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping


class PathSetError(ValueError):
    """Malformed path set."""


@dataclass(frozen=True)
class PathModel:
    """One delivery path: success probability plus a delay distribution.

    ``delay_pmf`` maps slot counts (>= 0) to probabilities summing to 1;
    it is the delay law conditional on the path delivering at all.
    """

    delivery_prob: float
    delay_pmf: tuple[tuple[int, float], ...]

    def __init__(self, delivery_prob: float, delay_pmf):
        if not 0.0 <= delivery_prob <= 1.0:
            raise PathSetError(
                f"delivery probability {delivery_prob} outside [0, 1]"
            )
        if isinstance(delay_pmf, Mapping):
            items = sorted(delay_pmf.items())
        else:
            items = sorted(delay_pmf)
        if not items:
            raise PathSetError("delay distribution cannot be empty")
        for slot, w in items:
            if int(slot) != slot or slot < 0:
                raise PathSetError(f"delay slot {slot} must be a nonnegative integer")
            if w < 0.0:
                raise PathSetError(f"delay weight {w} must be >= 0")
        total = math.fsum(w for _, w in items)
        if abs(total - 1.0) > 1e-12:
            raise PathSetError(f"delay distribution sums to {total}, expected 1")
        object.__setattr__(self, "delivery_prob", float(delivery_prob))
        object.__setattr__(self, "delay_pmf", tuple((int(s), float(w)) for s, w in items))

    def timely_prob(self, deadline: int) -> float:
        """P(path delivers and its delay is <= deadline)."""
        cdf = math.fsum(w for slot, w in self.delay_pmf if slot <= deadline)
        return self.delivery_prob * cdf


@dataclass(frozen=True)
class RedundantPathSet:
    paths: tuple[PathModel, ...]

    def __init__(self, paths):
        object.__setattr__(self, "paths", tuple(paths))
        if not self.paths:
            raise PathSetError("need at least one path")


def frer_delivery(path_set: RedundantPathSet, deadline: int) -> float:
    """Probability at least one independent path delivers within ``deadline`` slots."""
    if deadline < 0:
        raise ValueError(f"deadline must be >= 0, got {deadline}")
    acc = 0.0
    for path in path_set.paths:
        q = path.timely_prob(deadline)
        if q >= 1.0:
            return 1.0
        acc += math.log1p(-q)
    return -math.expm1(acc)
