"""Arena geometry, device placement, and the spatial activation law.

A critical event has an epicenter inside a rectangular arena; device
activation decays with distance as exp(-d) and only devices within the
relevance radius can observe the event at all.  Distances are in
dimensionless arena units so the activation law spans meaningful
probabilities over a unit-scale arena.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

from wakedep.rng import RandomStream


@dataclass(frozen=True)
class Arena:
    """Rectangular arena with a relevance radius around event epicenters."""

    width: float
    height: float
    r_max: float

    def __post_init__(self) -> None:
        for name in ("width", "height", "r_max"):
            v = getattr(self, name)
            if not (v > 0.0 and math.isfinite(v)):
                raise ValueError(f"arena {name} must be a finite positive real, got {v}")

    def contains(self, x: float, y: float) -> bool:
        return 0.0 <= x <= self.width and 0.0 <= y <= self.height

    @property
    def diagonal(self) -> float:
        return math.sqrt(self.width * self.width + self.height * self.height)


@dataclass(frozen=True)
class EventEpicenter:
    x: float
    y: float
    onset_slot: int

    def __post_init__(self) -> None:
        if self.onset_slot < 0:
            raise ValueError(f"onset slot must be >= 0, got {self.onset_slot}")


class DevicePlacement:
    """Fixed 2-D positions for the device population."""

    def __init__(self, positions, arena: Arena | None = None):
        self.positions = [(float(x), float(y)) for x, y in positions]
        if not self.positions:
            raise ValueError("placement needs at least one device")
        if arena is not None:
            for i, (x, y) in enumerate(self.positions):
                if not arena.contains(x, y):
                    raise ValueError(
                        f"device {i} at ({x}, {y}) lies outside the arena"
                    )

    def __len__(self) -> int:
        return len(self.positions)

    def distance_to(self, index: int, x: float, y: float) -> float:
        px, py = self.positions[index]
        dx = px - x
        dy = py - y
        return math.sqrt(dx * dx + dy * dy)


def activation_probability(d: float) -> float:
    """Activation probability exp(-d) at distance d from the epicenter."""
    if d < 0.0:
        raise ValueError(f"distance must be >= 0, got {d}")
    return math.exp(-d)


def sample_activations(
    epicenter: EventEpicenter, placement: DevicePlacement, stream: RandomStream
) -> set[int]:
    """Independent activation draws for every device, in index order.

    Exactly one uniform draw is consumed per device regardless of the
    outcome, so the draw sequence is fixed for a given population size.
    Sensing-state and relevance gating are applied by the caller.
    """
    activated: set[int] = set()
    for i in range(len(placement)):
        d = placement.distance_to(i, epicenter.x, epicenter.y)
        if stream.next_double() < math.exp(-d):
            activated.add(i)
    return activated


def relevant_devices(
    epicenter: EventEpicenter, placement: DevicePlacement, r_max: float
) -> set[int]:
    """Devices within the closed relevance ball of radius ``r_max``."""
    if not r_max > 0.0:
        raise ValueError(f"relevance radius must be positive, got {r_max}")
    return {
        i
        for i in range(len(placement))
        if placement.distance_to(i, epicenter.x, epicenter.y) <= r_max
    }


def uniform_placement(arena: Arena, n: int, stream: RandomStream) -> DevicePlacement:
    """Uniform-random placement; consumes 2n draws in device order."""
    if n < 1:
        raise ValueError(f"need at least one device, got {n}")
    positions = []
    for _ in range(n):
        x = stream.next_double() * arena.width
        y = stream.next_double() * arena.height
        positions.append((x, y))
    return DevicePlacement(positions, arena)


def grid_placement(arena: Arena, n: int) -> DevicePlacement:
    """Deterministic near-square grid, row-major from the arena origin."""
    if n < 1:
        raise ValueError(f"need at least one device, got {n}")
    cols = max(1, math.isqrt(n))
    if cols * cols < n:
        cols += 1
    rows = (n + cols - 1) // cols
    positions = []
    for i in range(n):
        r, c = divmod(i, cols)
        x = (c + 0.5) * arena.width / cols
        y = (r + 0.5) * arena.height / rows
        positions.append((x, y))
    return DevicePlacement(positions, arena)


def load_placement_csv(path: str | Path, arena: Arena | None = None) -> DevicePlacement:
    """Load a fixed layout from a ``device_id,x,y`` CSV file.

    Device ids must be the contiguous range 0..N-1; rows may appear in
    any order.  A header row is optional.
    """
    rows: dict[int, tuple[float, float]] = {}
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or (lineno == 1 and row[0].strip().lower() == "device_id"):
                continue
            if len(row) != 3:
                raise ValueError(f"{path}:{lineno}: expected device_id,x,y")
            try:
                did = int(row[0])
                x, y = float(row[1]), float(row[2])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from exc
            if did in rows:
                raise ValueError(f"{path}:{lineno}: duplicate device id {did}")
            rows[did] = (x, y)
    if not rows:
        raise ValueError(f"{path}: no devices found")
    if sorted(rows) != list(range(len(rows))):
        raise ValueError(f"{path}: device ids must be contiguous from 0")
    return DevicePlacement([rows[i] for i in range(len(rows))], arena)
