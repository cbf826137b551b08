"""Per-device battery, harvesting, and duty-cycle state.

Energy is tracked in integer quanta.  Harvesting is Bernoulli per slot
(one quantum with probability ``harvest_prob``), which keeps the state
machine exact and cheap to reproduce across backends.  Actions that cost
more than the remaining battery are refused, never partially executed,
so the battery can never go negative; harvesting saturates at capacity.

Within one slot the canonical order is: harvest, then wake-up reception,
then sensing, then transmission.  The order matters because a device may
afford an early action but not a later one.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

from wakedep.rng import RandomStream


class Phase(enum.Enum):
    SLEEP = "sleep"
    ACTIVE = "active"


class Action(enum.Enum):
    # Declaration order is the canonical execution order within a slot.
    WAKEUP_RX = "wakeup_rx"
    SENSE = "sense"
    TRANSMIT = "transmit"


@dataclass(frozen=True)
class EnergyModel:
    """Battery capacity, harvest rate, and per-action costs, in quanta."""

    capacity: int = 24
    harvest_prob: float = 0.0012
    cost_sense: int = 2
    cost_tx: int = 10
    cost_wakeup_rx: int = 0

    def __post_init__(self) -> None:
        for name in ("cost_sense", "cost_tx", "cost_wakeup_rx"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if not 0.0 <= self.harvest_prob <= 1.0:
            raise ValueError(f"harvest_prob {self.harvest_prob} outside [0, 1]")
        max_cost = max(self.cost_sense, self.cost_tx, self.cost_wakeup_rx)
        if self.capacity < max(1, max_cost):
            raise ValueError(
                f"capacity {self.capacity} below the largest single-action cost {max_cost}"
            )

    def cost(self, action: Action) -> int:
        return {
            Action.WAKEUP_RX: self.cost_wakeup_rx,
            Action.SENSE: self.cost_sense,
            Action.TRANSMIT: self.cost_tx,
        }[action]

    @property
    def report_cost(self) -> int:
        """Quanta needed to sense and transmit one report."""
        return self.cost_sense + self.cost_tx

    @property
    def wake_report_cost(self) -> int:
        """Quanta a woken device needs end to end: reception, sensing,
        transmission.  Equals report_cost when reception is free."""
        return self.cost_wakeup_rx + self.cost_sense + self.cost_tx


@dataclass(frozen=True)
class DutyCycle:
    active_slots: int
    period_slots: int
    phase_offset: int = 0

    def __post_init__(self) -> None:
        if self.period_slots < 1:
            raise ValueError("period must be >= 1 slot")
        if not 0 <= self.active_slots <= self.period_slots:
            raise ValueError(
                f"active slots {self.active_slots} must lie in [0, {self.period_slots}]"
            )


@dataclass(frozen=True)
class Device:
    id: int
    position: tuple[float, float]
    battery: int
    duty: DutyCycle
    has_wur: bool = True

    def __post_init__(self) -> None:
        if self.battery < 0:
            raise ValueError("battery cannot be negative")


def duty_cycle_phase(device: Device, slot: int) -> Phase:
    """Scheduled phase at ``slot``: active for the first ``active_slots``
    of each period, shifted by the device's phase offset."""
    duty = device.duty
    pos = (slot + duty.phase_offset) % duty.period_slots
    return Phase.ACTIVE if pos < duty.active_slots else Phase.SLEEP


def step_energy(
    device: Device,
    actions: set[Action],
    model: EnergyModel,
    stream: RandomStream,
) -> tuple[Device, set[Action]]:
    """Advance a device by one slot: harvest, then attempt the actions.

    Returns the updated device and the set of refused actions.  Exactly
    one harvest draw is consumed whether or not the battery is full.
    Refused actions cost nothing.
    """
    if device.battery > model.capacity:
        raise ValueError("battery above capacity")
    battery = device.battery
    if stream.next_double() < model.harvest_prob:
        battery = min(model.capacity, battery + 1)
    refused: set[Action] = set()
    for action in Action:  # canonical order
        if action not in actions:
            continue
        cost = model.cost(action)
        if cost <= battery:
            battery -= cost
        else:
            refused.add(action)
    return replace(device, battery=battery), refused


def predict_battery(
    last_known: float,
    slots_elapsed: int,
    model: EnergyModel,
    idle_cost_per_slot: float = 0.0,
) -> float:
    """Deterministic battery forecast from the last reported level.

    Linear expectation: the harvest inflow minus the average idle spend
    (duty-cycle sensing), clamped to [0, capacity].  ``idle_cost_per_slot``
    is supplied by the caller because it depends on the duty cycle, not
    on the energy model alone.
    """
    if slots_elapsed < 0:
        raise ValueError(f"slots_elapsed must be >= 0, got {slots_elapsed}")
    expected = (
        float(last_known)
        + slots_elapsed * model.harvest_prob
        - slots_elapsed * idle_cost_per_slot
    )
    if expected < 0.0:
        return 0.0
    cap = float(model.capacity)
    return cap if expected > cap else expected


def depletion_threshold(model: EnergyModel) -> int:
    """Battery level below which a device cannot report (sense + transmit)."""
    return model.report_cost


__all__ = [
    "Action",
    "Device",
    "DutyCycle",
    "EnergyModel",
    "Phase",
    "depletion_threshold",
    "duty_cycle_phase",
    "predict_battery",
    "step_energy",
]
