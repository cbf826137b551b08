"""Experiment configuration and result records."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from wakedep.energy import EnergyModel
from wakedep.mac import TimingConstants, WusMode, group_size

POLICIES = ("benchmark", "intelligent")
WUS_MODES = ("dedicated", "group")
EPICENTER_LAWS = ("uniform", "hotspots")
PLACEMENTS = ("uniform", "grid", "csv")
BACKENDS = ("auto", "compiled", "python")


@dataclass(frozen=True)
class Scenario:
    """Complete, validated description of one simulation experiment.

    Identical scenarios (including the seed) always produce bit-identical
    results; every random draw flows from the seed through counter-derived
    replication streams.
    """

    # arena and event geometry
    arena_width: float = 4.0
    arena_height: float = 4.0
    r_max: float = 2.0
    epicenter_law: str = "hotspots"
    hotspot_count: int = 3
    hotspot_jitter: float = 0.2
    # device population
    n_devices: int = 100
    duty_active_slots: int = 1
    duty_period_slots: int = 20
    duty_random_phase: bool = True
    wur_fraction: float = 1.0
    placement: str = "uniform"
    placement_csv: str = ""
    # energy model
    energy: EnergyModel = field(default_factory=EnergyModel)
    # slot timing
    timing: TimingConstants = field(default_factory=TimingConstants)
    # reporting policy
    policy: str = "benchmark"
    wus_mode: str = "group"
    k_req: int = 3
    knn_k: int = 5
    knn_window: int = 10_000
    group_size_override: int | None = None
    # event process
    p_event: float = 0.005
    # execution
    horizon_slots: int = 1_000_000
    burn_in_slots: int = 40_000
    seed: int = 1
    replications: int = 10
    replication_offset: int = 0
    backend: str = "auto"
    threads: int = 0

    def __post_init__(self) -> None:
        if self.n_devices < 1:
            raise ValueError("devices.count must be >= 1")
        if self.policy not in POLICIES:
            raise ValueError(f"policy.kind must be one of {POLICIES}, got {self.policy!r}")
        if self.wus_mode not in WUS_MODES:
            raise ValueError(f"wus.mode must be one of {WUS_MODES}, got {self.wus_mode!r}")
        if self.epicenter_law not in EPICENTER_LAWS:
            raise ValueError(
                f"events.epicenter_law must be one of {EPICENTER_LAWS}, got {self.epicenter_law!r}"
            )
        if self.placement not in PLACEMENTS:
            raise ValueError(
                f"devices.placement must be one of {PLACEMENTS}, got {self.placement!r}"
            )
        if self.placement == "csv" and not self.placement_csv:
            raise ValueError("devices.placement_csv required when devices.placement = csv")
        if self.backend not in BACKENDS:
            raise ValueError(f"sim.backend must be one of {BACKENDS}, got {self.backend!r}")
        for name in ("arena_width", "arena_height", "r_max"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"arena.{name} must be positive")
        if self.hotspot_count < 1:
            raise ValueError("events.hotspot_count must be >= 1")
        if self.hotspot_jitter < 0.0:
            raise ValueError("events.hotspot_jitter must be >= 0")
        if not 0.0 <= self.wur_fraction <= 1.0:
            raise ValueError("devices.wur_fraction must lie in [0, 1]")
        if self.duty_period_slots < 1 or not (
            0 <= self.duty_active_slots <= self.duty_period_slots
        ):
            raise ValueError("duty cycle requires 0 <= active_slots <= period_slots")
        if not 0.0 <= self.p_event <= 1.0:
            raise ValueError("events.p_event must lie in [0, 1]")
        if self.k_req < 1:
            raise ValueError("policy.k_req must be >= 1")
        if self.knn_k < 1 or self.knn_k > 256:
            raise ValueError("policy.knn_k must lie in [1, 256]")
        if self.knn_window < self.knn_k:
            raise ValueError("policy.knn_window must be >= policy.knn_k")
        if self.group_size_override is not None and self.group_size_override < 1:
            raise ValueError("wus.group_size override must be >= 1")
        if self.horizon_slots < self.timing.deadline_slots:
            raise ValueError("sim.horizon_slots must cover at least one deadline window")
        if not 0 <= self.burn_in_slots < self.horizon_slots:
            raise ValueError("sim.burn_in_slots must lie in [0, horizon)")
        if self.replications < 1:
            raise ValueError("sim.replications must be >= 1")
        if self.replication_offset < 0:
            raise ValueError("sim.replication_offset must be >= 0")
        if not 0 <= self.seed < (1 << 64):
            raise ValueError("sim.seed must be a 64-bit unsigned integer")
        if self.threads < 0:
            raise ValueError("sim.threads must be >= 0")

    @property
    def group_n(self) -> int:
        return group_size(self.n_devices, self.group_size_override)

    @property
    def idle_cost_per_slot(self) -> float:
        """Average duty-cycle sensing spend per slot, the BS's drift estimate."""
        return (self.duty_active_slots * self.energy.cost_sense) / self.duty_period_slots

    @property
    def wur_count(self) -> int:
        """Devices 0..wur_count-1 carry a wake-up receiver."""
        return int(math.floor(self.wur_fraction * self.n_devices + 0.5))

    def with_cell(self, n: int, policy: str, wus_mode: str) -> "Scenario":
        return replace(self, n_devices=n, policy=policy, wus_mode=wus_mode)


@dataclass(frozen=True)
class RunResult:
    """Pooled outcome of all replications of one scenario."""

    detection_probability: float
    ci95_halfwidth: float
    ci95_lo: float
    ci95_hi: float
    events_observed: int
    successes: int
    mean_reports_per_event: float
    depletion_fraction: float
    no_events: bool


@dataclass(frozen=True)
class ReplicationTally:
    """Raw counts from one replication; pooled by plain summation."""

    events: int
    successes: int
    reports_sum: int
    depleted_device_slots: int
    device_slots: int

    def __add__(self, other: "ReplicationTally") -> "ReplicationTally":
        return ReplicationTally(
            self.events + other.events,
            self.successes + other.successes,
            self.reports_sum + other.reports_sum,
            self.depleted_device_slots + other.depleted_device_slots,
            self.device_slots + other.device_slots,
        )


def wilson_interval(successes: int, trials: int, z: float = 1.959963984540054) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion.

    Behaves sensibly near 0 and 1, which matters for detection
    probabilities spanning several orders of magnitude.
    """
    if trials <= 0:
        raise ValueError("need at least one trial")
    p = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (p + z2 / (2.0 * trials)) / denom
    half = (
        z
        * math.sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials))
        / denom
    )
    return max(0.0, center - half), min(1.0, center + half)


def mode_enum(name: str) -> WusMode:
    return WusMode.DEDICATED if name == "dedicated" else WusMode.GROUP
