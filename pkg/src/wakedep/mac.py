"""Wake-up signaling protocol and base-station scheduling policies.

Timing: the BS hears spontaneous reports one slot after the event onset.
Each wake-up round then costs two further slots (one for the wake-up
request, one for the woken device's sensing and transmission), so the
report of a device woken in round r lands at onset + 1 + 2r.  With a
1 ms slot and a 5 ms deadline, two rounds fit.

Two policies decide whom to wake:

* the benchmark ranks sleeping wake-up-capable devices purely by the
  activation law applied to their distance from the estimated epicenter;
* the intelligent policy scores the same devices with an online
  k-nearest-neighbour predictor over (estimated distance, predicted
  battery, slots since last activity), drops devices whose predicted
  battery cannot cover a report, and ranks by predicted success.

Until the predictor has at least k training samples the intelligent
policy falls back to the benchmark ranking.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from wakedep.energy import EnergyModel
from wakedep.rng import RandomStream
from wakedep.spatial import EventEpicenter

FEATURE_DIM = 3


class UntrainedPredictorError(RuntimeError):
    """The predictor was queried before it had any training data."""


class WusMode(enum.Enum):
    DEDICATED = "dedicated"
    GROUP = "group"


@dataclass(frozen=True)
class TimingConstants:
    """Slot layout of one event window."""

    slot_ms: float = 1.0
    deadline_ms: float = 5.0
    initial_report_slots: int = 1
    wakeup_round_slots: int = 2
    max_wakeup_rounds: int = 2

    def __post_init__(self) -> None:
        if self.slot_ms <= 0.0 or self.deadline_ms <= 0.0:
            raise ValueError("slot and deadline durations must be positive")
        if self.initial_report_slots < 1 or self.wakeup_round_slots < 1:
            raise ValueError("slot counts must be >= 1")
        if self.max_wakeup_rounds < 0:
            raise ValueError("max_wakeup_rounds must be >= 0")
        if self.deadline_ms < self.slot_ms * self.initial_report_slots:
            raise ValueError("deadline shorter than the initial report slot")

    @property
    def deadline_slots(self) -> int:
        return int(self.deadline_ms / self.slot_ms)

    @property
    def rounds_that_fit(self) -> int:
        """Wake-up rounds that land their reports by the deadline."""
        by_deadline = (self.deadline_slots - self.initial_report_slots) // self.wakeup_round_slots
        return max(0, min(self.max_wakeup_rounds, by_deadline))

    def round_report_slot(self, onset_slot: int, round_index: int) -> int:
        """Arrival slot of reports from devices woken in ``round_index`` (1-based)."""
        return onset_slot + self.initial_report_slots + round_index * self.wakeup_round_slots

    def round_issue_slot(self, onset_slot: int, round_index: int) -> int:
        return self.round_report_slot(onset_slot, round_index) - 1


@dataclass(frozen=True)
class WakeupSignal:
    mode: WusMode
    targets: tuple[int, ...]
    issue_slot: int

    def __post_init__(self) -> None:
        if self.mode is WusMode.DEDICATED and len(self.targets) > 1:
            raise ValueError("dedicated signal carries exactly one target")
        if len(set(self.targets)) != len(self.targets):
            raise ValueError("duplicate targets in wake-up signal")


@dataclass(frozen=True)
class PolicyDecision:
    """Signals to issue this round, plus optional duty-cycle overrides.

    Overrides are carried for custom policies; the built-in policies do
    not emit them because a sleeping device can only be reached through
    a wake-up signal in the first place.
    """

    signals: tuple[WakeupSignal, ...] = ()
    duty_cycle_overrides: dict = field(default_factory=dict)

    @property
    def target_ids(self) -> tuple[int, ...]:
        out: list[int] = []
        for sig in self.signals:
            out.extend(sig.targets)
        return tuple(out)


@dataclass(frozen=True)
class DeviceSnapshot:
    """BS-side view of one device at a decision slot."""

    device_id: int
    x: float
    y: float
    asleep: bool
    has_wur: bool
    predicted_battery: float
    slots_since_activity: int


@dataclass(frozen=True)
class EventReportSummary:
    """What the BS knows when it decides a wake-up round."""

    est_x: float
    est_y: float
    n_reports: int
    decision_slot: int

    def __post_init__(self) -> None:
        if self.n_reports < 1:
            raise ValueError("policy requires at least one initial report")


def group_size(n_population: int, override: int | None = None) -> int:
    """Group wake-up signal size: ceil(sqrt(N)) unless overridden."""
    if override is not None:
        if override < 1:
            raise ValueError("group size override must be >= 1")
        return override
    g = math.isqrt(n_population)
    if g * g < n_population:
        g += 1
    return g


class KnnPredictor:
    """Online k-nearest-neighbour success predictor.

    Samples are (feature triple, reported-in-time label) pairs kept in a
    sliding window; features are z-scored with running statistics over
    every sample ever added.  Distance ties are broken by insertion
    order (older sample wins) so scoring is fully deterministic.
    """

    def __init__(self, k: int = 5, window: int = 10_000):
        if k < 1:
            raise ValueError("k must be >= 1")
        if window < k:
            raise ValueError("window must be >= k")
        self.k = k
        self.window = window
        self._features: list[tuple[float, float, float]] = []
        self._labels: list[int] = []
        self._seq: list[int] = []
        self._next_seq = 0
        self._stat_n = 0
        self._mean = [0.0] * FEATURE_DIM
        self._m2 = [0.0] * FEATURE_DIM

    @property
    def size(self) -> int:
        return len(self._features)

    @property
    def trained(self) -> bool:
        return self.size >= self.k

    def add_sample(self, features, label: bool) -> None:
        f = tuple(float(v) for v in features)
        if len(f) != FEATURE_DIM:
            raise ValueError(f"expected {FEATURE_DIM} features, got {len(f)}")
        self._stat_n += 1
        for d in range(FEATURE_DIM):
            delta = f[d] - self._mean[d]
            self._mean[d] += delta / self._stat_n
            self._m2[d] += delta * (f[d] - self._mean[d])
        slot = self._next_seq % self.window
        if slot < len(self._features):
            self._features[slot] = f
            self._labels[slot] = int(bool(label))
            self._seq[slot] = self._next_seq
        else:
            self._features.append(f)
            self._labels.append(int(bool(label)))
            self._seq.append(self._next_seq)
        self._next_seq += 1

    def _scale(self) -> tuple[list[float], list[float]]:
        stds = []
        for d in range(FEATURE_DIM):
            if self._stat_n >= 2 and self._m2[d] > 0.0:
                stds.append(math.sqrt(self._m2[d] / self._stat_n))
            else:
                stds.append(0.0)
        return list(self._mean), stds

    def _standardize(self, f, mean, stds) -> tuple[float, float, float]:
        out = []
        for d in range(FEATURE_DIM):
            s = stds[d]
            out.append((f[d] - mean[d]) / s if s > 0.0 else 0.0)
        return tuple(out)

    def score(self, features) -> float:
        """Fraction of the k nearest training samples labeled successful."""
        if self.size == 0:
            raise UntrainedPredictorError("predictor has no training samples")
        f = tuple(float(v) for v in features)
        if len(f) != FEATURE_DIM:
            raise ValueError(f"expected {FEATURE_DIM} features, got {len(f)}")
        mean, stds = self._scale()
        zq = self._standardize(f, mean, stds)
        ranked = []
        for i in range(self.size):
            zp = self._standardize(self._features[i], mean, stds)
            dx = zq[0] - zp[0]
            dy = zq[1] - zp[1]
            dz = zq[2] - zp[2]
            d2 = dx * dx + dy * dy + dz * dz
            ranked.append((d2, self._seq[i], self._labels[i]))
        ranked.sort(key=lambda t: (t[0], t[1]))
        k = min(self.k, len(ranked))
        positives = sum(label for _, _, label in ranked[:k])
        return positives / k


def knn_score(predictor: KnnPredictor, features) -> float:
    """Predict the probability of a timely successful report."""
    return predictor.score(features)


def _estimated_distance(event: EventReportSummary, dev: DeviceSnapshot) -> float:
    dx = dev.x - event.est_x
    dy = dev.y - event.est_y
    return math.sqrt(dx * dx + dy * dy)


def _eligible_sleepers(candidates) -> list[DeviceSnapshot]:
    return [c for c in candidates if c.asleep and c.has_wur]


def _make_decision(
    ranked_ids: list[int], mode: WusMode, n_targets: int, issue_slot: int
) -> PolicyDecision:
    if not ranked_ids:
        return PolicyDecision()
    chosen = tuple(ranked_ids[:n_targets])
    if mode is WusMode.DEDICATED:
        signals = tuple(
            WakeupSignal(mode, (t,), issue_slot) for t in chosen[:1]
        )
    else:
        signals = (WakeupSignal(mode, chosen, issue_slot),)
    return PolicyDecision(signals=signals)


def benchmark_policy(
    event: EventReportSummary,
    candidates,
    timing: TimingConstants,
    mode: WusMode,
    n_population: int,
    group_size_override: int | None = None,
    stream: RandomStream | None = None,
) -> PolicyDecision:
    """Spatial-correlation-only ranking: wake whoever sits closest to the
    estimated epicenter, battery state ignored, duty cycles unchanged."""
    sleepers = _eligible_sleepers(candidates)
    if not sleepers:
        return PolicyDecision()
    order = sorted(
        sleepers, key=lambda c: (_estimated_distance(event, c), c.device_id)
    )
    n_targets = 1 if mode is WusMode.DEDICATED else group_size(n_population, group_size_override)
    return _make_decision(
        [c.device_id for c in order], mode, n_targets, event.decision_slot
    )


def intelligent_policy(
    event: EventReportSummary,
    candidates,
    predictor: KnnPredictor,
    energy: EnergyModel,
    timing: TimingConstants,
    mode: WusMode,
    n_population: int,
    group_size_override: int | None = None,
    stream: RandomStream | None = None,
) -> PolicyDecision:
    """KNN-scored wake-up selection with a battery-feasibility gate.

    Devices whose predicted battery cannot cover a full woken report
    (reception + sensing + transmission) are never targeted; this is at
    least as strict as requiring sensing plus transmission alone.  Ties
    in score fall back to the benchmark's spatial ranking, then to the
    device id, so forcing the predictor to a constant score reproduces
    the benchmark ordering.
    """
    if not predictor.trained:
        return benchmark_policy(
            event, candidates, timing, mode, n_population, group_size_override, stream
        )
    sleepers = _eligible_sleepers(candidates)
    threshold = float(energy.wake_report_cost)
    eligible = [c for c in sleepers if c.predicted_battery >= threshold]
    if not eligible:
        return PolicyDecision()
    scored = []
    for c in eligible:
        est_d = _estimated_distance(event, c)
        s = predictor.score((est_d, c.predicted_battery, float(c.slots_since_activity)))
        scored.append((-s, est_d, c.device_id))
    scored.sort()
    n_targets = 1 if mode is WusMode.DEDICATED else group_size(n_population, group_size_override)
    return _make_decision(
        [device_id for _, _, device_id in scored], mode, n_targets, event.decision_slot
    )


# --------------------------------------------------------------------------
# Event timeline resolution
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ReportRecord:
    device_id: int
    arrival_slot: int
    relevant: bool
    round_index: int  # 0 for spontaneous initial reports, r >= 1 for woken ones


@dataclass
class EventTimeline:
    epicenter: EventEpicenter
    reports: list[ReportRecord] = field(default_factory=list)
    signals: list[WakeupSignal] = field(default_factory=list)
    rounds_executed: int = 0

    def reporting_ids(self, timing: TimingConstants) -> set[int]:
        deadline = self.epicenter.onset_slot + timing.deadline_slots
        return {
            r.device_id
            for r in self.reports
            if r.relevant and r.arrival_slot <= deadline
        }


@dataclass
class RoundContext:
    """Mutable device state a wake-up round acts on (BS side of one event)."""

    positions: dict[int, tuple[float, float]]
    battery: dict[int, int]
    asleep: dict[int, bool]
    has_wur: dict[int, bool]
    r_max: float
    energy: EnergyModel


def resolve_event_round(
    timeline: EventTimeline,
    decision: PolicyDecision,
    ctx: RoundContext,
    timing: TimingConstants,
) -> list[ReportRecord]:
    """Execute one wake-up round and append its in-deadline reports.

    A woken device reports only if it actually received the signal
    (asleep, wake-up capable, reception cost covered), lies within the
    relevance radius, and can pay for sensing plus transmission.  The
    sensing attempt is paid for by any receiving device with enough
    charge, whether or not a report follows.  Reports that would land
    after the deadline are discarded.  Battery levels in ``ctx`` are
    updated in place.
    """
    round_index = timeline.rounds_executed + 1
    onset = timeline.epicenter.onset_slot
    report_slot = timing.round_report_slot(onset, round_index)
    timeline.rounds_executed = round_index
    timeline.signals.extend(decision.signals)

    new_reports: list[ReportRecord] = []
    if report_slot > onset + timing.deadline_slots:
        return new_reports
    for target in decision.target_ids:
        if not (ctx.asleep.get(target) and ctx.has_wur.get(target)):
            continue
        if ctx.battery[target] < ctx.energy.cost_wakeup_rx:
            continue  # reception itself is unaffordable
        ctx.battery[target] -= ctx.energy.cost_wakeup_rx
        if ctx.battery[target] < ctx.energy.cost_sense:
            continue
        ctx.battery[target] -= ctx.energy.cost_sense
        x, y = ctx.positions[target]
        dx = x - timeline.epicenter.x
        dy = y - timeline.epicenter.y
        if math.sqrt(dx * dx + dy * dy) > ctx.r_max:
            continue  # sensed nothing relevant, no transmission
        if ctx.battery[target] < ctx.energy.cost_tx:
            continue
        ctx.battery[target] -= ctx.energy.cost_tx
        record = ReportRecord(target, report_slot, True, round_index)
        timeline.reports.append(record)
        new_reports.append(record)
    return new_reports


def detection_success(timeline: EventTimeline, k_req: int, timing: TimingConstants) -> bool:
    """True iff at least ``k_req`` distinct relevant devices reported in time."""
    if k_req < 1:
        raise ValueError("k_req must be >= 1")
    return len(timeline.reporting_ids(timing)) >= k_req
