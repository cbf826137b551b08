"""Pure-Python replication loop: the normative simulation semantics.

The compiled kernel reproduces this module bit for bit; the draw order
below is the contract both backends follow.  Per replication:

  1. hotspot sites (2 draws each, hotspot law only),
  2. device positions (2 draws per device, uniform placement only),
  3. duty-cycle phase offsets (1 draw per device when randomized),
  4. then the slot loop; within one slot:
       a. one harvest draw per device, in device order,
       b. scheduled duty-cycle sensing (no draws),
       c. event machinery: one arrival draw on idle slots; on arrival,
          2 epicenter draws (site index counts as one) plus one
          activation draw per device, in device order,
       d. wake-up rounds and report slots consume no draws.

All floating-point expressions here (distances, centroids, feature
standardization, battery forecasts) are written in the exact operation
order the kernel uses, so identical seeds give identical tallies on
either backend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from wakedep.energy import EnergyModel
from wakedep.mac import (
    DeviceSnapshot,
    EventReportSummary,
    KnnPredictor,
    TimingConstants,
    WusMode,
    benchmark_policy,
    intelligent_policy,
)
from wakedep.rng import RandomStream
from wakedep.scenario import ReplicationTally, Scenario, mode_enum
from wakedep.spatial import grid_placement, load_placement_csv
from wakedep.spatial import Arena


@dataclass
class PackedScenario:
    """Scenario reduced to the primitives a replication loop needs."""

    n: int
    width: float
    height: float
    r_max: float
    hotspot_law: bool
    n_sites: int
    jitter: float
    duty_active: int
    duty_period: int
    random_phase: bool
    wur_count: int
    capacity: int
    harvest_prob: float
    cost_sense: int
    cost_tx: int
    cost_rx: int
    report_cost: int
    idle_cost: float
    intelligent: bool
    group_mode: bool
    group_n: int
    k_req: int
    knn_k: int
    knn_window: int
    p_event: float
    horizon: int
    burn_in: int
    deadline_slots: int
    initial_report_slots: int
    round_slots: int
    n_rounds: int
    preset_positions: list[tuple[float, float]] | None


def pack_scenario(sc: Scenario) -> PackedScenario:
    preset = None
    if sc.placement == "grid":
        arena = Arena(sc.arena_width, sc.arena_height, sc.r_max)
        preset = grid_placement(arena, sc.n_devices).positions
    elif sc.placement == "csv":
        arena = Arena(sc.arena_width, sc.arena_height, sc.r_max)
        preset = load_placement_csv(sc.placement_csv, arena).positions
        if len(preset) != sc.n_devices:
            raise ValueError(
                f"placement file has {len(preset)} devices, scenario expects {sc.n_devices}"
            )
    return PackedScenario(
        n=sc.n_devices,
        width=sc.arena_width,
        height=sc.arena_height,
        r_max=sc.r_max,
        hotspot_law=(sc.epicenter_law == "hotspots"),
        n_sites=sc.hotspot_count,
        jitter=sc.hotspot_jitter,
        duty_active=sc.duty_active_slots,
        duty_period=sc.duty_period_slots,
        random_phase=sc.duty_random_phase,
        wur_count=sc.wur_count,
        capacity=sc.energy.capacity,
        harvest_prob=sc.energy.harvest_prob,
        cost_sense=sc.energy.cost_sense,
        cost_tx=sc.energy.cost_tx,
        cost_rx=sc.energy.cost_wakeup_rx,
        report_cost=sc.energy.report_cost,
        idle_cost=sc.idle_cost_per_slot,
        intelligent=(sc.policy == "intelligent"),
        group_mode=(sc.wus_mode == "group"),
        group_n=sc.group_n,
        k_req=sc.k_req,
        knn_k=sc.knn_k,
        knn_window=sc.knn_window,
        p_event=sc.p_event,
        horizon=sc.horizon_slots,
        burn_in=sc.burn_in_slots,
        deadline_slots=sc.timing.deadline_slots,
        initial_report_slots=sc.timing.initial_report_slots,
        round_slots=sc.timing.wakeup_round_slots,
        n_rounds=sc.timing.rounds_that_fit,
        preset_positions=list(preset) if preset is not None else None,
    )


def run_replication(p: PackedScenario, seed: int) -> ReplicationTally:
    """Simulate one replication and return its raw tallies."""
    stream = RandomStream(seed)
    n = p.n

    # --- replication setup draws (fixed order) ---
    sites_x: list[float] = []
    sites_y: list[float] = []
    if p.hotspot_law:
        for _ in range(p.n_sites):
            sites_x.append(stream.next_double() * p.width)
            sites_y.append(stream.next_double() * p.height)
    if p.preset_positions is None:
        xs = [0.0] * n
        ys = [0.0] * n
        for i in range(n):
            xs[i] = stream.next_double() * p.width
            ys[i] = stream.next_double() * p.height
    else:
        xs = [pos[0] for pos in p.preset_positions]
        ys = [pos[1] for pos in p.preset_positions]
    off = [0] * n
    if p.random_phase:
        for i in range(n):
            off[i] = stream.next_below(p.duty_period)

    battery = [p.capacity] * n
    has_wur = [i < p.wur_count for i in range(n)]
    bs_last_known = [float(p.capacity)] * n
    bs_last_known_slot = [0] * n
    bs_last_activity = [0] * n
    wake_sense_slot = [-1] * n
    spont_tx_slot = [-1] * n

    predictor = KnnPredictor(k=p.knn_k, window=p.knn_window)
    mode = WusMode.GROUP if p.group_mode else WusMode.DEDICATED
    timing = TimingConstants(max_wakeup_rounds=p.n_rounds)
    energy = _energy_view(p)

    # depletion bookkeeping: devices currently unable to afford a report
    depleted_now = sum(1 for b in battery if b < p.report_cost)

    def set_battery(i: int, new: int) -> None:
        nonlocal depleted_now
        was = battery[i] < p.report_cost
        battery[i] = new
        now = new < p.report_cost
        if was != now:
            depleted_now += 1 if now else -1

    # --- event state ---
    evt_active = False
    onset = 0
    evt_dist = [0.0] * n
    reporters: list[int] = []
    reporters_set: set[int] = set()
    targeted: set[int] = set()
    rounds_done = 0
    knn_pending: list[tuple[tuple[float, float, float], int]] = []

    events = successes = reports_sum = 0
    depleted_device_slots = 0
    device_slots = 0

    def record_report(i: int, slot: int) -> None:
        reporters.append(i)
        reporters_set.add(i)
        bs_last_known[i] = float(battery[i])
        bs_last_known_slot[i] = slot
        bs_last_activity[i] = slot

    harvest_p = p.harvest_prob

    for t in range(p.horizon):
        # a. harvesting, one draw per device in id order
        for i in range(n):
            if stream.next_double() < harvest_p:
                if battery[i] < p.capacity:
                    set_battery(i, battery[i] + 1)

        # b. scheduled duty-cycle sensing (skipped on a wake slot: the
        #    wake path pays for that slot's sensing)
        sensed = [False] * n
        for i in range(n):
            if (t + off[i]) % p.duty_period < p.duty_active and wake_sense_slot[i] != t:
                if battery[i] >= p.cost_sense:
                    set_battery(i, battery[i] - p.cost_sense)
                    sensed[i] = True

        # c. event machinery
        if not evt_active:
            if stream.next_double() < p.p_event and t + p.deadline_slots < p.horizon:
                evt_active = True
                onset = t
                if p.hotspot_law:
                    site = stream.next_below(p.n_sites)
                    jx = (stream.next_double() * 2.0 - 1.0) * p.jitter
                    jy = (stream.next_double() * 2.0 - 1.0) * p.jitter
                    ex = min(max(sites_x[site] + jx, 0.0), p.width)
                    ey = min(max(sites_y[site] + jy, 0.0), p.height)
                else:
                    ex = stream.next_double() * p.width
                    ey = stream.next_double() * p.height
                reporters = []
                reporters_set = set()
                targeted = set()
                rounds_done = 0
                knn_pending = []
                for i in range(n):
                    dx = xs[i] - ex
                    dy = ys[i] - ey
                    d = math.sqrt(dx * dx + dy * dy)
                    evt_dist[i] = d
                    u = stream.next_double()
                    if sensed[i] and d <= p.r_max and u < math.exp(-d):
                        spont_tx_slot[i] = t + p.initial_report_slots
        else:
            ph = t - onset

            # spontaneous transmissions land one slot after onset
            if ph == p.initial_report_slots:
                for i in range(n):
                    if spont_tx_slot[i] == t:
                        spont_tx_slot[i] = -1
                        if battery[i] >= p.cost_tx:
                            set_battery(i, battery[i] - p.cost_tx)
                            record_report(i, t)

            # wake-up round issue slots
            if rounds_done < p.n_rounds and reporters:
                r = rounds_done + 1
                if ph == p.initial_report_slots + (r - 1) * p.round_slots + 1:
                    if len(reporters_set) >= p.k_req:
                        rounds_done = p.n_rounds  # enough information, stop waking
                    else:
                        rounds_done = r
                        sum_x = 0.0
                        sum_y = 0.0
                        for i in reporters:
                            sum_x += xs[i]
                            sum_y += ys[i]
                        est_x = sum_x / len(reporters)
                        est_y = sum_y / len(reporters)
                        event = EventReportSummary(est_x, est_y, len(reporters), t)
                        candidates = []
                        for i in range(n):
                            if not has_wur[i] or i in targeted or i in reporters_set:
                                continue
                            asleep = (t + off[i]) % p.duty_period >= p.duty_active
                            if not asleep:
                                continue
                            pb = _predict(
                                bs_last_known[i],
                                t - bs_last_known_slot[i],
                                harvest_p,
                                p.idle_cost,
                                p.capacity,
                            )
                            candidates.append(
                                DeviceSnapshot(
                                    device_id=i,
                                    x=xs[i],
                                    y=ys[i],
                                    asleep=True,
                                    has_wur=True,
                                    predicted_battery=pb,
                                    slots_since_activity=t - bs_last_activity[i],
                                )
                            )
                        if p.intelligent:
                            decision = intelligent_policy(
                                event, candidates, predictor, energy,
                                timing, mode, n, p.group_n,
                            )
                        else:
                            decision = benchmark_policy(
                                event, candidates, timing, mode, n, p.group_n
                            )
                        snap_by_id = {c.device_id: c for c in candidates}
                        for tid in decision.target_ids:
                            # training sample carries the decision-time view
                            snap = snap_by_id[tid]
                            dxq = snap.x - est_x
                            dyq = snap.y - est_y
                            est_d = math.sqrt(dxq * dxq + dyq * dyq)
                            knn_pending.append(
                                (
                                    (est_d, snap.predicted_battery, float(snap.slots_since_activity)),
                                    tid,
                                )
                            )
                            targeted.add(tid)
                            bs_last_activity[tid] = t
                            if battery[tid] >= p.cost_rx:
                                set_battery(tid, battery[tid] - p.cost_rx)
                                wake_sense_slot[tid] = t + 1

            # woken devices sense and transmit one slot after the request
            if wake_active_slot(ph, p):
                for i in range(n):
                    if wake_sense_slot[i] == t:
                        if battery[i] >= p.cost_sense:
                            set_battery(i, battery[i] - p.cost_sense)
                            if evt_dist[i] <= p.r_max and battery[i] >= p.cost_tx:
                                set_battery(i, battery[i] - p.cost_tx)
                                record_report(i, t)

            # event window closes at the deadline
            if ph == p.deadline_slots:
                if onset >= p.burn_in:
                    events += 1
                    if len(reporters_set) >= p.k_req:
                        successes += 1
                    reports_sum += len(reporters)
                for features, tid in knn_pending:
                    predictor.add_sample(features, tid in reporters_set)
                evt_active = False

        # d. depletion accounting at end of slot
        if t >= p.burn_in:
            device_slots += n
            depleted_device_slots += depleted_now

    return ReplicationTally(events, successes, reports_sum, depleted_device_slots, device_slots)


def wake_active_slot(ph: int, p: PackedScenario) -> bool:
    """True when ``ph`` is a woken-device sense/transmit slot."""
    base = ph - p.initial_report_slots
    if base < p.round_slots:
        return False
    if base % p.round_slots != 0:
        return False
    return base // p.round_slots <= p.n_rounds


def _predict(last_known: float, elapsed: int, harvest_prob: float, idle_cost: float, cap: int) -> float:
    expected = last_known + elapsed * harvest_prob - elapsed * idle_cost
    if expected < 0.0:
        return 0.0
    capf = float(cap)
    return capf if expected > capf else expected


def _energy_view(p: PackedScenario) -> EnergyModel:
    return EnergyModel(
        capacity=p.capacity,
        harvest_prob=p.harvest_prob,
        cost_sense=p.cost_sense,
        cost_tx=p.cost_tx,
        cost_wakeup_rx=p.cost_rx,
    )
