"""Replication orchestration: backend selection, parallel execution,
deterministic pooling, and the device-count sweep."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from wakedep.engine import reference
from wakedep.rng import derive_seed
from wakedep.scenario import (
    POLICIES,
    WUS_MODES,
    ReplicationTally,
    RunResult,
    Scenario,
    wilson_interval,
)

try:
    from wakedep.engine import _kernel

    HAVE_KERNEL = True
except ImportError:  # pragma: no cover - exercised on pure-Python installs
    _kernel = None
    HAVE_KERNEL = False

_ENV_BACKEND = "WAKEDEP_BACKEND"


class BackendUnavailableError(RuntimeError):
    """The requested backend cannot run in this installation."""


def resolve_backend(name: str = "auto") -> str:
    """Map a backend request to the concrete backend to run.

    ``auto`` prefers the compiled kernel and falls back to pure Python;
    the WAKEDEP_BACKEND environment variable overrides ``auto``.
    """
    if name == "auto":
        env = os.environ.get(_ENV_BACKEND, "").strip().lower()
        if env in ("compiled", "python"):
            name = env
    if name == "auto":
        return "compiled" if HAVE_KERNEL else "python"
    if name == "compiled":
        if not HAVE_KERNEL:
            raise BackendUnavailableError(
                "compiled kernel not built; install with Cython or use sim.backend = python"
            )
        return "compiled"
    if name == "python":
        return "python"
    raise ValueError(f"unknown backend {name!r}")


def _run_one(packed, seed: int, backend: str) -> ReplicationTally:
    if backend == "compiled":
        return ReplicationTally(*_kernel.run_replication(packed, seed))
    return reference.run_replication(packed, seed)


def run(scenario: Scenario) -> RunResult:
    """Execute every replication of ``scenario`` and pool the tallies.

    Replication ``i`` runs on the stream seeded by
    ``derive_seed(seed, replication_offset + i)``, so a run split into
    two offset halves pools to exactly the same counts.
    """
    backend = resolve_backend(scenario.backend)
    packed = reference.pack_scenario(scenario)
    seeds = [
        derive_seed(scenario.seed, scenario.replication_offset + i)
        for i in range(scenario.replications)
    ]
    workers = scenario.threads if scenario.threads > 0 else (os.cpu_count() or 1)
    workers = min(workers, len(seeds))
    if workers <= 1 or backend == "python":
        tallies = [_run_one(packed, s, backend) for s in seeds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_one, packed, s, backend) for s in seeds]
            tallies = [f.result() for f in futures]
    total = tallies[0]
    for t in tallies[1:]:
        total = total + t
    return summarize(total)


def summarize(total: ReplicationTally) -> RunResult:
    if total.events == 0:
        return RunResult(
            detection_probability=math.nan,
            ci95_halfwidth=math.nan,
            ci95_lo=math.nan,
            ci95_hi=math.nan,
            events_observed=0,
            successes=0,
            mean_reports_per_event=math.nan,
            depletion_fraction=(
                total.depleted_device_slots / total.device_slots
                if total.device_slots
                else math.nan
            ),
            no_events=True,
        )
    p = total.successes / total.events
    lo, hi = wilson_interval(total.successes, total.events)
    return RunResult(
        detection_probability=p,
        ci95_halfwidth=(hi - lo) / 2.0,
        ci95_lo=lo,
        ci95_hi=hi,
        events_observed=total.events,
        successes=total.successes,
        mean_reports_per_event=total.reports_sum / total.events,
        depletion_fraction=(
            total.depleted_device_slots / total.device_slots
            if total.device_slots
            else math.nan
        ),
        no_events=False,
    )


@dataclass(frozen=True)
class SweepCell:
    n_devices: int
    policy: str
    wus_mode: str
    result: RunResult


def sweep(base: Scenario, n_values) -> list[SweepCell]:
    """One run per (N, policy, WuS mode): the four curves at each N.

    Cells share replication seeds (they depend only on the master seed
    and the replication index), so policy comparisons are paired.
    """
    n_values = list(n_values)
    if not n_values:
        raise ValueError("sweep needs at least one device count")
    cells = []
    for n in n_values:
        for policy in POLICIES:
            for mode in WUS_MODES:
                result = run(base.with_cell(n, policy, mode))
                cells.append(SweepCell(n, policy, mode, result))
    return cells
