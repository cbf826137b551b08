"""Line-oriented scenario configuration: dotted keys, fail-closed.

The format is ``section.key = value`` with ``#`` comments, chosen so
experiment records stay diffable and need no parser dependency.  Every
key is optional and documented in :func:`dump_defaults`; unknown keys
are rejected, and values are validated before any simulation starts.
"""

from __future__ import annotations

from dataclasses import replace

from wakedep.energy import EnergyModel
from wakedep.mac import TimingConstants
from wakedep.scenario import (
    BACKENDS,
    EPICENTER_LAWS,
    PLACEMENTS,
    POLICIES,
    WUS_MODES,
    Scenario,
)

DEFAULT_SWEEP_N = (25, 50, 100, 200)


class ConfigError(ValueError):
    """Configuration syntax or constraint violation."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


def _parse_bool(raw: str) -> bool:
    low = raw.lower()
    if low in ("true", "yes", "on", "1"):
        return True
    if low in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"expected a boolean, got {raw!r}")


def _parse_int(raw: str) -> int:
    return int(raw.replace("_", ""), 0)


def _parse_float(raw: str) -> float:
    return float(raw)


def _parse_choice(options):
    def inner(raw: str) -> str:
        if raw not in options:
            raise ValueError(f"expected one of {', '.join(options)}; got {raw!r}")
        return raw

    return inner


def _parse_optional_int(raw: str) -> int | None:
    if raw.lower() in ("auto", "none"):
        return None
    return _parse_int(raw)


def _parse_int_list(raw: str) -> tuple[int, ...]:
    parts = [p.strip() for p in raw.split(",") if p.strip()]
    if not parts:
        raise ValueError("expected a comma-separated list of integers")
    return tuple(_parse_int(p) for p in parts)


def _positive(kind):
    def inner(raw: str):
        v = kind(raw)
        if not v > 0:
            raise ValueError(f"must be positive, got {raw}")
        return v

    return inner


def _nonnegative(kind):
    def inner(raw: str):
        v = kind(raw)
        if v < 0:
            raise ValueError(f"must be >= 0, got {raw}")
        return v

    return inner


def _probability(raw: str) -> float:
    v = float(raw)
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"must lie in [0, 1], got {raw}")
    return v


# key -> (scenario field, value parser).  Fields starting with "energy."
# or "timing." address the nested models; non-scenario keys are handled
# separately below.
_KEYS = {
    "arena.width": ("arena_width", _positive(_parse_float)),
    "arena.height": ("arena_height", _positive(_parse_float)),
    "arena.r_max": ("r_max", _positive(_parse_float)),
    "devices.count": ("n_devices", _positive(_parse_int)),
    "devices.duty_active_slots": ("duty_active_slots", _nonnegative(_parse_int)),
    "devices.duty_period_slots": ("duty_period_slots", _positive(_parse_int)),
    "devices.duty_random_phase": ("duty_random_phase", _parse_bool),
    "devices.wur_fraction": ("wur_fraction", _probability),
    "devices.placement": ("placement", _parse_choice(PLACEMENTS)),
    "devices.placement_csv": ("placement_csv", str),
    "energy.capacity": ("energy.capacity", _positive(_parse_int)),
    "energy.harvest_prob": ("energy.harvest_prob", _probability),
    "energy.cost_sense": ("energy.cost_sense", _nonnegative(_parse_int)),
    "energy.cost_tx": ("energy.cost_tx", _nonnegative(_parse_int)),
    "energy.cost_wakeup_rx": ("energy.cost_wakeup_rx", _nonnegative(_parse_int)),
    "timing.slot_ms": ("timing.slot_ms", _positive(_parse_float)),
    "timing.deadline_ms": ("timing.deadline_ms", _positive(_parse_float)),
    "timing.initial_report_slots": ("timing.initial_report_slots", _positive(_parse_int)),
    "timing.wakeup_round_slots": ("timing.wakeup_round_slots", _positive(_parse_int)),
    "timing.max_wakeup_rounds": ("timing.max_wakeup_rounds", _nonnegative(_parse_int)),
    "policy.kind": ("policy", _parse_choice(POLICIES)),
    "policy.k_req": ("k_req", _positive(_parse_int)),
    "policy.knn_k": ("knn_k", _positive(_parse_int)),
    "policy.knn_window": ("knn_window", _positive(_parse_int)),
    "wus.mode": ("wus_mode", _parse_choice(WUS_MODES)),
    "wus.group_size": ("group_size_override", _parse_optional_int),
    "events.p_event": ("p_event", _probability),
    "events.epicenter_law": ("epicenter_law", _parse_choice(EPICENTER_LAWS)),
    "events.hotspot_count": ("hotspot_count", _positive(_parse_int)),
    "events.hotspot_jitter": ("hotspot_jitter", _nonnegative(_parse_float)),
    "sim.horizon_slots": ("horizon_slots", _positive(_parse_int)),
    "sim.burn_in_slots": ("burn_in_slots", _nonnegative(_parse_int)),
    "sim.seed": ("seed", _nonnegative(_parse_int)),
    "sim.replications": ("replications", _positive(_parse_int)),
    "sim.replication_offset": ("replication_offset", _nonnegative(_parse_int)),
    "sim.backend": ("backend", _parse_choice(BACKENDS)),
    "sim.threads": ("threads", _nonnegative(_parse_int)),
}

_EXTRA_KEYS = {
    "sweep.n_values": _parse_int_list,
    "output.dir": str,
}


class ConfigDocument:
    """Parsed configuration: a scenario plus sweep and output settings."""

    def __init__(self, scenario: Scenario, sweep_n_values=DEFAULT_SWEEP_N, output_dir: str = ""):
        self.scenario = scenario
        self.sweep_n_values = tuple(sweep_n_values)
        self.output_dir = output_dir


def parse_document(text: str) -> ConfigDocument:
    """Parse a full configuration document, defaults filled in."""
    values: dict[str, object] = {}
    extra: dict[str, object] = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", lineno)
        key, _, raw_value = line.partition("=")
        key = key.strip()
        raw_value = raw_value.strip()
        if key in _EXTRA_KEYS:
            parser = _EXTRA_KEYS[key]
        elif key in _KEYS:
            parser = _KEYS[key][1]
        else:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in values or key in extra:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        try:
            parsed = parser(raw_value)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"{key}: {exc}", lineno) from None
        if key in _EXTRA_KEYS:
            extra[key] = parsed
        else:
            values[key] = parsed

    fields: dict[str, object] = {}
    energy_kwargs: dict[str, object] = {}
    timing_kwargs: dict[str, object] = {}
    for key, parsed in values.items():
        field = _KEYS[key][0]
        if field.startswith("energy."):
            energy_kwargs[field.split(".", 1)[1]] = parsed
        elif field.startswith("timing."):
            timing_kwargs[field.split(".", 1)[1]] = parsed
        else:
            fields[field] = parsed
    try:
        if energy_kwargs:
            fields["energy"] = EnergyModel(**{**_as_kwargs(EnergyModel()), **energy_kwargs})
        if timing_kwargs:
            fields["timing"] = TimingConstants(**{**_as_kwargs(TimingConstants()), **timing_kwargs})
        scenario = Scenario(**fields)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return ConfigDocument(
        scenario,
        sweep_n_values=extra.get("sweep.n_values", DEFAULT_SWEEP_N),
        output_dir=extra.get("output.dir", ""),
    )


def _as_kwargs(obj) -> dict:
    return {name: getattr(obj, name) for name in obj.__dataclass_fields__}


def parse_config(text: str) -> Scenario:
    """Parse a configuration document into a validated Scenario."""
    return parse_document(text).scenario


def apply_overrides(doc: ConfigDocument, seed=None, replications=None) -> ConfigDocument:
    scenario = doc.scenario
    if seed is not None:
        scenario = replace(scenario, seed=seed)
    if replications is not None:
        scenario = replace(scenario, replications=replications)
    return ConfigDocument(scenario, doc.sweep_n_values, doc.output_dir)


def dump_defaults() -> str:
    """Canonical default configuration; parsing it reproduces Scenario()."""
    sc = Scenario()
    en = sc.energy
    ti = sc.timing
    lines = [
        "# wakedep scenario configuration (defaults)",
        "# arena geometry, dimensionless units",
        f"arena.width = {sc.arena_width!r}",
        f"arena.height = {sc.arena_height!r}",
        f"arena.r_max = {sc.r_max!r}",
        "",
        "# device population and duty cycling",
        f"devices.count = {sc.n_devices}",
        f"devices.duty_active_slots = {sc.duty_active_slots}",
        f"devices.duty_period_slots = {sc.duty_period_slots}",
        f"devices.duty_random_phase = {str(sc.duty_random_phase).lower()}",
        f"devices.wur_fraction = {sc.wur_fraction!r}",
        f"devices.placement = {sc.placement}",
        "# devices.placement_csv = layout.csv   # used when placement = csv",
        "",
        "# energy quanta per device",
        f"energy.capacity = {en.capacity}",
        f"energy.harvest_prob = {en.harvest_prob!r}",
        f"energy.cost_sense = {en.cost_sense}",
        f"energy.cost_tx = {en.cost_tx}",
        f"energy.cost_wakeup_rx = {en.cost_wakeup_rx}",
        "",
        "# slot timing (ms)",
        f"timing.slot_ms = {ti.slot_ms!r}",
        f"timing.deadline_ms = {ti.deadline_ms!r}",
        f"timing.initial_report_slots = {ti.initial_report_slots}",
        f"timing.wakeup_round_slots = {ti.wakeup_round_slots}",
        f"timing.max_wakeup_rounds = {ti.max_wakeup_rounds}",
        "",
        "# reporting policy",
        f"policy.kind = {sc.policy}",
        f"policy.k_req = {sc.k_req}",
        f"policy.knn_k = {sc.knn_k}",
        f"policy.knn_window = {sc.knn_window}",
        f"wus.mode = {sc.wus_mode}",
        "wus.group_size = auto   # auto = ceil(sqrt(N))",
        "",
        "# event process",
        f"events.p_event = {sc.p_event!r}",
        f"events.epicenter_law = {sc.epicenter_law}",
        f"events.hotspot_count = {sc.hotspot_count}",
        f"events.hotspot_jitter = {sc.hotspot_jitter!r}",
        "",
        "# execution",
        f"sim.horizon_slots = {sc.horizon_slots}",
        f"sim.burn_in_slots = {sc.burn_in_slots}",
        f"sim.seed = {sc.seed}",
        f"sim.replications = {sc.replications}",
        f"sim.replication_offset = {sc.replication_offset}",
        f"sim.backend = {sc.backend}",
        f"sim.threads = {sc.threads}",
        "",
        "# sweep grid",
        f"sweep.n_values = {', '.join(str(v) for v in DEFAULT_SWEEP_N)}",
    ]
    return "\n".join(lines) + "\n"
