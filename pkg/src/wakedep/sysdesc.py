"""Declarative system-description files for dependability analytics.

A file holds one or more model stanzas:

    model rbd POWER
      component psu_a = 0.95
      component psu_b = weibull shape=1.5 scale=40.0
      structure = parallel(psu_a, psu_b)
      times = 10.0, 20.0
    end

    model fta TOP
      event sensor = 0.01
      top = or(sensor, and(0.2, 0.5))
    end

    model markov LINK
      state up operational
      state down failed
      rate up down = 0.1
      rate down up = 0.9
      initial up = 1.0
      times = 1.0
    end

    model frer STREAM
      path p = 0.9 delays 1:0.7 2:0.3
      path p = 0.8 delays 1:1.0
      deadline = 2
    end

``analyze`` evaluates every stanza and prints one metric per CSV row:
RBD reliability (at each requested time when lifetime components are
declared), fault-tree top-event probability, Markov steady-state and
transient availability, and redundant-path delivery probability.
Numeric literals inside fault-tree expressions declare anonymous,
independent basic events in place.
"""

from __future__ import annotations

import re

from wakedep.dependability import (
    And,
    BasicEvent,
    FailureModel,
    KofN,
    Leaf,
    MarkovAvailabilityModel,
    MarkovState,
    Or,
    Parallel,
    PathModel,
    RedundantPathSet,
    Series,
    frer_delivery,
    fta_top_event,
    markov_steady_state,
    markov_transient,
    rbd_reliability,
    reliability_at,
)


class SysDescError(ValueError):
    """Schema violation, reported with model id and line number."""

    def __init__(self, message: str, line: int | None = None, model: str | None = None):
        self.line = line
        self.model = model
        where = []
        if model:
            where.append(f"model {model}")
        if line is not None:
            where.append(f"line {line}")
        prefix = f"{': '.join(where)}: " if where else ""
        super().__init__(prefix + message)


_TOKEN_RE = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*|[0-9.eE+-]+|[(),])")


def _tokenize(text: str, line: int, model: str) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise SysDescError(f"cannot parse expression near {text[pos:]!r}", line, model)
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


class _ExprParser:
    def __init__(self, tokens: list[str], line: int, model: str):
        self.tokens = tokens
        self.pos = 0
        self.line = line
        self.model = model

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None:
            raise SysDescError("unexpected end of expression", self.line, self.model)
        if expected is not None and tok != expected:
            raise SysDescError(f"expected {expected!r}, got {tok!r}", self.line, self.model)
        self.pos += 1
        return tok

    def done(self) -> bool:
        return self.pos >= len(self.tokens)

    def fail(self, message: str):
        raise SysDescError(message, self.line, self.model)


def _parse_structure(p: _ExprParser):
    tok = p.take()
    if p.peek() == "(":
        kind = tok.lower()
        p.take("(")
        if kind == "kofn":
            k_tok = p.take()
            try:
                k = int(k_tok)
            except ValueError:
                p.fail(f"kofn needs an integer k, got {k_tok!r}")
            p.take(",")
        children = [_parse_structure(p)]
        while p.peek() == ",":
            p.take(",")
            children.append(_parse_structure(p))
        p.take(")")
        if kind == "series":
            return Series(children)
        if kind == "parallel":
            return Parallel(children)
        if kind == "kofn":
            return KofN(k, children)
        p.fail(f"unknown structure type {tok!r}")
    return Leaf(tok)


def _parse_gate(p: _ExprParser, events: dict[str, float], counter: list[int]):
    tok = p.take()
    if p.peek() == "(":
        kind = tok.lower()
        p.take("(")
        children = [_parse_gate(p, events, counter)]
        while p.peek() == ",":
            p.take(",")
            children.append(_parse_gate(p, events, counter))
        p.take(")")
        if kind == "and":
            return And(children)
        if kind == "or":
            return Or(children)
        p.fail(f"unknown gate type {tok!r}")
    if tok in events:
        return BasicEvent(tok, events[tok])
    try:
        prob = float(tok)
    except ValueError:
        p.fail(f"unknown event {tok!r}")
    counter[0] += 1
    return BasicEvent(f"_lit{counter[0]}", prob)


def _parse_times(raw: str, line: int, model: str) -> list[float]:
    try:
        return [float(x) for x in raw.split(",") if x.strip()]
    except ValueError as exc:
        raise SysDescError(f"bad time list: {exc}", line, model) from None


class _Stanza:
    def __init__(self, kind: str, model_id: str, line: int):
        self.kind = kind
        self.model_id = model_id
        self.line = line
        self.entries: list[tuple[int, str]] = []


def _split_stanzas(text: str) -> list[_Stanza]:
    stanzas: list[_Stanza] = []
    current: _Stanza | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("model "):
            if current is not None:
                raise SysDescError("missing 'end' before new model", lineno, current.model_id)
            parts = line.split()
            if len(parts) != 3:
                raise SysDescError("expected 'model <kind> <id>'", lineno)
            kind = parts[1].lower()
            if kind not in ("rbd", "fta", "markov", "frer"):
                raise SysDescError(f"unknown model kind {parts[1]!r}", lineno)
            current = _Stanza(kind, parts[2], lineno)
        elif line == "end":
            if current is None:
                raise SysDescError("'end' without an open model", lineno)
            stanzas.append(current)
            current = None
        else:
            if current is None:
                raise SysDescError(f"statement outside a model stanza: {line!r}", lineno)
            current.entries.append((lineno, line))
    if current is not None:
        raise SysDescError("unterminated model stanza", current.line, current.model_id)
    if not stanzas:
        raise SysDescError("no models declared")
    return stanzas


def _eval_rbd(st: _Stanza) -> list[tuple[str, str, float]]:
    fixed: dict[str, float] = {}
    lifetimes: dict[str, FailureModel] = {}
    structure = None
    times: list[float] | None = None
    for lineno, line in st.entries:
        if line.startswith("component "):
            body = line[len("component "):]
            name, _, value = body.partition("=")
            name = name.strip()
            value = value.strip()
            if not name or not value:
                raise SysDescError("expected 'component <id> = <value>'", lineno, st.model_id)
            if value.startswith("weibull"):
                m = re.fullmatch(
                    r"weibull\s+shape\s*=\s*(\S+)\s+scale\s*=\s*(\S+)", value
                )
                if not m:
                    raise SysDescError(
                        "expected 'weibull shape=<k> scale=<eta>'", lineno, st.model_id
                    )
                try:
                    lifetimes[name] = FailureModel(float(m.group(1)), float(m.group(2)))
                except ValueError as exc:
                    raise SysDescError(str(exc), lineno, st.model_id) from None
            else:
                try:
                    fixed[name] = float(value)
                except ValueError:
                    raise SysDescError(f"bad probability {value!r}", lineno, st.model_id) from None
        elif line.startswith("structure"):
            _, _, expr = line.partition("=")
            p = _ExprParser(_tokenize(expr.strip(), lineno, st.model_id), lineno, st.model_id)
            structure = _parse_structure(p)
            if not p.done():
                p.fail(f"trailing tokens after expression: {p.peek()!r}")
        elif line.startswith("times"):
            _, _, raw = line.partition("=")
            times = _parse_times(raw, lineno, st.model_id)
        else:
            raise SysDescError(f"unknown statement {line!r}", lineno, st.model_id)
    if structure is None:
        raise SysDescError("rbd model needs a structure", st.line, st.model_id)
    if lifetimes and times is None:
        raise SysDescError(
            "lifetime components need a 'times' list", st.line, st.model_id
        )

    def reliability_map(t: float | None) -> dict[str, float]:
        out = dict(fixed)
        for name, model in lifetimes.items():
            out[name] = reliability_at(model, t)
        return out

    try:
        if times is None:
            return [(st.model_id, "reliability", rbd_reliability(structure, fixed))]
        rows = []
        for t in times:
            value = rbd_reliability(structure, reliability_map(t))
            rows.append((st.model_id, f"reliability@t={t!r}", value))
        return rows
    except ValueError as exc:
        raise SysDescError(str(exc), st.line, st.model_id) from None


def _eval_fta(st: _Stanza) -> list[tuple[str, str, float]]:
    events: dict[str, float] = {}
    top = None
    counter = [0]
    for lineno, line in st.entries:
        if line.startswith("event "):
            body = line[len("event "):]
            name, _, value = body.partition("=")
            try:
                events[name.strip()] = float(value.strip())
            except ValueError:
                raise SysDescError(f"bad probability {value.strip()!r}", lineno, st.model_id) from None
        elif line.startswith("top"):
            _, _, expr = line.partition("=")
            p = _ExprParser(_tokenize(expr.strip(), lineno, st.model_id), lineno, st.model_id)
            try:
                top = _parse_gate(p, events, counter)
            except ValueError as exc:
                if isinstance(exc, SysDescError):
                    raise
                raise SysDescError(str(exc), lineno, st.model_id) from None
            if not p.done():
                p.fail(f"trailing tokens after expression: {p.peek()!r}")
        else:
            raise SysDescError(f"unknown statement {line!r}", lineno, st.model_id)
    if top is None:
        raise SysDescError("fta model needs a top gate", st.line, st.model_id)
    return [(st.model_id, "top_event_probability", fta_top_event(top))]


def _eval_markov(st: _Stanza) -> list[tuple[str, str, float]]:
    labels: list[str] = []
    operational: dict[str, bool] = {}
    rates: list[tuple[str, str, float]] = []
    initial: dict[str, float] = {}
    times: list[float] = []
    for lineno, line in st.entries:
        parts = line.split()
        if parts[0] == "state":
            if len(parts) != 3 or parts[2] not in ("operational", "failed"):
                raise SysDescError(
                    "expected 'state <label> operational|failed'", lineno, st.model_id
                )
            if parts[1] in operational:
                raise SysDescError(f"duplicate state {parts[1]!r}", lineno, st.model_id)
            labels.append(parts[1])
            operational[parts[1]] = parts[2] == "operational"
        elif parts[0] == "rate":
            m = re.fullmatch(r"rate\s+(\S+)\s+(\S+)\s*=\s*(\S+)", line)
            if not m:
                raise SysDescError("expected 'rate <from> <to> = <value>'", lineno, st.model_id)
            try:
                rates.append((m.group(1), m.group(2), float(m.group(3))))
            except ValueError:
                raise SysDescError(f"bad rate {m.group(3)!r}", lineno, st.model_id) from None
        elif parts[0] == "initial":
            m = re.fullmatch(r"initial\s+(\S+)\s*=\s*(\S+)", line)
            if not m:
                raise SysDescError("expected 'initial <label> = <prob>'", lineno, st.model_id)
            try:
                initial[m.group(1)] = float(m.group(2))
            except ValueError:
                raise SysDescError(f"bad probability {m.group(2)!r}", lineno, st.model_id) from None
        elif parts[0] == "times":
            _, _, raw = line.partition("=")
            times = _parse_times(raw, lineno, st.model_id)
        else:
            raise SysDescError(f"unknown statement {line!r}", lineno, st.model_id)
    if not labels:
        raise SysDescError("markov model needs states", st.line, st.model_id)
    index = {label: i for i, label in enumerate(labels)}
    n = len(labels)
    matrix = [[0.0] * n for _ in range(n)]
    for src, dst, value in rates:
        for label in (src, dst):
            if label not in index:
                raise SysDescError(f"unknown state {label!r} in rate", st.line, st.model_id)
        matrix[index[src]][index[dst]] = value
    init_vec = [0.0] * n
    if initial:
        for label, v in initial.items():
            if label not in index:
                raise SysDescError(f"unknown state {label!r} in initial", st.line, st.model_id)
            init_vec[index[label]] = v
    else:
        init_vec[0] = 1.0
    try:
        model = MarkovAvailabilityModel(
            states=[MarkovState(lbl, operational[lbl]) for lbl in labels],
            rates=matrix,
            initial=init_vec,
        )
        _, avail = markov_steady_state(model)
        rows = [(st.model_id, "steady_state_availability", avail)]
        for t in times:
            _, a_t = markov_transient(model, t)
            rows.append((st.model_id, f"availability@t={t!r}", a_t))
        return rows
    except ValueError as exc:
        raise SysDescError(str(exc), st.line, st.model_id) from None


def _eval_frer(st: _Stanza) -> list[tuple[str, str, float]]:
    paths: list[PathModel] = []
    deadline: int | None = None
    for lineno, line in st.entries:
        if line.startswith("path "):
            m = re.fullmatch(r"path\s+p\s*=\s*(\S+)\s+delays\s+(.+)", line)
            if not m:
                raise SysDescError(
                    "expected 'path p = <prob> delays <slot>:<w> ...'", lineno, st.model_id
                )
            pmf = {}
            for pair in re.split(r"[\s,]+", m.group(2).strip()):
                if not pair:
                    continue
                slot, _, weight = pair.partition(":")
                try:
                    pmf[int(slot)] = float(weight)
                except ValueError:
                    raise SysDescError(f"bad delay entry {pair!r}", lineno, st.model_id) from None
            try:
                paths.append(PathModel(float(m.group(1)), pmf))
            except ValueError as exc:
                raise SysDescError(str(exc), lineno, st.model_id) from None
        elif line.startswith("deadline"):
            _, _, raw = line.partition("=")
            try:
                deadline = int(raw.strip())
            except ValueError:
                raise SysDescError(f"bad deadline {raw.strip()!r}", lineno, st.model_id) from None
        else:
            raise SysDescError(f"unknown statement {line!r}", lineno, st.model_id)
    if deadline is None:
        raise SysDescError("frer model needs a deadline", st.line, st.model_id)
    try:
        ps = RedundantPathSet(paths)
        return [(st.model_id, "delivery_probability", frer_delivery(ps, deadline))]
    except ValueError as exc:
        raise SysDescError(str(exc), st.line, st.model_id) from None


_EVALUATORS = {
    "rbd": _eval_rbd,
    "fta": _eval_fta,
    "markov": _eval_markov,
    "frer": _eval_frer,
}


def evaluate_text(text: str) -> list[tuple[str, str, float]]:
    """Evaluate every model stanza; returns (model_id, metric, value) rows."""
    rows: list[tuple[str, str, float]] = []
    for stanza in _split_stanzas(text):
        rows.extend(_EVALUATORS[stanza.kind](stanza))
    return rows
