"""Independent brute-force oracles used by unit and acceptance tests.

Everything here deliberately avoids the library's evaluation paths:
structures are evaluated by exhaustive enumeration over component
states, hazards are integrated by quadrature, and delivery is checked
by direct Monte Carlo.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from wakedep.dependability.structure import KofN, Leaf, Parallel, Series


def structure_success(node, state: dict[str, bool]) -> bool:
    """Evaluate the structure function for one component on/off state."""
    if isinstance(node, Leaf):
        return state[node.component]
    results = [structure_success(c, state) for c in node.children]
    if isinstance(node, Series):
        return all(results)
    if isinstance(node, Parallel):
        return any(results)
    if isinstance(node, KofN):
        return sum(results) >= node.k
    raise TypeError(f"unknown node {node!r}")


def enumerate_reliability(node, prob: dict[str, float]) -> float:
    """System reliability by summing over all 2^n component states."""
    ids = sorted(set(_collect_ids(node)))
    total = 0.0
    for bits in itertools.product((True, False), repeat=len(ids)):
        state = dict(zip(ids, bits))
        weight = 1.0
        for cid, up in state.items():
            weight *= prob[cid] if up else 1.0 - prob[cid]
        if weight and structure_success(node, state):
            total += weight
    return total


def _collect_ids(node) -> list[str]:
    if isinstance(node, Leaf):
        return [node.component]
    out = []
    for c in node.children:
        out.extend(_collect_ids(c))
    return out


def random_structure(rng: np.random.Generator, max_components: int = 12, allow_kofn: bool = True):
    """Random structure tree with <= max_components distinct leaves.

    Returns (node, reliability_map).  Leaf ids are unique, so the result
    is series-parallel evaluable without conditioning.
    """
    n = int(rng.integers(1, max_components + 1))
    ids = [f"c{i}" for i in range(n)]
    prob = {cid: float(rng.uniform(0.0, 1.0)) for cid in ids}
    leaves = [Leaf(cid) for cid in ids]
    rng.shuffle(leaves)

    def build(pool):
        if len(pool) == 1:
            return pool[0]
        cut = int(rng.integers(1, len(pool)))
        left, right = pool[:cut], pool[cut:]
        children = [build(left), build(right)]
        kinds = ["series", "parallel"] + (["kofn"] if allow_kofn else [])
        kind = kinds[int(rng.integers(0, len(kinds)))]
        if kind == "series":
            return Series(children)
        if kind == "parallel":
            return Parallel(children)
        flat = children
        if len(flat) == 1:
            return flat[0]
        k = int(rng.integers(1, len(flat) + 1))
        return KofN(k, flat)

    return build(leaves), prob


def integrate_hazard(model, t: float, panels: int = 200_000) -> float:
    """Cumulative hazard on [0, t] by composite Simpson quadrature."""
    if t == 0.0:
        return 0.0
    k, eta = model.shape, model.scale

    def lam(u: float) -> float:
        if u == 0.0:
            return 0.0 if k > 1.0 else (1.0 / eta if k == 1.0 else math.inf)
        return (k / eta) * (u / eta) ** (k - 1.0)

    xs = np.linspace(0.0, t, 2 * panels + 1)
    ys = np.array([lam(float(x)) for x in xs])
    h = t / (2 * panels)
    return float(h / 3.0 * (ys[0] + ys[-1] + 4.0 * ys[1:-1:2].sum() + 2.0 * ys[2:-1:2].sum()))


def monte_carlo_delivery(path_set, deadline: int, draws: int, seed: int) -> tuple[float, float]:
    """Empirical in-deadline delivery frequency and its standard error."""
    rng = np.random.default_rng(seed)
    hit = np.zeros(draws, dtype=bool)
    for path in path_set.paths:
        delivered = rng.random(draws) < path.delivery_prob
        slots = np.array([s for s, _ in path.delay_pmf])
        weights = np.array([w for _, w in path.delay_pmf])
        weights = weights / weights.sum()
        delays = rng.choice(slots, size=draws, p=weights)
        hit |= delivered & (delays <= deadline)
    p = float(hit.mean())
    se = math.sqrt(max(p * (1.0 - p), 1e-12) / draws)
    return p, se
