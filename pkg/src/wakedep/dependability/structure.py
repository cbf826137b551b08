"""Reliability block diagrams, fault trees, and the duality between them.

A :class:`StructureModel` node tree maps component reliabilities to system
reliability (series / parallel / k-of-n blocks).  A :class:`FaultTree`
maps basic-event failure probabilities to a top-event probability through
AND/OR gates.  ``rbd_to_fault_tree`` converts between the two views:
series success becomes OR of failures, parallel success becomes AND of
failures.

Component ids that appear in more than one leaf are treated as a single
shared component.  Such structures are not series-parallel reducible, so
they are evaluated exactly by conditioning on the joint state of the
shared components (capped at 20 shared ids; 2^20 conditioning terms).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Union

MAX_SHARED_COMPONENTS = 20


class StructureError(ValueError):
    """Malformed structure, missing component, or unsupported conversion."""


# --------------------------------------------------------------------------
# Reliability block diagram nodes
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Leaf:
    component: str


@dataclass(frozen=True)
class Series:
    children: tuple["StructureNode", ...]

    def __init__(self, children):
        object.__setattr__(self, "children", tuple(children))
        if not self.children:
            raise StructureError("series node needs at least one child")


@dataclass(frozen=True)
class Parallel:
    children: tuple["StructureNode", ...]

    def __init__(self, children):
        object.__setattr__(self, "children", tuple(children))
        if not self.children:
            raise StructureError("parallel node needs at least one child")


@dataclass(frozen=True)
class KofN:
    k: int
    children: tuple["StructureNode", ...]

    def __init__(self, k, children):
        object.__setattr__(self, "k", int(k))
        object.__setattr__(self, "children", tuple(children))
        if not self.children:
            raise StructureError("k-of-n node needs at least one child")
        if not 1 <= self.k <= len(self.children):
            raise StructureError(
                f"k-of-n requires 1 <= k <= {len(self.children)}, got k={self.k}"
            )


StructureNode = Union[Leaf, Series, Parallel, KofN]


# --------------------------------------------------------------------------
# Fault tree gates
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class BasicEvent:
    id: str
    probability: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.probability <= 1.0:
            raise StructureError(
                f"basic event {self.id!r} probability {self.probability} outside [0, 1]"
            )


@dataclass(frozen=True)
class And:
    children: tuple["FaultTree", ...]

    def __init__(self, children):
        object.__setattr__(self, "children", tuple(children))
        if not self.children:
            raise StructureError("and gate needs at least one child")


@dataclass(frozen=True)
class Or:
    children: tuple["FaultTree", ...]

    def __init__(self, children):
        object.__setattr__(self, "children", tuple(children))
        if not self.children:
            raise StructureError("or gate needs at least one child")


FaultTree = Union[BasicEvent, And, Or]


# --------------------------------------------------------------------------
# Evaluation
# --------------------------------------------------------------------------


def leaf_components(node: StructureNode) -> list[str]:
    """Component ids of all leaves in definition order (repeats included)."""
    if isinstance(node, Leaf):
        return [node.component]
    out: list[str] = []
    for child in node.children:
        out.extend(leaf_components(child))
    return out


def _complement_product(probs) -> float:
    """1 - prod(1 - p) computed through log1p for precision at tiny results."""
    acc = 0.0
    for p in probs:
        if p >= 1.0:
            return 1.0
        acc += math.log1p(-p)
    return -math.expm1(acc)


def _check_probability(name: str, p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise StructureError(f"component {name!r} reliability {p} outside [0, 1]")
    return p


def _eval(node: StructureNode, prob: Mapping[str, float], fixed: Mapping[str, float]) -> float:
    if isinstance(node, Leaf):
        if node.component in fixed:
            return fixed[node.component]
        return prob[node.component]
    if isinstance(node, Series):
        out = 1.0
        for child in node.children:
            out *= _eval(child, prob, fixed)
        return out
    if isinstance(node, Parallel):
        return _complement_product(_eval(c, prob, fixed) for c in node.children)
    if isinstance(node, KofN):
        # DP over children: dist[j] = P(exactly j of the children seen so far work).
        # Handles heterogeneous child reliabilities exactly.
        dist = [1.0]
        for child in node.children:
            p = _eval(child, prob, fixed)
            nxt = [0.0] * (len(dist) + 1)
            for j, w in enumerate(dist):
                nxt[j] += w * (1.0 - p)
                nxt[j + 1] += w * p
            dist = nxt
        return math.fsum(dist[node.k :])
    raise StructureError(f"unknown structure node {node!r}")


def rbd_reliability(structure: StructureNode, component_reliability: Mapping[str, float]) -> float:
    """System success probability given independent component reliabilities.

    Series multiplies, parallel complements, k-of-n is evaluated by exact
    dynamic programming.  Shared component ids (same id in several leaves)
    are handled by conditioning on the shared components' states.
    """
    ids = leaf_components(structure)
    seen: dict[str, int] = {}
    for cid in ids:
        seen[cid] = seen.get(cid, 0) + 1
    for cid in seen:
        if cid not in component_reliability:
            raise StructureError(f"no reliability given for component {cid!r}")
        _check_probability(cid, component_reliability[cid])

    shared = sorted(cid for cid, n in seen.items() if n > 1)
    if not shared:
        return min(1.0, max(0.0, _eval(structure, component_reliability, {})))
    if len(shared) > MAX_SHARED_COMPONENTS:
        raise StructureError(
            f"{len(shared)} shared components exceed the exact-enumeration "
            f"cap of {MAX_SHARED_COMPONENTS}"
        )

    total = 0.0
    for states in itertools.product((1.0, 0.0), repeat=len(shared)):
        weight = 1.0
        for cid, up in zip(shared, states):
            p = component_reliability[cid]
            weight *= p if up else (1.0 - p)
        if weight == 0.0:
            continue
        fixed = dict(zip(shared, states))
        total += weight * _eval(structure, component_reliability, fixed)
    return min(1.0, max(0.0, total))


def fta_top_event(tree: FaultTree) -> float:
    """Top-event failure probability assuming independent basic events."""
    if isinstance(tree, BasicEvent):
        return tree.probability
    if isinstance(tree, And):
        out = 1.0
        for child in tree.children:
            out *= fta_top_event(child)
        return out
    if isinstance(tree, Or):
        return _complement_product(fta_top_event(c) for c in tree.children)
    raise StructureError(f"unknown fault tree node {tree!r}")


def rbd_to_fault_tree(
    structure: StructureNode, component_reliability: Mapping[str, float]
) -> FaultTree:
    """Dual fault tree whose top event is system failure.

    Series success maps to OR of component failures, parallel success to
    AND of component failures.  K-of-n nodes must be expanded first (see
    :func:`expand_kofn`), and shared component ids are rejected because
    the fault-tree evaluation assumes independent basic events.
    """
    ids = leaf_components(structure)
    if len(ids) != len(set(ids)):
        raise StructureError(
            "structures with shared component ids have no independent-event "
            "fault tree dual"
        )

    def convert(node: StructureNode) -> FaultTree:
        if isinstance(node, Leaf):
            p = component_reliability[node.component]
            _check_probability(node.component, p)
            return BasicEvent(node.component, 1.0 - p)
        if isinstance(node, Series):
            return Or(convert(c) for c in node.children)
        if isinstance(node, Parallel):
            return And(convert(c) for c in node.children)
        raise StructureError(
            "k-of-n node cannot be mapped directly; expand it to "
            "series/parallel form first"
        )

    for cid in set(ids):
        if cid not in component_reliability:
            raise StructureError(f"no reliability given for component {cid!r}")
    return convert(structure)


def expand_kofn(node: StructureNode, max_terms: int = 4096) -> StructureNode:
    """Rewrite every k-of-n node as a parallel-of-series over k-subsets.

    The rewrite introduces shared leaf ids, so the result is evaluated
    through the exact conditioning path of :func:`rbd_reliability`.
    """
    if isinstance(node, Leaf):
        return node
    if isinstance(node, (Series, Parallel)):
        return type(node)(expand_kofn(c, max_terms) for c in node.children)
    if isinstance(node, KofN):
        children = [expand_kofn(c, max_terms) for c in node.children]
        n_terms = math.comb(len(children), node.k)
        if n_terms > max_terms:
            raise StructureError(
                f"k-of-n expansion needs {n_terms} terms, cap is {max_terms}"
            )
        return Parallel(
            Series(subset) for subset in itertools.combinations(children, node.k)
        )
    raise StructureError(f"unknown structure node {node!r}")
