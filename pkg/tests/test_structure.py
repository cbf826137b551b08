import numpy as np
import pytest

from wakedep.dependability import (
    KofN,
    Leaf,
    Parallel,
    Series,
    StructureError,
    expand_kofn,
    fta_top_event,
    rbd_reliability,
    rbd_to_fault_tree,
)
from oracles import enumerate_reliability, random_structure


def test_series_product_rule():
    s = Series([Leaf("a"), Leaf("b")])
    assert rbd_reliability(s, {"a": 0.9, "b": 0.9}) == pytest.approx(0.81, abs=1e-15)


def test_parallel_complement_rule():
    s = Parallel([Leaf("a"), Leaf("b")])
    assert rbd_reliability(s, {"a": 0.9, "b": 0.9}) == pytest.approx(0.99, abs=1e-15)


def test_kofn_two_of_three():
    s = KofN(2, [Leaf("a"), Leaf("b"), Leaf("c")])
    p = {"a": 0.9, "b": 0.9, "c": 0.9}
    # Frozen from the exhaustive 2^3 enumeration: 3*0.9^2*0.1 + 0.9^3 = 0.972
    assert rbd_reliability(s, p) == pytest.approx(0.972, abs=1e-12)
    assert rbd_reliability(s, p) == pytest.approx(enumerate_reliability(s, p), abs=1e-12)


def test_kofn_heterogeneous_matches_enumeration():
    s = KofN(2, [Leaf("a"), Leaf("b"), Leaf("c"), Leaf("d")])
    p = {"a": 0.95, "b": 0.5, "c": 0.2, "d": 0.7}
    assert rbd_reliability(s, p) == pytest.approx(enumerate_reliability(s, p), abs=1e-12)


def test_random_structures_match_enumeration():
    rng = np.random.default_rng(1234)
    for _ in range(60):
        node, prob = random_structure(rng)
        assert rbd_reliability(node, prob) == pytest.approx(
            enumerate_reliability(node, prob), abs=1e-10
        )


def test_shared_components_bridge():
    # Parallel(Series(a, shared), Series(b, shared)): the shared leaf makes
    # the branches dependent; factoring must handle it exactly.
    s = Parallel([Series([Leaf("a"), Leaf("s")]), Series([Leaf("b"), Leaf("s")])])
    p = {"a": 0.8, "b": 0.7, "s": 0.9}
    assert rbd_reliability(s, p) == pytest.approx(enumerate_reliability(s, p), abs=1e-12)
    # Conditioning on s: 0.9 * (1 - 0.2*0.3) + 0.1 * 0
    assert rbd_reliability(s, p) == pytest.approx(0.9 * (1 - 0.2 * 0.3), abs=1e-12)


def test_shared_component_cap():
    shared = [Leaf(f"s{i}") for i in range(21)]
    s = Parallel([Series(shared), Series(shared)])
    p = {f"s{i}": 0.5 for i in range(21)}
    with pytest.raises(StructureError):
        rbd_reliability(s, p)


def test_monotone_in_component_reliability():
    rng = np.random.default_rng(99)
    for _ in range(20):
        node, prob = random_structure(rng, max_components=8)
        base = rbd_reliability(node, prob)
        for cid in prob:
            bumped = dict(prob)
            bumped[cid] = min(1.0, bumped[cid] + 0.1)
            assert rbd_reliability(node, bumped) >= base - 1e-12


def test_missing_component_and_bad_probability():
    s = Series([Leaf("a"), Leaf("b")])
    with pytest.raises(StructureError):
        rbd_reliability(s, {"a": 0.9})
    with pytest.raises(StructureError):
        rbd_reliability(s, {"a": 0.9, "b": 1.5})


def test_node_validation():
    with pytest.raises(StructureError):
        Series([])
    with pytest.raises(StructureError):
        KofN(4, [Leaf("a"), Leaf("b")])


def test_fta_gates():
    from wakedep.dependability import And, BasicEvent, Or

    assert fta_top_event(Or([BasicEvent("e1", 0.1), BasicEvent("e2", 0.1)])) == pytest.approx(
        0.19, abs=1e-15
    )
    assert fta_top_event(And([BasicEvent("e1", 0.1), BasicEvent("e2", 0.1)])) == pytest.approx(
        0.01, abs=1e-15
    )
    nested = And([Or([BasicEvent("a", 0.1), BasicEvent("b", 0.2)]), BasicEvent("c", 0.5)])
    # Enumeration over basic-event states: (1 - 0.9*0.8) * 0.5 = 0.14
    assert fta_top_event(nested) == pytest.approx(0.14, abs=1e-15)


def test_duality_examples():
    p = {"a": 0.9, "b": 0.9, "c": 0.9}
    series = Series([Leaf("a"), Leaf("b")])
    tree = rbd_to_fault_tree(series, p)
    assert fta_top_event(tree) == pytest.approx(1.0 - 0.81, abs=1e-12)

    par = Parallel([Leaf("a"), Leaf("b")])
    assert fta_top_event(rbd_to_fault_tree(par, p)) == pytest.approx(0.01, abs=1e-12)

    mixed = Series([Parallel([Leaf("a"), Leaf("b")]), Leaf("c")])
    assert fta_top_event(rbd_to_fault_tree(mixed, p)) == pytest.approx(
        1.0 - 0.99 * 0.9, abs=1e-12
    )


def test_duality_random_structures():
    rng = np.random.default_rng(7)
    checked = 0
    while checked < 40:
        node, prob = random_structure(rng, allow_kofn=False)
        tree = rbd_to_fault_tree(node, prob)
        assert fta_top_event(tree) + rbd_reliability(node, prob) == pytest.approx(
            1.0, abs=1e-12
        )
        checked += 1


def test_duality_rejects_kofn_and_shared():
    p = {"a": 0.9, "b": 0.9, "c": 0.9}
    with pytest.raises(StructureError):
        rbd_to_fault_tree(KofN(2, [Leaf("a"), Leaf("b"), Leaf("c")]), p)
    shared = Parallel([Series([Leaf("a"), Leaf("c")]), Series([Leaf("b"), Leaf("c")])])
    with pytest.raises(StructureError):
        rbd_to_fault_tree(shared, p)


def test_expand_kofn_preserves_reliability():
    rng = np.random.default_rng(21)
    for _ in range(15):
        node, prob = random_structure(rng, max_components=7)
        expanded = expand_kofn(node)
        assert rbd_reliability(expanded, prob) == pytest.approx(
            rbd_reliability(node, prob), abs=1e-10
        )
