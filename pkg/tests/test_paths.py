import itertools

import numpy as np
import pytest

from wakedep.dependability import PathModel, PathSetError, RedundantPathSet, frer_delivery
from oracles import monte_carlo_delivery


def in_deadline_path(p: float) -> PathModel:
    return PathModel(p, {1: 1.0})


def test_two_paths_parallel_structure():
    ps = RedundantPathSet([in_deadline_path(0.9), in_deadline_path(0.9)])
    assert frer_delivery(ps, 1) == pytest.approx(0.99, abs=1e-15)


def test_three_paths_enumeration():
    ps = RedundantPathSet([in_deadline_path(0.5)] * 3)
    # Enumeration over the 2^3 path outcomes.
    expected = sum(
        0.5**3
        for bits in itertools.product((0, 1), repeat=3)
        if any(bits)
    )
    assert expected == pytest.approx(0.875)
    assert frer_delivery(ps, 1) == pytest.approx(0.875, abs=1e-15)


def test_delay_mass_beyond_deadline():
    ps = RedundantPathSet([PathModel(0.9, {7: 1.0})])
    assert frer_delivery(ps, 5) == 0.0


def test_partial_delay_mass():
    ps = RedundantPathSet([PathModel(0.8, {1: 0.5, 4: 0.25, 9: 0.25})])
    assert frer_delivery(ps, 4) == pytest.approx(0.8 * 0.75, abs=1e-12)


def test_monotone_in_deadline_and_probability():
    rng = np.random.default_rng(11)
    for _ in range(20):
        n = int(rng.integers(1, 5))
        paths = []
        for _ in range(n):
            slots = sorted(set(int(s) for s in rng.integers(0, 10, size=3)))
            w = rng.dirichlet(np.ones(len(slots)))
            paths.append(PathModel(float(rng.uniform(0, 1)), dict(zip(slots, w))))
        ps = RedundantPathSet(paths)
        values = [frer_delivery(ps, d) for d in range(11)]
        assert all(a <= b + 1e-15 for a, b in zip(values, values[1:]))

        bumped = RedundantPathSet(
            [PathModel(min(1.0, p.delivery_prob + 0.1), dict(p.delay_pmf)) for p in paths]
        )
        assert frer_delivery(bumped, 5) >= frer_delivery(ps, 5) - 1e-15


def test_matches_monte_carlo():
    ps = RedundantPathSet(
        [
            PathModel(0.7, {0: 0.2, 2: 0.5, 6: 0.3}),
            PathModel(0.4, {1: 1.0}),
            PathModel(0.95, {3: 0.5, 8: 0.5}),
        ]
    )
    analytic = frer_delivery(ps, 3)
    mc, se = monte_carlo_delivery(ps, 3, draws=200_000, seed=3)
    assert abs(mc - analytic) < 4 * se


def test_validation():
    with pytest.raises(PathSetError):
        RedundantPathSet([])
    with pytest.raises(PathSetError):
        PathModel(1.2, {1: 1.0})
    with pytest.raises(PathSetError):
        PathModel(0.5, {1: 0.6, 2: 0.6})
    with pytest.raises(ValueError):
        frer_delivery(RedundantPathSet([in_deadline_path(0.5)]), -1)
