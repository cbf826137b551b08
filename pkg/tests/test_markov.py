import math

import numpy as np
import pytest

from wakedep.dependability import (
    MarkovAvailabilityModel,
    MarkovModelError,
    MarkovState,
    ReducibleChainError,
    markov_steady_state,
    markov_transient,
)


def two_state(lam: float, mu: float) -> MarkovAvailabilityModel:
    return MarkovAvailabilityModel(
        states=[MarkovState("up", True), MarkovState("down", False)],
        rates=[[0.0, lam], [mu, 0.0]],
        initial=[1.0, 0.0],
    )


def test_two_state_steady_state_closed_form():
    pi, avail = markov_steady_state(two_state(0.1, 0.9))
    assert avail == pytest.approx(0.9, abs=1e-12)
    assert pi.sum() == pytest.approx(1.0, abs=1e-12)


def test_symmetric_two_state():
    _, avail = markov_steady_state(two_state(0.3, 0.3))
    assert avail == pytest.approx(0.5, abs=1e-12)


def test_random_rate_pairs_closed_form():
    rng = np.random.default_rng(5)
    for _ in range(50):
        lam = float(rng.uniform(1e-3, 10.0))
        mu = float(rng.uniform(1e-3, 10.0))
        _, avail = markov_steady_state(two_state(lam, mu))
        assert avail == pytest.approx(mu / (lam + mu), abs=1e-10)


def test_transient_identity_at_zero():
    m = two_state(0.1, 0.9)
    pi, avail = markov_transient(m, 0.0)
    assert np.array_equal(pi, m.initial)
    assert avail == 1.0


def test_transient_closed_form():
    lam, mu = 0.1, 0.9
    m = two_state(lam, mu)
    for t in (0.05, 0.5, 1.0, 3.0, 10.0):
        _, avail = markov_transient(m, t)
        expected = mu / (lam + mu) + lam / (lam + mu) * math.exp(-(lam + mu) * t)
        assert avail == pytest.approx(expected, abs=1e-10)
    _, a1 = markov_transient(m, 1.0)
    assert a1 == pytest.approx(0.9 + 0.1 * math.exp(-1.0), abs=1e-10)


def test_transient_converges_to_steady_state():
    _, trans = markov_transient(two_state(0.1, 0.9), 100.0)
    _, steady = markov_steady_state(two_state(0.1, 0.9))
    assert trans == pytest.approx(steady, abs=1e-6)


def test_random_chain_transient_vs_steady():
    rng = np.random.default_rng(42)
    for _ in range(10):
        n = int(rng.integers(2, 9))
        rates = rng.uniform(0.05, 2.0, size=(n, n))
        np.fill_diagonal(rates, 0.0)
        ops = [bool(rng.integers(0, 2)) for _ in range(n)]
        ops[0], ops[1] = True, False
        init = np.zeros(n)
        init[0] = 1.0
        m = MarkovAvailabilityModel(
            states=[MarkovState(f"s{i}", ops[i]) for i in range(n)],
            rates=rates,
            initial=init,
        )
        pi_t, avail_t = markov_transient(m, 400.0 / rates[rates > 0].min())
        pi_s, avail_s = markov_steady_state(m)
        assert avail_t == pytest.approx(avail_s, abs=1e-6)
        assert np.allclose(pi_t, pi_s, atol=1e-6)
        assert pi_s.sum() == pytest.approx(1.0, abs=1e-12)


def test_reducible_chain_rejected():
    m = MarkovAvailabilityModel(
        states=[MarkovState("up", True), MarkovState("down", False)],
        rates=[[0.0, 0.5], [0.0, 0.0]],  # absorbing failure, no repair
        initial=[1.0, 0.0],
    )
    with pytest.raises(ReducibleChainError):
        markov_steady_state(m)


def test_transient_rejects_negative_time():
    with pytest.raises(ValueError):
        markov_transient(two_state(0.1, 0.9), -1.0)


def test_model_validation():
    states = [MarkovState("up", True), MarkovState("down", False)]
    with pytest.raises(MarkovModelError):
        MarkovAvailabilityModel(states, [[0.0, -1.0], [1.0, 0.0]], [1.0, 0.0])
    with pytest.raises(MarkovModelError):
        MarkovAvailabilityModel(states, [[0.2, 1.0], [1.0, 0.0]], [1.0, 0.0])
    with pytest.raises(MarkovModelError):
        MarkovAvailabilityModel(states, [[0.0, 1.0], [1.0, 0.0]], [0.6, 0.5])
    with pytest.raises(MarkovModelError):
        MarkovAvailabilityModel(
            [MarkovState("a", True), MarkovState("b", True)],
            [[0.0, 1.0], [1.0, 0.0]],
            [1.0, 0.0],
        )


def test_stiff_chain_long_horizon():
    # Large rate spread exercises the step-halving path.
    m = MarkovAvailabilityModel(
        states=[MarkovState("up", True), MarkovState("down", False)],
        rates=[[0.0, 50.0], [200.0, 0.0]],
        initial=[0.0, 1.0],
    )
    _, avail = markov_transient(m, 40.0)
    assert avail == pytest.approx(200.0 / 250.0, abs=1e-8)
