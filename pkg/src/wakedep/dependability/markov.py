"""Finite-state continuous-time Markov availability models.

States are labeled operational or failed; transitions carry nonnegative
rates (1/ms).  Steady state solves the balance equations directly;
transient distributions use uniformization, which gives an explicit
truncation-error bound and behaves well for stiff chains (large rate
spread) because the step is split until the uniformization constant
times the step length is moderate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class MarkovModelError(ValueError):
    """Malformed chain definition."""


class ReducibleChainError(ValueError):
    """The chain is not a single communicating class."""


class ConvergenceError(RuntimeError):
    """The solver could not meet its residual bound."""


@dataclass(frozen=True)
class MarkovState:
    label: str
    operational: bool


class MarkovAvailabilityModel:
    """Labeled CTMC with failure/repair rates and an initial distribution."""

    def __init__(self, states, rates, initial):
        self.states = tuple(states)
        n = len(self.states)
        if n < 2:
            raise MarkovModelError("need at least two states")
        if not any(s.operational for s in self.states):
            raise MarkovModelError("need at least one operational state")
        if not any(not s.operational for s in self.states):
            raise MarkovModelError("need at least one failed state")
        labels = [s.label for s in self.states]
        if len(set(labels)) != n:
            raise MarkovModelError("state labels must be unique")

        rates = np.asarray(rates, dtype=float)
        if rates.shape != (n, n):
            raise MarkovModelError(f"rate matrix must be {n}x{n}, got {rates.shape}")
        if np.any(rates < 0.0) or not np.all(np.isfinite(rates)):
            raise MarkovModelError("rates must be finite and nonnegative")
        if np.any(np.diag(rates) != 0.0):
            raise MarkovModelError("rate matrix diagonal must be zero")
        self.rates = rates

        initial = np.asarray(initial, dtype=float)
        if initial.shape != (n,):
            raise MarkovModelError(f"initial vector must have length {n}")
        if np.any(initial < 0.0):
            raise MarkovModelError("initial probabilities must be >= 0")
        if abs(float(initial.sum()) - 1.0) > 1e-12:
            raise MarkovModelError("initial vector must sum to 1 within 1e-12")
        self.initial = initial

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def generator(self) -> np.ndarray:
        q = self.rates.copy()
        np.fill_diagonal(q, -q.sum(axis=1))
        return q

    def operational_mask(self) -> np.ndarray:
        return np.array([s.operational for s in self.states], dtype=bool)

    def is_irreducible(self) -> bool:
        adj = self.rates > 0.0
        return _strongly_connected(adj) if self.n_states > 1 else True


def _strongly_connected(adj: np.ndarray) -> bool:
    n = adj.shape[0]

    def reachable(matrix: np.ndarray) -> int:
        seen = np.zeros(n, dtype=bool)
        seen[0] = True
        stack = [0]
        while stack:
            i = stack.pop()
            for j in np.nonzero(matrix[i])[0]:
                if not seen[j]:
                    seen[j] = True
                    stack.append(int(j))
        return int(seen.sum())

    return reachable(adj) == n and reachable(adj.T) == n


def markov_steady_state(model: MarkovAvailabilityModel) -> tuple[np.ndarray, float]:
    """Stationary distribution and steady-state availability.

    Solves pi Q = 0 with sum(pi) = 1 and verifies the balance residual
    is below 1e-10.  Requires an irreducible chain.
    """
    if not model.is_irreducible():
        raise ReducibleChainError(
            "chain is reducible; steady state is not unique"
        )
    n = model.n_states
    q = model.generator
    a = q.T.copy()
    a[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    try:
        pi = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - guarded by irreducibility
        raise ConvergenceError(f"balance equations are singular: {exc}") from exc
    pi = np.clip(pi, 0.0, None)
    pi = pi / pi.sum()
    residual = float(np.max(np.abs(pi @ q)))
    scale = max(1.0, float(np.max(model.rates)))
    if residual > 1e-10 * scale:
        raise ConvergenceError(f"balance residual {residual:.3e} exceeds bound")
    availability = float(pi[model.operational_mask()].sum())
    return pi, availability


def markov_transient(
    model: MarkovAvailabilityModel, t: float, tol: float = 1e-11
) -> tuple[np.ndarray, float]:
    """State distribution at time ``t`` (ms) by uniformization.

    The Poisson-weighted series is truncated once the accumulated weight
    reaches ``1 - tol_step``; steps are halved until the uniformization
    constant times the step is <= 500 so the leading Poisson weight stays
    representable.  Total truncation error is below ``tol`` (default well
    under the 1e-10 contract).
    """
    if t < 0.0:
        raise ValueError(f"time must be >= 0, got {t}")
    v = model.initial.copy()
    if t == 0.0:
        return v, float(v[model.operational_mask()].sum())

    q = model.generator
    lam = float(np.max(-np.diag(q)))
    if lam == 0.0:
        return v, float(v[model.operational_mask()].sum())

    n_steps = 1
    while lam * (t / n_steps) > 500.0:
        n_steps *= 2
        if n_steps > 1 << 24:
            raise ConvergenceError("time horizon too large for uniformization")
    dt = t / n_steps
    a = lam * dt
    p = np.eye(model.n_states) + q / lam
    step_tol = tol / n_steps

    for _ in range(n_steps):
        weight = math.exp(-a)
        term = v
        acc = weight * term
        cum = weight
        m = 0
        max_terms = int(a + 12.0 * math.sqrt(a + 1.0) + 60.0)
        while 1.0 - cum > step_tol and m < max_terms:
            m += 1
            term = term @ p
            weight *= a / m
            acc = acc + weight * term
            cum += weight
        if 1.0 - cum > step_tol:
            raise ConvergenceError(
                f"uniformization did not converge within {max_terms} terms"
            )
        v = acc
    availability = float(v[model.operational_mask()].sum())
    return v, availability
