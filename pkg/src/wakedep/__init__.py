"""wakedep: slotted Monte Carlo simulator for wake-up-radio event
reporting in industrial sensor networks, plus an analytic dependability
core (failure models, block diagrams, fault trees, Markov availability,
redundant-path delivery)."""

__version__ = "0.1.0"
