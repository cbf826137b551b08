"""Analytic dependability engine: failure models, block diagrams, fault
trees, Markov availability, and redundant-path delivery."""

from wakedep.dependability.failure import (
    AvailabilityRecord,
    FailureModel,
    HazardSingularityError,
    hazard_at,
    reliability_at,
    steady_state_availability,
)
from wakedep.dependability.markov import (
    ConvergenceError,
    MarkovAvailabilityModel,
    MarkovModelError,
    MarkovState,
    ReducibleChainError,
    markov_steady_state,
    markov_transient,
)
from wakedep.dependability.paths import (
    PathModel,
    PathSetError,
    RedundantPathSet,
    frer_delivery,
)
from wakedep.dependability.structure import (
    And,
    BasicEvent,
    KofN,
    Leaf,
    Or,
    Parallel,
    Series,
    StructureError,
    expand_kofn,
    fta_top_event,
    rbd_reliability,
    rbd_to_fault_tree,
)

__all__ = [
    "AvailabilityRecord",
    "FailureModel",
    "HazardSingularityError",
    "hazard_at",
    "reliability_at",
    "steady_state_availability",
    "ConvergenceError",
    "MarkovAvailabilityModel",
    "MarkovModelError",
    "MarkovState",
    "ReducibleChainError",
    "markov_steady_state",
    "markov_transient",
    "PathModel",
    "PathSetError",
    "RedundantPathSet",
    "frer_delivery",
    "And",
    "BasicEvent",
    "KofN",
    "Leaf",
    "Or",
    "Parallel",
    "Series",
    "StructureError",
    "expand_kofn",
    "fta_top_event",
    "rbd_reliability",
    "rbd_to_fault_tree",
]
