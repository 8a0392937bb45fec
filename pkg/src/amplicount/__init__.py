"""Amplitude amplification, quantum search and approximate counting on dense state vectors."""

from .amplification import (
    AmplificationSchedule,
    PreparedAlgorithm,
    SearchResult,
    amplify,
    apply_q,
    closed_form,
    derandomize_augmented,
    derandomize_phase,
    grover_search,
    optimal_iterations,
    search_known,
    search_unknown,
    two_level_rotation,
    walsh_hadamard,
)
from .counting import (
    CountEstimate,
    analyze_count,
    count,
    count_exact,
    count_majority,
    count_rel,
    estimate_amplitude,
)
from .errors import AmplicountError, BoundaryError, CapacityError, ContractError
from .kernels import BACKEND
from .oracles import Oracle, make_random_oracle, make_subset_oracle
from .statevec import StateVector, uniform

__all__ = [
    "AmplicountError",
    "AmplificationSchedule",
    "BACKEND",
    "BoundaryError",
    "CapacityError",
    "ContractError",
    "CountEstimate",
    "Oracle",
    "PreparedAlgorithm",
    "SearchResult",
    "StateVector",
    "amplify",
    "analyze_count",
    "apply_q",
    "closed_form",
    "count",
    "count_exact",
    "count_majority",
    "count_rel",
    "derandomize_augmented",
    "derandomize_phase",
    "estimate_amplitude",
    "grover_search",
    "make_random_oracle",
    "make_subset_oracle",
    "optimal_iterations",
    "search_known",
    "search_unknown",
    "two_level_rotation",
    "uniform",
    "walsh_hadamard",
]
