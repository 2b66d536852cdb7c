"""Exact and simulated probabilities that no k+1 of n uniform sticks form a (k+1)-gon."""

from .errors import ConsistencyError, DomainError
from .exact import ExactProbability, decimal_render, exact_probability, exact_probability_proof_form
from .kfib import (CompanionMatrix, KStepSequence, RVector, companion_matrix, kfib_term,
                   r_vector, r_vector_closed_form, sequence)
from .mc import (EstimateReport, SimulationConfig, StickSample, estimate, no_subset_forms_polygon,
                 sample_exponential_representation, sample_uniform_sorted, window_condition_holds)

__all__ = [
    "CompanionMatrix", "ConsistencyError", "DomainError", "EstimateReport", "ExactProbability",
    "KStepSequence", "RVector", "SimulationConfig", "StickSample", "companion_matrix",
    "decimal_render", "estimate", "exact_probability", "exact_probability_proof_form",
    "kfib_term", "no_subset_forms_polygon", "r_vector", "r_vector_closed_form",
    "sample_exponential_representation", "sample_uniform_sorted", "sequence",
    "window_condition_holds",
]
