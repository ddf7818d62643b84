"""Weighted normal phylogenetic networks and their distance matrices."""

from .distances import (
    DistanceMatrix,
    MinDistanceMatrix,
    OutgroupMaxVector,
    enumerate_up_down_paths,
    min_distance_matrix,
    multiset_distances,
    outgroup_max_vector,
)
from .equivalence import CanonicalForm, are_equivalent, canonical_code, canonical_form, canonical_weights
from .errors import InfeasibleSpec, NetworkError, NormnetError, NotRealizable, ParseError, ValidationError
from .generator import GenSpec, WeightingClass, generate, generate_ladder
from .io import parse_matrix, parse_network, write_matrix, write_network
from .network import Network, is_equidistant, is_normal, is_reticulation_pair, is_tree_child, validate
from .reconstruct import equidistant_normal, reticulation_pair_normal

__all__ = [
    "CanonicalForm", "DistanceMatrix", "GenSpec", "InfeasibleSpec", "MinDistanceMatrix", "Network",
    "NetworkError", "NormnetError", "NotRealizable", "OutgroupMaxVector", "ParseError", "ValidationError",
    "WeightingClass", "are_equivalent", "canonical_code", "canonical_form", "canonical_weights",
    "enumerate_up_down_paths", "equidistant_normal", "generate", "generate_ladder", "is_equidistant",
    "is_normal", "is_reticulation_pair", "is_tree_child", "min_distance_matrix", "multiset_distances",
    "outgroup_max_vector", "parse_matrix", "parse_network", "reticulation_pair_normal", "validate",
    "write_matrix", "write_network",
]
