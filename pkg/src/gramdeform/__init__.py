"""Gram-matrix tools for ensembles of pure states.

Entropy of an ensemble from its Gram matrix, the three-state phase
invariant, and deformations that move overlaps and entropy together.
"""

from .classical import DiscreteChannel, mutual_information
from .deform import (
    DeformationReport,
    deform_theorem2,
    extract_multiplier,
    hadamard,
    search_deformation,
    spin_flip_pair,
    verify_phenomenon,
)
from .ensemble import (
    Ensemble,
    density_matrix,
    gram_matrix,
    gram_to_ensemble,
    pairwise_overlaps,
    purify,
    recover_unitary,
)
from .entropy import ensemble_entropy, linearized_entropy, shannon_entropy, von_neumann_entropy
from .errors import GramDeformError, InvalidInput, MathError, MethodInapplicable, NotFound
from .numerics import eigh, eigvalsh
from .triples import TripleSpec, construct_triple, triple_phase, xi_max, xi_sweep

__version__ = "0.1.0"

__all__ = [
    "DeformationReport",
    "DiscreteChannel",
    "Ensemble",
    "GramDeformError",
    "InvalidInput",
    "MathError",
    "MethodInapplicable",
    "NotFound",
    "TripleSpec",
    "construct_triple",
    "deform_theorem2",
    "density_matrix",
    "eigh",
    "eigvalsh",
    "ensemble_entropy",
    "extract_multiplier",
    "gram_matrix",
    "gram_to_ensemble",
    "hadamard",
    "linearized_entropy",
    "mutual_information",
    "pairwise_overlaps",
    "purify",
    "recover_unitary",
    "search_deformation",
    "shannon_entropy",
    "spin_flip_pair",
    "triple_phase",
    "verify_phenomenon",
    "von_neumann_entropy",
    "xi_max",
    "xi_sweep",
]
