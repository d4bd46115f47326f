"""Exact combinatorics of finite cube complexes.

Medians and intervals in the sign-vector model, integer weight functions
with their exact identities, continuity certificates over admissible
vertices, reproducible exactness certificates for finite group actions, and
FC verdicts for Coxeter matrices.
"""

from .complex import (
    CubeComplex,
    SignVector,
    complex_from_json,
    complex_to_json,
    distance,
    majority,
    separators,
    validate_complex,
)
from .errors import (
    AmbientDimensionError,
    CapExceeded,
    CubexError,
    DomainError,
    InputError,
)
from .families import (
    FamilySpec,
    IdealPointSpec,
    build_family,
    ideal_points,
    median_closure,
    parse_family,
)
from .measures import ProbMeasure
from .weights import (
    DeficiencySet,
    WeightVector,
    deficiency,
    deficiency_set,
    expected_mass,
    verify_weight_identities,
    weight,
    weight_measure,
    weight_vector,
)

__all__ = [
    "AmbientDimensionError",
    "CapExceeded",
    "CubeComplex",
    "CubexError",
    "DeficiencySet",
    "DomainError",
    "FamilySpec",
    "IdealPointSpec",
    "InputError",
    "ProbMeasure",
    "SignVector",
    "WeightVector",
    "build_family",
    "complex_from_json",
    "complex_to_json",
    "deficiency",
    "deficiency_set",
    "distance",
    "expected_mass",
    "ideal_points",
    "majority",
    "median_closure",
    "parse_family",
    "separators",
    "validate_complex",
    "verify_weight_identities",
    "weight",
    "weight_measure",
    "weight_vector",
]
