from .roots import ConfigurationError, RootSystem, build_root_system, xi_permutation
from .chevalley import (
    ChevalleyBasis,
    StructureConstantError,
    build_chevalley_basis,
    jacobi_defect,
    killing_form,
)
from .principal import (
    HighestWeightVectors,
    PrincipalTriple,
    TodaData,
    highest_weight_vectors,
    principal_triple,
    toda_coefficients,
)
from .reps import UnsupportedFeatureError, defining_representation, invariant_poly_eval

__all__ = [
    "ConfigurationError",
    "RootSystem",
    "build_root_system",
    "xi_permutation",
    "ChevalleyBasis",
    "StructureConstantError",
    "build_chevalley_basis",
    "jacobi_defect",
    "killing_form",
    "HighestWeightVectors",
    "PrincipalTriple",
    "TodaData",
    "highest_weight_vectors",
    "principal_triple",
    "toda_coefficients",
    "UnsupportedFeatureError",
    "defining_representation",
    "invariant_poly_eval",
]
