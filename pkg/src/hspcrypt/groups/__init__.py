"""Finite abelian group arithmetic, subgroups, characters and normal forms."""

from .abelian import (
    AbelianGroup,
    Character,
    GroupElement,
    Subgroup,
    annihilator,
    canonical_coset_rep,
    character_kernel,
    characters_of,
    compute_structure,
    contains,
    discrete_log,
    random_element,
    subgroup_from_generators,
    subgroup_from_random,
    sylow_subgroup,
)
from .generic import GenericGroup, GenericGroupDescriptor, build_generic_group
from .intmat import hermite_basis, integer_kernel, invariant_factors, smith_normal_form

__all__ = [
    "AbelianGroup",
    "Character",
    "GenericGroup",
    "GenericGroupDescriptor",
    "GroupElement",
    "Subgroup",
    "annihilator",
    "build_generic_group",
    "canonical_coset_rep",
    "character_kernel",
    "characters_of",
    "compute_structure",
    "contains",
    "discrete_log",
    "hermite_basis",
    "integer_kernel",
    "invariant_factors",
    "random_element",
    "smith_normal_form",
    "subgroup_from_generators",
    "subgroup_from_random",
    "sylow_subgroup",
]
