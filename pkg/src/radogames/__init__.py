"""Maker-Breaker games on solution sets of integer linear systems."""

from radogames.matrices import (
    AssociatedPair,
    MatrixProfile,
    RadoSystem,
    analyze_system,
    associated_pair,
    is_abundant,
    is_irredundant,
    is_strictly_balanced,
    max_density,
    progression_system,
    rank_rational,
    schur_system,
    sidon_system,
)

__all__ = [
    "AssociatedPair",
    "MatrixProfile",
    "RadoSystem",
    "analyze_system",
    "associated_pair",
    "is_abundant",
    "is_irredundant",
    "is_strictly_balanced",
    "max_density",
    "progression_system",
    "rank_rational",
    "schur_system",
    "sidon_system",
]
