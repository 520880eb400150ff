"""Exact computation of hyperinvariant subspaces of nilpotent operators."""

from .exactalg import GF, QQ, Field, Matrix, Subspace, kernel_image, rref
from .hyperlattice import (
    RSequence,
    enumerate_rsequences,
    identify,
    join,
    meet,
    subspace_ii,
    subspace_iii,
    validate,
)
from .nilpotent import (
    GeneratorSet,
    NilpotentOperator,
    SegreType,
    canonical_matrix,
    exponent,
    height,
    jordan_generators,
    segre_from_weyr,
    ulm_multiplicity,
)

__all__ = [
    "GF", "QQ", "Field", "Matrix", "Subspace", "kernel_image", "rref",
    "RSequence", "enumerate_rsequences", "identify", "join", "meet", "subspace_ii", "subspace_iii", "validate",
    "GeneratorSet", "NilpotentOperator", "SegreType", "canonical_matrix", "exponent", "height",
    "jordan_generators", "segre_from_weyr", "ulm_multiplicity",
]
