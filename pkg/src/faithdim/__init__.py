"""faithdim: exact faithful-dimension computations for finite p-groups of
nilpotent Z-Lie algebras over finite fields and finite truncated valuation
rings, cross-validated by a Kirillov-orbit brute-force oracle."""

__version__ = "0.1.0"

from .commutator import build_commutator_data, evaluate
from .engine import (
    DEFAULT_BUDGET,
    FdimResult,
    MuVector,
    check_bounds,
    fdim_field,
    fdim_ring,
    fit_mu,
)
from .exact import (
    IntMatrix,
    SmithDecomposition,
    Subquotient,
    check_ineq,
    min_weight_selection,
    partition_basis,
    semibasis,
    smith_normal_form,
)
from .liecore import LieAlgebraZ, load_algebra, save_algebra, structural_data, validate
from .metabelian import (
    hall_sequences,
    metabelian_algebra,
    metabelian_bracket,
    metabelian_fdim,
    rank1_vector,
    rank1_witness,
)
from .oracle import PGroup, bch_multiply, coadjoint_orbits, fdim_bruteforce
from .pattern import (
    Poset,
    alpha,
    chain_poset,
    extreme_pairs,
    pattern_algebra,
    pattern_fdim,
    poset_from_relations,
)
from .rings import ChainRing, FiniteField, ff_rank, matrix_kernel_size, ring_create

__all__ = [
    "__version__",
    "build_commutator_data", "evaluate",
    "DEFAULT_BUDGET", "FdimResult", "MuVector", "check_bounds",
    "fdim_field", "fdim_ring", "fit_mu",
    "IntMatrix", "SmithDecomposition", "Subquotient", "check_ineq",
    "min_weight_selection", "partition_basis", "semibasis", "smith_normal_form",
    "LieAlgebraZ", "load_algebra", "save_algebra", "structural_data", "validate",
    "hall_sequences", "metabelian_algebra", "metabelian_bracket",
    "metabelian_fdim", "rank1_vector", "rank1_witness",
    "PGroup", "bch_multiply", "coadjoint_orbits", "fdim_bruteforce",
    "Poset", "alpha", "chain_poset", "extreme_pairs", "pattern_algebra",
    "pattern_fdim", "poset_from_relations",
    "ChainRing", "FiniteField", "ff_rank", "matrix_kernel_size", "ring_create",
]
