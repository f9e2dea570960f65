"""Homological invariants of multi-party stabilizer states over F_p."""

from .ffla import FieldPrime, Subspace, kernel, intersect, rank, rref, solve, sum_spaces
from .symplectic import (
    FAMILIES,
    Graph,
    PartyStructure,
    SymplecticForm,
    family,
    graph_lagrangian,
    is_isotropic,
    is_lagrangian,
    orthogonal_complement,
    random_lagrangian,
)
from .cohomology import (
    InvariantTable,
    cech_complex,
    cohomology_basis,
    invariant_table,
    local_invariants,
    local_invariants_rel,
    sections,
)
from .duality import Orientation, check_perfect, middle_symplectic, pair_classes, pairing_matrix
from .structure import (
    coarsen,
    discard,
    external_sum,
    find_ghz_witness,
    ghz_count,
    ghz_extraction,
    internal_sum,
    is_decomposable_3party,
    split_ghz,
    split_local,
    try_decompose,
)
from .simplicial import Polyhedron, codim1_oracle, dual, gamma_sphere, join, polyhedron_of_closed

__version__ = "0.1.0"
