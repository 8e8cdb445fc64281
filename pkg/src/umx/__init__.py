"""Unbounded matroids (U-matroids): exact construction, validation and extension."""

from .errors import (
    CapExceeded,
    GenericityError,
    InvalidRankFunction,
    LatticeError,
    LoadError,
    NotALinearExtension,
    PosetError,
    UmxError,
)
from .lattice import (
    DistLattice,
    Poset,
    adjoin_atom,
    adjoin_set,
    atoms,
    count_linear_extensions,
    dual_lattice,
    format_set,
    inf_D,
    irr_poset,
    is_accessible,
    linear_extensions,
    mask_of,
    elements_of,
    order_ideals,
    sup_D,
)
from .umatroid import (
    FlatLattice,
    RankFunction,
    UMatroid,
    ValidationReport,
    basis_of_chain,
    bases,
    closure,
    dot_bases,
    dual,
    flats,
    is_poset_matroid,
    rank_from_bases,
    uniform_matroid,
    validate,
    vertex_of_chain,
    vertices,
)
from .extension import (
    ExtensionResult,
    dominates,
    enumerate_matroid_extensions,
    flats_after_atom_extension,
    flats_after_restriction,
    generous_atom_extension,
    generous_extension,
    is_sheared,
    magnanimous_extension,
    restrict,
    zero_one_points,
)
from .complexes import (
    PureComplex,
    check_basis_system,
    gale_leq,
    gale_min,
    is_shelling_order,
    lex_compare,
    lex_min,
    lex_order,
    pseudo_independence_complex,
)
from .arrangements import (
    Arrangement,
    Subspace,
    arrangement_umatroid,
    codim_intersection,
    generic_rank_oracle,
    multisymmetric_lift,
    polymatroid_rank,
    split_space,
)

__version__ = "0.1.0"
