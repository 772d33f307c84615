"""Classification of finite group actions on closed orientable surfaces with
planar signatures: counts of order-preserving epimorphisms, strong
equivalence classes and topological equivalence classes."""

from .braid_action import (
    MoveSet,
    OrbitPartition,
    apply_alpha,
    apply_aut,
    apply_gamma,
    equivalence_classes,
    move_set,
    strong_classes,
    vertical_classes,
)
from .catalog import (
    Catalog,
    GroupSpec,
    groups_of_order,
    load_catalog_file,
    parse_spec,
    realize,
)
from .census import CensusRow, diff, emit, load, run_census, verify_rows
from .epimorphisms import GenVector, count_epimorphisms, enumerate_epimorphisms
from .group_engine import (
    Automorphism,
    GroupTable,
    automorphisms,
    conjugate,
    element_order,
    from_multiplication_table,
    from_permutation_generators,
    generated_subgroup,
    inverse,
    multiply,
)
from .signatures import Signature, genus_of, hurwitz_bound, solve_signatures

__version__ = "0.1.0"
