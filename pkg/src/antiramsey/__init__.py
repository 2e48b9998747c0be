"""Executable anti-Ramsey decomposition theory for hereditary graph families.

Reduced chromatic numbers, F-decks, lower-bound colorings, exact forcing
numbers at tiny scale, and constructive independent transversals.
"""

from .decomposition import deck, is_stable, min_decomposition_size, reduced_chromatic
from .extremal import (
    EdgeColoring,
    classify,
    ex_exact_small,
    f_exact_tiny,
    find_F_colored_copy,
    kst_bound,
    lb_coloring,
    turan_number,
)
from .families import FamilySpec, family_chromatic_cap, family_contains, parse_family
from .graph import SimpleGraph, build_graph, chromatic_number, is_isomorphic, named_graph, structural_stats
from .transversal import (
    PartedDigraph,
    find_transversal_exact,
    itl_multifold,
    itl_transversal,
    rainbow_cut,
    scan_forbidden_substructures,
    smd_construct,
)

__version__ = "0.1.0"
