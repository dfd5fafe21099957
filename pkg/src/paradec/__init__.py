"""Workbench for paradoxical decompositions of finitely generated groups.

Exact doubling checks on finite Cayley-ball domains (matching certificate or
Hall violator), explicit decomposition pieces with verification, Tarski
bound reporting, and spanning-forest sampling with a mechanical audit of the
forest counting argument.
"""

from .cayley import (
    CayleyPatch,
    GeneratingSet,
    enumerate_ball,
    patch_from_jsonable,
    product_set,
    sphere_sizes,
)
from .decomposition import (
    DecompositionReport,
    FreenessResult,
    PartialDecomposition,
    TarskiBoundReport,
    first_letter_pieces,
    first_letter_translators,
    free_up_to_length,
    make_decomposition,
    pieces_from_certificate,
    tarski_bound_report,
    verify_decomposition,
)
from .doubling import (
    Certificate,
    TranslatingSets,
    Verdict,
    Violator,
    brute_force_check,
    check_domain,
    make_violator,
    minimal_violating_radius,
    verdict_from_jsonable,
    verdict_to_jsonable,
    verify_certificate,
    verify_violator,
)
from .forest import (
    DegreeStatistics,
    ForestAudit,
    ForestSample,
    audit_counting_argument,
    degree_statistics,
    patch_a_edges,
    sample_forest_containing_a_edges,
    sample_spanning_tree_of_graph,
    sample_spanning_tree_with_required_edges,
    sample_uniform_spanning_tree,
)
from .groups import (
    GroupSpec,
    cyclic_group,
    free_abelian_group,
    free_group,
    matrix_group,
    parse_group_spec,
    parse_word,
    spec_to_string,
)

__version__ = "0.1.0"

__all__ = [
    "CayleyPatch",
    "Certificate",
    "DecompositionReport",
    "DegreeStatistics",
    "ForestAudit",
    "ForestSample",
    "FreenessResult",
    "GeneratingSet",
    "GroupSpec",
    "PartialDecomposition",
    "TarskiBoundReport",
    "TranslatingSets",
    "Verdict",
    "Violator",
    "audit_counting_argument",
    "brute_force_check",
    "check_domain",
    "cyclic_group",
    "degree_statistics",
    "enumerate_ball",
    "first_letter_pieces",
    "first_letter_translators",
    "free_abelian_group",
    "free_group",
    "free_up_to_length",
    "make_decomposition",
    "make_violator",
    "matrix_group",
    "minimal_violating_radius",
    "parse_group_spec",
    "parse_word",
    "patch_a_edges",
    "patch_from_jsonable",
    "pieces_from_certificate",
    "product_set",
    "sample_forest_containing_a_edges",
    "sample_spanning_tree_of_graph",
    "sample_spanning_tree_with_required_edges",
    "sample_uniform_spanning_tree",
    "spec_to_string",
    "sphere_sizes",
    "tarski_bound_report",
    "verdict_from_jsonable",
    "verdict_to_jsonable",
    "verify_certificate",
    "verify_decomposition",
    "verify_violator",
]
