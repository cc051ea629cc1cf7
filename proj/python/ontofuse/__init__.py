"""Seed-driven ontology fusion.

Parse OBO ontologies, extract bot-locality modules around seed terms,
align them with normalized Levenshtein similarity, merge them through
equivalence bridge axioms, and detect/explain/repair told-unsatisfiable
classes in the result.

The heavy lifting lives in the compiled extension ``ontofuse._core``;
this package re-exports its public surface.
"""

from ._core import (
    BRIDGE_PROVENANCE,
    Bridge,
    Explanation,
    FixpointResult,
    Mapping,
    MappingSet,
    Module,
    Ontology,
    OntofuseError,
    PipelineOutcome,
    RepairPlan,
    UnsatClass,
    __version__,
    apply_removals,
    build_bridge,
    compute_mappings,
    edit_distance,
    explain,
    extract_module,
    find_unsat,
    lev_metric,
    match_terms,
    merge_modules,
    module_file_name,
    parse_obo,
    parse_obo_file,
    propose_repair,
    run_fixpoint,
    run_pipeline,
    serialize_obo,
)

__all__ = [
    "BRIDGE_PROVENANCE",
    "Bridge",
    "Explanation",
    "FixpointResult",
    "Mapping",
    "MappingSet",
    "Module",
    "Ontology",
    "OntofuseError",
    "PipelineOutcome",
    "RepairPlan",
    "UnsatClass",
    "__version__",
    "apply_removals",
    "build_bridge",
    "compute_mappings",
    "edit_distance",
    "explain",
    "extract_module",
    "find_unsat",
    "lev_metric",
    "match_terms",
    "merge_modules",
    "module_file_name",
    "parse_obo",
    "parse_obo_file",
    "propose_repair",
    "run_fixpoint",
    "run_pipeline",
    "serialize_obo",
]
