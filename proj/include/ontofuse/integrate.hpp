#pragma once

#include <string>
#include <vector>

#include "ontofuse/align.hpp"
#include "ontofuse/model.hpp"

namespace ontofuse {

/// The new ontology's skeleton: imports of every module plus one
/// equivalence axiom per mapping. Imports are file references in canonical
/// ontology order.
struct BridgeOntology {
  std::string id;
  std::vector<std::string> imports;
  std::vector<Axiom> bridge_axioms;  // Equivalent, provenance BRIDGE
};

struct MergedAxiom {
  Axiom axiom;
  std::vector<OntologyId> provenances;  // sorted, unique
};

struct ConflictNote {
  EntityId entity;
  std::string field;
  OntologyId kept_from;
  std::string kept_value;
  OntologyId dropped_from;
  std::string dropped_value;
};

/// Materialized union of modules plus bridge axioms. Duplicate axioms
/// collapse to one entry that remembers every provenance.
struct MergedOntology {
  std::string id;
  std::map<EntityId, Annotations> classes;
  std::map<EntityId, Annotations> relations;
  std::vector<MergedAxiom> axioms;  // canonically sorted
  std::vector<ConflictNote> conflicts;
};

/// Throws Error{UnknownEndpoint} when a mapping references a class its
/// module does not carry.
BridgeOntology build_bridge(const std::vector<Module>& modules,
                            const MappingSet& maps,
                            const std::string& seed_label);

std::string serialize_bridge(const BridgeOntology& bridge);

/// Reads a bridge document back: equivalent_to stanzas become bridge
/// axioms, import header tags become the imports list.
BridgeOntology parse_bridge(const std::string& text, const std::string& id);

/// N-ary union with canonical deduplication. Name/definition conflicts
/// keep the first value in canonical ontology order and are recorded;
/// synonyms and alt ids union.
MergedOntology merge(const std::vector<Module>& parts,
                     const BridgeOntology& bridge, const std::string& id);

struct PairMerge {
  std::pair<OntologyId, OntologyId> pair;
  MergedOntology merged;
};

/// One merge per unordered ontology pair, keeping only bridge axioms with
/// both endpoints inside the pair. Throws Error{TooFewModules}.
std::vector<PairMerge> pairwise_merges(const std::vector<Module>& modules,
                                       const BridgeOntology& bridge);

/// Plain-ontology view used for OBO serialization of a merge.
Ontology merged_to_ontology(const MergedOntology& merged);

std::string conflicts_tsv(const MergedOntology& merged);

}  // namespace ontofuse
