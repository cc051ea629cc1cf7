#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ontofuse/model.hpp"

namespace ontofuse {

/// Unit-cost insert/delete/substitute edit distance on raw bytes.
std::size_t edit_distance(const std::string& a, const std::string& b);

/// Normalized similarity in [0, 1]: both strings ASCII-lowercased, then
/// 1 - editDistance / max(len). Two empty strings score 1.
double lev_metric(const std::string& a, const std::string& b);

enum class FieldKind { Id, Name, Synonym, Def };

const char* field_kind_name(FieldKind kind);

using FieldPair = std::pair<FieldKind, FieldKind>;

std::string field_pair_name(const FieldPair& pair);

struct SimilarityOptions {
  bool use_definitions = true;
  /// When positive, string pairs whose lengths alone cap the score below
  /// this value are skipped. Output-identical for scores >= the value.
  double band_threshold = 0.0;
};

struct SimilarityResult {
  double score = 0.0;
  FieldPair field{FieldKind::Id, FieldKind::Id};
};

/// Maximum lev_metric over the comparable field pairs: local id x local
/// id, name x name, name x synonym (both directions), synonym x synonym,
/// def x def. Ties resolve by that priority order.
SimilarityResult class_similarity(const EntityId& id1, const Annotations& a1,
                                  const EntityId& id2, const Annotations& a2,
                                  const SimilarityOptions& options = {});

/// One scored correspondence; stored with source ontology < target
/// ontology.
struct Mapping {
  OntologyId source_ontology;
  EntityId source_id;
  OntologyId target_ontology;
  EntityId target_id;
  double score = 0.0;
  FieldPair field{FieldKind::Id, FieldKind::Id};

  auto key() const {
    return std::tie(source_ontology, target_ontology, source_id, target_id);
  }
};

struct MappingSet {
  double threshold = 0.0;
  std::vector<Mapping> mappings;  // sorted by key()
};

/// For every module pair from distinct ontologies, maps each class of the
/// canonically smaller ontology to its best-scoring class in the other;
/// kept when the score reaches the threshold. Score ties pick the smallest
/// target id. Obsolete classes are skipped.
/// Throws Error{InvalidThreshold} unless 0 < threshold <= 1.
MappingSet compute_mappings(const std::vector<Module>& modules,
                            double threshold,
                            const SimilarityOptions& options = {});

std::string mappings_json(const MappingSet& set);
MappingSet mappings_from_json(const std::string& text);
std::string mappings_tsv(const MappingSet& set);

}  // namespace ontofuse
