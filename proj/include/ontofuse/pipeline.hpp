#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ontofuse/extract.hpp"
#include "ontofuse/model.hpp"

namespace ontofuse {

/// Everything cmd_pipeline needs, loadable from a flat key=value file.
/// Keys mirror the command-line flags: seed_label, seed (repeatable),
/// ontology (repeatable, "id=path" or bare path), threshold, match_mode,
/// enrich_fields, max_rounds, repair_passes, order_audit, auto_repair,
/// no_def_similarity, out.
struct PipelineConfig {
  std::string seed_label = "seed";
  std::vector<std::string> seed_terms;
  std::vector<std::pair<OntologyId, std::string>> ontologies;  // (id, path)
  double threshold = 0.95;
  MatchMode match_mode = MatchMode::Substring;
  EnrichFields enrich;
  int max_rounds = 32;
  int repair_passes = 8;
  bool order_audit = false;
  bool auto_repair = false;
  bool use_definitions = true;
  std::string out_dir = "out";
};

/// Parses the key=value text. Unknown keys and unparsable values throw
/// Error{ConfigError} with the offending line number.
PipelineConfig parse_config(const std::string& text);

PipelineConfig load_config_file(const std::string& path);

/// Throws Error{ConfigError} unless: seeds non-empty and each >= 3 chars,
/// threshold in (0,1], at least two ontologies with distinct ids and
/// distinct paths, max_rounds >= 2, repair_passes >= 1, seed_label a
/// filename-safe token.
void validate_config(const PipelineConfig& config);

MatchMode parse_match_mode(const std::string& text);
EnrichFields parse_enrich_fields(const std::string& text);

/// "id=path" split at the first '='; a bare path gets its file stem as id.
std::pair<OntologyId, std::string> parse_ontology_arg(
    const std::string& value);

struct PipelineOutcome {
  int exit_code = 0;  // 0 clash-free or plan verified, 2 clashes remain
  std::vector<std::string> artifacts;  // paths in write order
  std::vector<std::string> summary;    // human-readable progress lines
  std::size_t unsat_count = 0;
  bool plan_verified = false;
};

/// parse -> fixpoint -> map -> bridge -> merge -> pairwise check -> full
/// check -> repair plan (applied only with auto_repair). Writes every
/// artifact under out_dir; byte-identical across runs on equal inputs.
PipelineOutcome run_pipeline(const PipelineConfig& config);

}  // namespace ontofuse
