#pragma once

#include <string>
#include <vector>

#include "ontofuse/model.hpp"

namespace ontofuse {

enum class MatchField { Id, Name, Def, Synonym, AltId };

const char* match_field_name(MatchField field);

enum class MatchMode { Substring, Word };

struct MatchHit {
  EntityId entity;
  MatchField field;
  std::string term;

  auto operator<=>(const MatchHit&) const = default;
};

/// Result of matching one term set against one ontology. `matched` is
/// exactly the set of entities appearing in `hits`.
struct MatchReport {
  OntologyId ontology;
  Signature matched;
  std::vector<MatchHit> hits;  // sorted by (entity, field, term)

  bool operator==(const MatchReport&) const = default;
};

/// An entity matches when any term occurs (case-insensitively) in its
/// canonical id, name, definition, a synonym, or an alt id. Only classes
/// participate; obsolete classes are skipped. Word mode requires
/// non-alphanumeric boundaries around the occurrence.
/// Throws Error{EmptyTermSet}.
MatchReport match_terms(const Ontology& ontology, const TermSet& terms,
                        MatchMode mode = MatchMode::Substring);

/// Case-insensitive occurrence test used by match_terms; exposed for the
/// word-boundary rules.
bool term_occurs(const std::string& haystack, const std::string& lower_term,
                 MatchMode mode);

/// TSV rows "entity<TAB>field<TAB>term" with a comment header.
std::string match_report_tsv(const MatchReport& report);

}  // namespace ontofuse
