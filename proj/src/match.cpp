#include "ontofuse/match.hpp"

#include <algorithm>

#include "ontofuse/error.hpp"

namespace ontofuse {

const char* match_field_name(MatchField field) {
  switch (field) {
    case MatchField::Id: return "ID";
    case MatchField::Name: return "NAME";
    case MatchField::Def: return "DEF";
    case MatchField::Synonym: return "SYNONYM";
    case MatchField::AltId: return "ALT_ID";
  }
  return "?";
}

namespace {

bool is_word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9');
}

}  // namespace

bool term_occurs(const std::string& haystack, const std::string& lower_term,
                 MatchMode mode) {
  if (lower_term.empty()) return false;
  const std::string folded = ascii_lower(haystack);
  std::size_t pos = folded.find(lower_term);
  while (pos != std::string::npos) {
    if (mode == MatchMode::Substring) return true;
    bool left_ok = pos == 0 || !is_word_char(folded[pos - 1]);
    std::size_t end = pos + lower_term.size();
    bool right_ok = end == folded.size() || !is_word_char(folded[end]);
    if (left_ok && right_ok) return true;
    pos = folded.find(lower_term, pos + 1);
  }
  return false;
}

MatchReport match_terms(const Ontology& ontology, const TermSet& terms,
                        MatchMode mode) {
  if (terms.empty())
    throw Error(ErrorCode::EmptyTermSet, "match_terms requires seed terms");

  MatchReport report;
  report.ontology = ontology.id;

  auto try_field = [&](const EntityId& entity, MatchField field,
                       const std::string& text, const std::string& term) {
    if (term_occurs(text, term, mode))
      report.hits.push_back({entity, field, term});
  };

  // Classes only; relations enter signatures through axiom signatures.
  for (const auto& [entity, ann] : ontology.classes) {
    if (ann.is_obsolete) continue;
    for (const auto& term : terms.terms) {
      try_field(entity, MatchField::Id, entity.str(), term);
      if (ann.name) try_field(entity, MatchField::Name, *ann.name, term);
      if (ann.definition)
        try_field(entity, MatchField::Def, *ann.definition, term);
      for (const auto& syn : ann.synonyms) {
        if (term_occurs(syn.text, term, mode)) {
          report.hits.push_back({entity, MatchField::Synonym, term});
          break;  // one hit per (entity, SYNONYM, term) triple
        }
      }
      for (const auto& alt : ann.alt_ids) {
        if (term_occurs(alt.str(), term, mode)) {
          report.hits.push_back({entity, MatchField::AltId, term});
          break;
        }
      }
    }
  }

  std::sort(report.hits.begin(), report.hits.end());
  report.hits.erase(std::unique(report.hits.begin(), report.hits.end()),
                    report.hits.end());
  for (const auto& hit : report.hits) report.matched.insert(hit.entity);
  return report;
}

std::string match_report_tsv(const MatchReport& report) {
  std::string out = "# entity\tfield\tterm\n";
  for (const auto& hit : report.hits) {
    out += hit.entity.str();
    out += '\t';
    out += match_field_name(hit.field);
    out += '\t';
    out += hit.term;
    out += '\n';
  }
  return out;
}

}  // namespace ontofuse
