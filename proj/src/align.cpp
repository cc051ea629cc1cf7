#include "ontofuse/align.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"

#include "ontofuse/error.hpp"

namespace ontofuse {

std::size_t edit_distance(const std::string& a, const std::string& b) {
  const std::size_t n = a.size(), m = b.size();
  if (n == 0) return m;
  if (m == 0) return n;

  // Two-row dynamic program.
  std::vector<std::size_t> prev(m + 1), curr(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    curr[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      curr[j] = std::min({prev[j] + 1, curr[j - 1] + 1, sub});
    }
    std::swap(prev, curr);
  }
  return prev[m];
}

double lev_metric(const std::string& a, const std::string& b) {
  const std::string fa = ascii_lower(a), fb = ascii_lower(b);
  const std::size_t longest = std::max(fa.size(), fb.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(edit_distance(fa, fb)) /
                   static_cast<double>(longest);
}

const char* field_kind_name(FieldKind kind) {
  switch (kind) {
    case FieldKind::Id: return "ID";
    case FieldKind::Name: return "NAME";
    case FieldKind::Synonym: return "SYNONYM";
    case FieldKind::Def: return "DEF";
  }
  return "?";
}

std::string field_pair_name(const FieldPair& pair) {
  return std::string(field_kind_name(pair.first)) + "/" +
         field_kind_name(pair.second);
}

namespace {

FieldKind field_kind_from_name(const std::string& name) {
  if (name == "ID") return FieldKind::Id;
  if (name == "NAME") return FieldKind::Name;
  if (name == "SYNONYM") return FieldKind::Synonym;
  if (name == "DEF") return FieldKind::Def;
  throw Error(ErrorCode::ConfigError, "unknown field kind '" + name + "'");
}

FieldPair field_pair_from_name(const std::string& name) {
  auto slash = name.find('/');
  if (slash == std::string::npos)
    throw Error(ErrorCode::ConfigError, "unknown field pair '" + name + "'");
  return {field_kind_from_name(name.substr(0, slash)),
          field_kind_from_name(name.substr(slash + 1))};
}

struct Scorer {
  const SimilarityOptions& options;
  SimilarityResult best;

  // Length pre-filter: |len(a)| and |len(b)| alone bound the score by
  // 1 - |la - lb| / max(la, lb).
  bool can_reach_band(std::size_t la, std::size_t lb) const {
    if (options.band_threshold <= 0.0) return true;
    std::size_t longest = std::max(la, lb);
    if (longest == 0) return true;
    double cap = 1.0 - static_cast<double>(longest - std::min(la, lb)) /
                           static_cast<double>(longest);
    return cap >= options.band_threshold - 1e-12;
  }

  void consider(const std::string& a, const std::string& b, FieldKind fa,
                FieldKind fb) {
    if (!can_reach_band(a.size(), b.size())) return;
    double score = lev_metric(a, b);
    if (score > best.score) best = {score, {fa, fb}};
  }
};

}  // namespace

SimilarityResult class_similarity(const EntityId& id1, const Annotations& a1,
                                  const EntityId& id2, const Annotations& a2,
                                  const SimilarityOptions& options) {
  Scorer scorer{options, {-1.0, {FieldKind::Id, FieldKind::Id}}};

  // Priority order doubles as tie-breaking: an equal later score never
  // replaces an earlier one.
  scorer.consider(id1.local, id2.local, FieldKind::Id, FieldKind::Id);
  if (a1.name && a2.name)
    scorer.consider(*a1.name, *a2.name, FieldKind::Name, FieldKind::Name);
  if (a1.name)
    for (const auto& syn : a2.synonyms)
      scorer.consider(*a1.name, syn.text, FieldKind::Name, FieldKind::Synonym);
  if (a2.name)
    for (const auto& syn : a1.synonyms)
      scorer.consider(syn.text, *a2.name, FieldKind::Synonym, FieldKind::Name);
  for (const auto& s1 : a1.synonyms)
    for (const auto& s2 : a2.synonyms)
      scorer.consider(s1.text, s2.text, FieldKind::Synonym,
                      FieldKind::Synonym);
  if (options.use_definitions && a1.definition && a2.definition)
    scorer.consider(*a1.definition, *a2.definition, FieldKind::Def,
                    FieldKind::Def);

  if (scorer.best.score < 0.0)
    scorer.best.score = 0.0;  // nothing comparable beyond the skipped bands
  return scorer.best;
}

MappingSet compute_mappings(const std::vector<Module>& modules,
                            double threshold,
                            const SimilarityOptions& options) {
  if (!(threshold > 0.0) || threshold > 1.0)
    throw Error(ErrorCode::InvalidThreshold,
                "threshold must be in (0, 1]");

  SimilarityOptions scoring = options;
  scoring.band_threshold = threshold;

  // Canonical pair order over the module sources.
  std::vector<const Module*> sorted;
  for (const auto& module : modules) sorted.push_back(&module);
  std::sort(sorted.begin(), sorted.end(),
            [](const Module* a, const Module* b) {
              return a->source < b->source;
            });

  MappingSet set;
  set.threshold = threshold;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      const Module& src = *sorted[i];
      const Module& dst = *sorted[j];
      if (src.source == dst.source) continue;
      for (const auto& [source_id, source_ann] : src.carried_classes) {
        if (source_ann.is_obsolete) continue;
        bool found = false;
        double best_score = 0.0;
        EntityId best_target;
        FieldPair best_field{FieldKind::Id, FieldKind::Id};
        for (const auto& [target_id, target_ann] : dst.carried_classes) {
          if (target_ann.is_obsolete) continue;
          SimilarityResult sim = class_similarity(source_id, source_ann,
                                                  target_id, target_ann,
                                                  scoring);
          // Strict improvement wins; map iteration order makes the
          // smallest target id the tie winner.
          if (!found || sim.score > best_score) {
            found = true;
            best_score = sim.score;
            best_target = target_id;
            best_field = sim.field;
          }
        }
        if (found && best_score >= threshold) {
          set.mappings.push_back({src.source, source_id, dst.source,
                                  best_target, best_score, best_field});
        }
      }
    }
  }
  std::sort(set.mappings.begin(), set.mappings.end(),
            [](const Mapping& a, const Mapping& b) {
              return a.key() < b.key();
            });
  return set;
}

std::string mappings_json(const MappingSet& set) {
  nlohmann::ordered_json doc;
  doc["threshold"] = set.threshold;
  doc["mappings"] = nlohmann::ordered_json::array();
  for (const auto& m : set.mappings) {
    nlohmann::ordered_json row;
    row["sourceOntology"] = m.source_ontology;
    row["sourceId"] = m.source_id.str();
    row["targetOntology"] = m.target_ontology;
    row["targetId"] = m.target_id.str();
    row["score"] = m.score;
    row["field"] = field_pair_name(m.field);
    doc["mappings"].push_back(std::move(row));
  }
  return doc.dump(2) + "\n";
}

MappingSet mappings_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedLine,
                std::string("bad mapping json: ") + e.what());
  }
  MappingSet set;
  try {
    set.threshold = doc.at("threshold").get<double>();
    for (const auto& row : doc.at("mappings")) {
      Mapping m;
      m.source_ontology = row.at("sourceOntology").get<std::string>();
      m.source_id = EntityId::parse(row.at("sourceId").get<std::string>());
      m.target_ontology = row.at("targetOntology").get<std::string>();
      m.target_id = EntityId::parse(row.at("targetId").get<std::string>());
      m.score = row.at("score").get<double>();
      m.field = field_pair_from_name(row.at("field").get<std::string>());
      set.mappings.push_back(std::move(m));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedLine,
                std::string("bad mapping json: ") + e.what());
  }
  return set;
}

std::string mappings_tsv(const MappingSet& set) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.6f", set.threshold);
  std::string out = "# threshold\t";
  out += buffer;
  out += "\n# source_ontology\tsource_id\ttarget_ontology\ttarget_id\tscore\tfield\n";
  for (const auto& m : set.mappings) {
    std::snprintf(buffer, sizeof buffer, "%.6f", m.score);
    out += m.source_ontology;
    out += '\t';
    out += m.source_id.str();
    out += '\t';
    out += m.target_ontology;
    out += '\t';
    out += m.target_id.str();
    out += '\t';
    out += buffer;
    out += '\t';
    out += field_pair_name(m.field);
    out += '\n';
  }
  return out;
}

}  // namespace ontofuse
