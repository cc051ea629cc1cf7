#include "ontofuse/satcheck.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "ontofuse/error.hpp"

namespace ontofuse {

namespace {

/// Union-find keyed by EntityId; the representative of a set is its
/// smallest member, independent of union order.
struct UnionFind {
  std::map<EntityId, EntityId> parent;

  const EntityId& find(const EntityId& entity) {
    auto it = parent.find(entity);
    if (it == parent.end())
      it = parent.emplace(entity, entity).first;
    if (it->second == entity) return it->first;
    const EntityId& root = find(it->second);
    it->second = root;
    return root;
  }

  void unite(const EntityId& a, const EntityId& b) {
    EntityId ra = find(a), rb = find(b);
    if (ra == rb) return;
    if (rb < ra) std::swap(ra, rb);
    parent[rb] = ra;  // smaller id becomes the root
  }
};

void collect_classes(const Axiom& axiom, std::set<EntityId>& out) {
  out.insert(axiom.lhs);
  switch (axiom.kind) {
    case AxiomKind::SubClassOf:
    case AxiomKind::EquivalentToIntersection: {
      const ClassExpr& rhs = axiom.rhs;
      if (rhs.kind == ExprKind::Named) {
        out.insert(rhs.entity);
      } else if (rhs.kind == ExprKind::Some) {
        out.insert(rhs.filler);
      } else {
        for (const auto& conjunct : rhs.conjuncts) {
          if (conjunct.kind == ExprKind::Named)
            out.insert(conjunct.entity);
          else
            out.insert(conjunct.filler);
        }
      }
      break;
    }
    case AxiomKind::Disjoint:
    case AxiomKind::Equivalent:
      out.insert(axiom.rhs_entity);
      break;
  }
}

/// Named told-superclasses contributed by the axiom's right-hand side:
/// named conjuncts of intersections, the named class itself; existential
/// restrictions contribute none.
void named_supers(const ClassExpr& rhs, std::vector<EntityId>& out) {
  switch (rhs.kind) {
    case ExprKind::Named:
      out.push_back(rhs.entity);
      break;
    case ExprKind::Some:
      break;
    case ExprKind::And:
      for (const auto& conjunct : rhs.conjuncts)
        if (conjunct.kind == ExprKind::Named) out.push_back(conjunct.entity);
      break;
  }
}

ToldClosure closure_over(const std::vector<Axiom>& axioms,
                         const std::set<EntityId>& extra_classes) {
  std::set<EntityId> universe = extra_classes;
  for (const auto& axiom : axioms) collect_classes(axiom, universe);

  UnionFind uf;
  for (const auto& entity : universe) uf.find(entity);
  for (const auto& axiom : axioms)
    if (axiom.kind == AxiomKind::Equivalent)
      uf.unite(axiom.lhs, axiom.rhs_entity);

  ToldClosure closure;
  for (const auto& entity : universe) {
    EntityId rep = uf.find(entity);
    closure.representative.emplace(entity, rep);
    closure.groups[rep].insert(entity);
  }

  // Direct told-subsumption edges between representatives.
  std::map<EntityId, std::set<EntityId>> edges;
  for (const auto& axiom : axioms) {
    if (axiom.kind != AxiomKind::SubClassOf &&
        axiom.kind != AxiomKind::EquivalentToIntersection)
      continue;
    std::vector<EntityId> supers;
    named_supers(axiom.rhs, supers);
    const EntityId sub_rep = uf.find(axiom.lhs);
    for (const auto& sup : supers) edges[sub_rep].insert(uf.find(sup));
  }

  // Reflexive-transitive closure by DFS from each representative.
  for (const auto& [rep, members] : closure.groups) {
    std::set<EntityId>& reach = closure.subsumers[rep];
    std::vector<EntityId> stack{rep};
    while (!stack.empty()) {
      EntityId current = stack.back();
      stack.pop_back();
      if (!reach.insert(current).second) continue;
      auto it = edges.find(current);
      if (it == edges.end()) continue;
      for (const auto& next : it->second) stack.push_back(next);
    }
  }

  for (const auto& axiom : axioms) {
    if (axiom.kind != AxiomKind::Disjoint) continue;
    EntityId a = uf.find(axiom.lhs), b = uf.find(axiom.rhs_entity);
    if (b < a) std::swap(a, b);
    closure.disjoint_pairs.emplace(a, b);
  }
  return closure;
}

std::vector<std::pair<EntityId, EntityId>> witnesses_for(
    const ToldClosure& closure, const EntityId& entity) {
  std::vector<std::pair<EntityId, EntityId>> hits;
  const std::set<EntityId> above = closure.subsumers_of(entity);
  for (const auto& pair : closure.disjoint_pairs)
    if (above.count(pair.first) && above.count(pair.second))
      hits.push_back(pair);
  return hits;  // set iteration keeps them sorted
}

/// Does the axiom subset still derive the clash of `entity` through the
/// same witnessing pair? Witness identity is anchored to the full
/// closure's representatives, which stay fixed while axioms are deleted.
bool clash_persists(const std::vector<Axiom>& subset, const EntityId& entity,
                    const std::pair<EntityId, EntityId>& witness,
                    const ToldClosure& full) {
  ToldClosure reduced = closure_over(subset, {entity});
  const std::set<EntityId> above = reduced.subsumers_of(entity);
  for (const auto& axiom : subset) {
    if (axiom.kind != AxiomKind::Disjoint) continue;
    if (!above.count(reduced.rep_of(axiom.lhs)) ||
        !above.count(reduced.rep_of(axiom.rhs_entity)))
      continue;
    EntityId a = full.rep_of(axiom.lhs), b = full.rep_of(axiom.rhs_entity);
    if (b < a) std::swap(a, b);
    if (std::pair(a, b) == witness) return true;
  }
  return false;
}

int removal_preference(const Axiom& axiom) {
  if (axiom.kind == AxiomKind::Equivalent &&
      axiom.provenance == kBridgeProvenance)
    return 0;  // machine-generated mappings go first
  if (axiom.kind == AxiomKind::Disjoint) return 1;
  if (axiom.kind == AxiomKind::SubClassOf) return 2;
  return 3;
}

const char* removal_rationale(int preference) {
  switch (preference) {
    case 0: return "bridge mapping, machine-generated at alignment time";
    case 1: return "disjointness participating in the clash";
    case 2: return "told subsumption feeding the clash";
    default: return "curated logical axiom";
  }
}

bool hits(const Axiom& removal, const Explanation& explanation) {
  for (const auto& axiom : explanation.axioms)
    if (logical_eq(axiom, removal)) return true;
  return false;
}

}  // namespace

EntityId ToldClosure::rep_of(const EntityId& entity) const {
  auto it = representative.find(entity);
  return it == representative.end() ? entity : it->second;
}

std::set<EntityId> ToldClosure::subsumers_of(const EntityId& entity) const {
  auto it = subsumers.find(rep_of(entity));
  return it == subsumers.end() ? std::set<EntityId>{rep_of(entity)}
                               : it->second;
}

ToldClosure build_closure(const Ontology& onto) {
  std::set<EntityId> declared;
  for (const auto& [entity, ann] : onto.classes) declared.insert(entity);
  return closure_over(onto.axioms, declared);
}

std::vector<UnsatClass> find_unsat(const Ontology& onto) {
  ToldClosure closure = build_closure(onto);
  std::vector<UnsatClass> result;
  for (const auto& [entity, rep] : closure.representative) {
    auto witnesses = witnesses_for(closure, entity);
    if (!witnesses.empty())
      result.push_back({entity, std::move(witnesses)});
  }
  return result;  // representative map order = sorted by entity
}

std::vector<Explanation> explain(const Ontology& onto, const EntityId& clash) {
  ToldClosure full = build_closure(onto);
  auto witnesses = witnesses_for(full, clash);
  if (witnesses.empty())
    throw Error(ErrorCode::NotAClash,
                clash.str() + " is not told-unsatisfiable in " + onto.id);

  std::vector<Explanation> result;
  for (const auto& witness : witnesses) {
    // Start from every axiom, then a single deletion pass in canonical
    // order: told derivation is monotone, so whatever survives is minimal.
    std::vector<Axiom> kept = onto.axioms;
    for (std::size_t i = 0; i < kept.size();) {
      std::vector<Axiom> trial = kept;
      trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
      if (clash_persists(trial, clash, witness, full))
        kept = std::move(trial);
      else
        ++i;
    }
    bool duplicate = false;
    for (const auto& existing : result) {
      if (existing.axioms.size() == kept.size() &&
          std::equal(existing.axioms.begin(), existing.axioms.end(),
                     kept.begin(), logical_eq)) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) result.push_back({clash, witness, std::move(kept)});
  }
  return result;
}

RepairPlan propose_repair(const Ontology& onto,
                          std::vector<Explanation> explanations,
                          int max_passes) {
  if (explanations.empty())
    throw std::invalid_argument("propose_repair: empty explanation list");

  RepairPlan plan;
  Ontology current = onto;
  for (int pass = 0; pass < max_passes; ++pass) {
    std::vector<const Explanation*> unresolved;
    for (const auto& explanation : explanations) {
      bool resolved = false;
      for (const auto& removal : plan.removals)
        if (hits(removal.axiom, explanation)) { resolved = true; break; }
      if (!resolved) unresolved.push_back(&explanation);
    }

    while (!unresolved.empty()) {
      // Candidate axioms with their coverage, discovered in deterministic
      // explanation/axiom order.
      std::vector<std::pair<Axiom, std::size_t>> candidates;
      for (const Explanation* explanation : unresolved) {
        for (const auto& axiom : explanation->axioms) {
          auto found = std::find_if(
              candidates.begin(), candidates.end(),
              [&](const auto& c) { return logical_eq(c.first, axiom); });
          if (found == candidates.end())
            candidates.emplace_back(axiom, 1);
          else
            ++found->second;
        }
      }
      const auto* best = &candidates.front();
      for (const auto& candidate : candidates) {
        if (candidate.second != best->second) {
          if (candidate.second > best->second) best = &candidate;
          continue;
        }
        int cp = removal_preference(candidate.first);
        int bp = removal_preference(best->first);
        if (cp != bp) {
          if (cp < bp) best = &candidate;
          continue;
        }
        if (logical_less(candidate.first, best->first)) best = &candidate;
      }

      std::ostringstream rationale;
      rationale << removal_rationale(removal_preference(best->first))
                << "; resolves " << best->second << " explanation(s)";
      Axiom chosen = best->first;
      plan.removals.push_back({chosen, rationale.str()});
      std::erase_if(unresolved, [&](const Explanation* explanation) {
        return hits(chosen, *explanation);
      });
    }

    current = apply_removals(onto, plan);
    std::vector<UnsatClass> remaining = find_unsat(current);
    if (remaining.empty()) return plan;

    // The explanations were not exhaustive (parallel derivations); widen
    // the set from the repaired ontology and go again.
    for (const auto& unsat : remaining)
      for (auto& explanation : explain(current, unsat.entity))
        explanations.push_back(std::move(explanation));
  }
  throw Error(ErrorCode::RepairIncomplete,
              "clashes remain after " + std::to_string(max_passes) +
                  " repair passes on " + onto.id);
}

Ontology apply_removals(const Ontology& onto, const RepairPlan& plan) {
  Ontology out;
  out.id = onto.id;
  out.classes = onto.classes;
  out.relations = onto.relations;
  for (const auto& axiom : onto.axioms) {
    bool removed = false;
    for (const auto& removal : plan.removals)
      if (logical_eq(axiom, removal.axiom)) { removed = true; break; }
    if (!removed) out.axioms.push_back(axiom);
  }
  return out;
}

CheckResult check_ontology(const Ontology& onto) {
  CheckResult result;
  result.unsat = find_unsat(onto);
  for (const auto& unsat : result.unsat)
    for (auto& explanation : explain(onto, unsat.entity))
      result.explanations.push_back(std::move(explanation));
  return result;
}

std::vector<PairClashReport> check_pairs(const std::vector<PairMerge>& pairs) {
  std::vector<PairClashReport> reports;
  for (const auto& pair : pairs) {
    PairClashReport report;
    report.pair = pair.pair;
    report.unsat = find_unsat(merged_to_ontology(pair.merged));
    reports.push_back(std::move(report));
  }
  return reports;
}

std::string unsat_tsv(const CheckResult& result) {
  std::string out = "# told-clash detection only\n";
  out += "# class\twitness_left\twitness_right\texplanations\n";
  for (const auto& unsat : result.unsat) {
    std::size_t count = 0;
    for (const auto& explanation : result.explanations)
      if (explanation.clash_class == unsat.entity) ++count;
    out += unsat.entity.str();
    out += '\t';
    out += unsat.witnesses.front().first.str();
    out += '\t';
    out += unsat.witnesses.front().second.str();
    out += '\t';
    out += std::to_string(count);
    out += '\n';
  }
  return out;
}

std::string pairwise_tsv(const std::vector<PairClashReport>& reports) {
  std::string out = "# told-clash detection only\n";
  out += "# left\tright\tunsat_count\n";
  for (const auto& report : reports) {
    out += report.pair.first;
    out += '\t';
    out += report.pair.second;
    out += '\t';
    out += std::to_string(report.unsat.size());
    out += '\n';
  }
  return out;
}

std::string explanations_json(const std::string& ontology_id,
                              const CheckResult& result) {
  nlohmann::ordered_json doc;
  doc["ontology"] = ontology_id;
  doc["note"] = "told-clash detection only";
  doc["clashes"] = nlohmann::ordered_json::array();
  for (const auto& unsat : result.unsat) {
    nlohmann::ordered_json entry;
    entry["class"] = unsat.entity.str();
    entry["witnesses"] = nlohmann::ordered_json::array();
    for (const auto& witness : unsat.witnesses)
      entry["witnesses"].push_back({witness.first.str(),
                                    witness.second.str()});
    entry["explanations"] = nlohmann::ordered_json::array();
    for (const auto& explanation : result.explanations) {
      if (explanation.clash_class != unsat.entity) continue;
      nlohmann::ordered_json axioms = nlohmann::ordered_json::array();
      for (const auto& axiom : explanation.axioms)
        axioms.push_back({{"axiom", axiom.str()},
                          {"provenance", axiom.provenance}});
      entry["explanations"].push_back(
          {{"witness", {explanation.witness.first.str(),
                        explanation.witness.second.str()}},
           {"axioms", std::move(axioms)}});
    }
    doc["clashes"].push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

std::string plan_text(const std::string& ontology_id, const RepairPlan& plan) {
  std::string out = "! repair plan for " + ontology_id + ": " +
                    std::to_string(plan.removals.size()) + " removal(s)\n";
  for (const auto& removal : plan.removals) {
    out += "! " + removal.rationale + "\n";
    out += "REMOVE " + removal.axiom.str() + "\n";
  }
  return out;
}

RepairPlan parse_plan(const std::string& text) {
  RepairPlan plan;
  std::istringstream in(text);
  std::string line;
  std::string pending_rationale;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    std::string trimmed = line.substr(start);
    if (trimmed[0] == '!') {
      std::size_t text_start = trimmed.find_first_not_of(" \t", 1);
      pending_rationale =
          text_start == std::string::npos ? "" : trimmed.substr(text_start);
      continue;
    }
    if (trimmed.rfind("REMOVE ", 0) != 0)
      throw Error(ErrorCode::MalformedLine,
                  "plan line " + std::to_string(line_no) +
                      ": expected 'REMOVE <axiom>' or '!' comment");
    Axiom axiom = Axiom::parse(trimmed.substr(7), "");
    plan.removals.push_back({std::move(axiom), pending_rationale});
    pending_rationale.clear();
  }
  return plan;
}

}  // namespace ontofuse
