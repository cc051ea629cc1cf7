#include "ontofuse/extract.hpp"

#include <algorithm>

#include "ontofuse/error.hpp"

namespace ontofuse {

LocalityClass expr_locality(const ClassExpr& expr, const Signature& sigma) {
  switch (expr.kind) {
    case ExprKind::Named:
      return sigma.count(expr.entity) ? LocalityClass::Neither
                                      : LocalityClass::Bot;
    case ExprKind::Some:
      return sigma.count(expr.entity) && sigma.count(expr.filler)
                 ? LocalityClass::Neither
                 : LocalityClass::Bot;
    case ExprKind::And:
      for (const auto& c : expr.conjuncts)
        if (expr_locality(c, sigma) == LocalityClass::Bot)
          return LocalityClass::Bot;
      return LocalityClass::Neither;
  }
  return LocalityClass::Neither;
}

bool is_bot_local(const Axiom& axiom, const Signature& sigma) {
  switch (axiom.kind) {
    case AxiomKind::SubClassOf:
      // bot <= anything holds vacuously.
      return sigma.count(axiom.lhs) == 0;
    case AxiomKind::EquivalentToIntersection:
      return sigma.count(axiom.lhs) == 0 &&
             expr_locality(axiom.rhs, sigma) == LocalityClass::Bot;
    case AxiomKind::Disjoint:
      return sigma.count(axiom.lhs) == 0 ||
             sigma.count(axiom.rhs_entity) == 0;
    case AxiomKind::Equivalent:
      return sigma.count(axiom.lhs) == 0 &&
             sigma.count(axiom.rhs_entity) == 0;
  }
  return true;
}

Module extract_module(const Ontology& ontology, const Signature& seed) {
  Signature sigma = seed;
  std::vector<bool> taken(ontology.axioms.size(), false);
  std::vector<Axiom> picked;

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < ontology.axioms.size(); ++i) {
      if (taken[i]) continue;
      const Axiom& axiom = ontology.axioms[i];
      if (!is_bot_local(axiom, sigma)) {
        taken[i] = true;
        picked.push_back(axiom);
        Signature sig = sig_of_axiom(axiom);
        sigma.insert(sig.begin(), sig.end());
        changed = true;
      }
    }
  }

  Module module;
  module.source = ontology.id;
  module.seed_signature = seed;
  module.axioms = std::move(picked);
  canonicalize_axioms(module.axioms);
  for (const auto& entity : sig_of_module(module)) {
    if (auto it = ontology.classes.find(entity); it != ontology.classes.end())
      module.carried_classes.emplace(entity, it->second);
    if (auto it = ontology.relations.find(entity);
        it != ontology.relations.end())
      module.carried_relations.emplace(entity, it->second);
  }
  return module;
}

TermSet enrich_terms(const TermSet& terms, const Module& module,
                     const EnrichFields& fields) {
  TermSet out = terms;
  for (const auto& entity : sig_of_module(module)) {
    // Relation symbols are excluded: matching consults classes only.
    if (module.carried_relations.count(entity) &&
        !module.carried_classes.count(entity))
      continue;
    if (fields.ids) out.insert(entity.str());
    auto it = module.carried_classes.find(entity);
    if (it == module.carried_classes.end()) continue;
    if (fields.names && it->second.name) out.insert(*it->second.name);
    if (fields.synonyms)
      for (const auto& syn : it->second.synonyms) out.insert(syn.text);
  }
  return out;
}

std::string trace_tsv(const FixpointTrace& trace) {
  std::string out = "# round\tontology\tterm_count\tsignature_size\taxiom_count\n";
  for (const auto& round : trace.rounds) {
    for (const auto& entry : round.per_ontology) {
      out += std::to_string(round.round_index);
      out += '\t';
      out += entry.ontology;
      out += '\t';
      out += std::to_string(entry.term_count);
      out += '\t';
      out += std::to_string(entry.signature_size);
      out += '\t';
      out += std::to_string(entry.axiom_count);
      out += '\n';
    }
  }
  return out;
}

FixpointResult run_fixpoint(const std::vector<Ontology>& ontologies,
                            const TermSet& seeds,
                            const FixpointOptions& options) {
  if (ontologies.empty())
    throw Error(ErrorCode::ConfigError, "run_fixpoint needs ontologies");
  if (options.max_rounds < 1)
    throw Error(ErrorCode::ConfigError, "max_rounds must be at least 1");

  FixpointResult result;
  result.modules.resize(ontologies.size());
  TermSet terms = seeds;
  std::vector<Signature> seed_sigs(ontologies.size());
  Signature previous_union;
  bool have_previous = false;

  for (int round = 1;; ++round) {
    if (round > options.max_rounds)
      throw Error(ErrorCode::MaxRoundsExceeded,
                  "no fixpoint within " + std::to_string(options.max_rounds) +
                      " rounds");
    FixpointRound trace_round;
    trace_round.round_index = round;
    for (std::size_t k = 0; k < ontologies.size(); ++k) {
      MatchReport report =
          match_terms(ontologies[k], terms, options.match_mode);
      seed_sigs[k] = sig_union(report.matched, seed_sigs[k]);
      result.modules[k] = extract_module(ontologies[k], seed_sigs[k]);
      terms = enrich_terms(terms, result.modules[k], options.enrich);
      trace_round.per_ontology.push_back(
          {ontologies[k].id, terms.size(),
           sig_of_module(result.modules[k]).size(),
           result.modules[k].axioms.size()});
    }
    result.trace.rounds.push_back(std::move(trace_round));

    Signature current_union;
    for (const auto& module : result.modules)
      current_union = sig_union(current_union, sig_of_module(module));
    if (have_previous && current_union == previous_union) break;
    previous_union = std::move(current_union);
    have_previous = true;
  }

  result.final_terms = std::move(terms);
  return result;
}

bool match_fixpoint_test(const std::vector<Ontology>& ontologies,
                         const TermSet& terms,
                         const std::vector<Module>& modules, MatchMode mode,
                         const EnrichFields& fields) {
  TermSet enriched = terms;
  for (const auto& module : modules)
    enriched = enrich_terms(enriched, module, fields);
  for (const auto& ontology : ontologies)
    if (!(match_terms(ontology, terms, mode) ==
          match_terms(ontology, enriched, mode)))
      return false;
  return true;
}

}  // namespace ontofuse
