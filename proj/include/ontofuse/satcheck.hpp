#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ontofuse/integrate.hpp"
#include "ontofuse/model.hpp"

namespace ontofuse {

/// Reflexive-transitive told subsumption over equivalence-group
/// representatives. Told only: existential restrictions contribute no
/// subsumers, and no tableau rules run — the report headers say so.
struct ToldClosure {
  std::map<EntityId, EntityId> representative;       // class -> group rep (min)
  std::map<EntityId, std::set<EntityId>> groups;     // rep -> members
  std::map<EntityId, std::set<EntityId>> subsumers;  // rep -> reps, refl+trans
  std::set<std::pair<EntityId, EntityId>> disjoint_pairs;  // normalized reps

  /// Identity for classes the closure never saw.
  EntityId rep_of(const EntityId& entity) const;
  /// Subsumer reps of the entity's group; {rep} for unseen classes.
  std::set<EntityId> subsumers_of(const EntityId& entity) const;
};

ToldClosure build_closure(const Ontology& onto);

/// One unsatisfiable class together with every disjoint representative
/// pair witnessing the clash (sorted; at least one).
struct UnsatClass {
  EntityId entity;
  std::vector<std::pair<EntityId, EntityId>> witnesses;
};

/// Classes whose subsumer set contains both sides of a disjointness,
/// sorted by entity. Empty means told-clash-free.
std::vector<UnsatClass> find_unsat(const Ontology& onto);

/// Minimal axiom set deriving one witnessed clash: removing any single
/// member breaks the derivation for that witnessing pair.
struct Explanation {
  EntityId clash_class;
  std::pair<EntityId, EntityId> witness;
  std::vector<Axiom> axioms;  // canonical order, provenance preserved
};

/// One minimal explanation per witnessing pair of the clash, shrunk by
/// deletion testing in canonical axiom order. Throws Error{NotAClash}
/// when the class is not unsatisfiable.
std::vector<Explanation> explain(const Ontology& onto, const EntityId& clash);

struct Removal {
  Axiom axiom;
  std::string rationale;
};

struct RepairPlan {
  std::vector<Removal> removals;
};

/// Greedy hitting set over the explanations: each step removes the axiom
/// covering the most unresolved explanations, preferring bridge
/// equivalences over disjointness over told subsumption, then canonical
/// order. Re-verifies on the repaired ontology and iterates explain/
/// repair up to max_passes; throws Error{RepairIncomplete} when clashes
/// survive the bound.
RepairPlan propose_repair(const Ontology& onto,
                          std::vector<Explanation> explanations,
                          int max_passes = 8);

/// Copy of the ontology without any axiom logically equal to a removal.
Ontology apply_removals(const Ontology& onto, const RepairPlan& plan);

/// find_unsat plus explanations for every reported class.
struct CheckResult {
  std::vector<UnsatClass> unsat;
  std::vector<Explanation> explanations;
};

CheckResult check_ontology(const Ontology& onto);

struct PairClashReport {
  std::pair<OntologyId, OntologyId> pair;
  std::vector<UnsatClass> unsat;
};

/// The staged diagnostic: find_unsat over every pairwise merge.
std::vector<PairClashReport> check_pairs(const std::vector<PairMerge>& pairs);

std::string unsat_tsv(const CheckResult& result);
std::string pairwise_tsv(const std::vector<PairClashReport>& reports);
std::string explanations_json(const std::string& ontology_id,
                              const CheckResult& result);

std::string plan_text(const std::string& ontology_id, const RepairPlan& plan);
/// Reads "REMOVE <axiom>" lines back; "!" comment lines and blanks are
/// skipped. Throws Error{MalformedLine} on anything else.
RepairPlan parse_plan(const std::string& text);

}  // namespace ontofuse
