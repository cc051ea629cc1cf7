#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ontofuse {

/// Short name of a source ontology, e.g. "pathway". Defaults to the file
/// stem of the document it was parsed from.
using OntologyId = std::string;

/// Provenance tag used for axioms introduced by the bridge builder rather
/// than parsed from a source ontology.
inline const OntologyId kBridgeProvenance = "BRIDGE";

/// Identifier of a class or relation, split into a namespace prefix and a
/// local part ("GO:0034142" -> prefix "GO", local "0034142"). Relations
/// such as "part_of" have an empty prefix.
struct EntityId {
  std::string prefix;
  std::string local;

  EntityId() = default;
  EntityId(std::string prefix, std::string local)
      : prefix(std::move(prefix)), local(std::move(local)) {}

  /// Splits at the first ':'; a string without one (or starting with one)
  /// becomes a prefix-less id, so parse/str round-trips for any input.
  static EntityId parse(const std::string& text);

  std::string str() const {
    return prefix.empty() ? local : prefix + ":" + local;
  }

  auto operator<=>(const EntityId&) const = default;
  bool operator==(const EntityId&) const = default;
};

using Signature = std::set<EntityId>;

enum class SynonymScope { Exact, Broad, Narrow, Related };

const char* synonym_scope_name(SynonymScope scope);

struct Synonym {
  std::string text;
  SynonymScope scope = SynonymScope::Related;

  auto operator<=>(const Synonym&) const = default;
};

/// Annotation bundle of one entity: the fields term matching and alignment
/// read. Synonyms keep document order; duplicates (text+scope) collapse.
struct Annotations {
  std::optional<std::string> name;
  std::optional<std::string> definition;
  std::vector<Synonym> synonyms;
  std::vector<EntityId> alt_ids;
  bool is_obsolete = false;

  /// Appends unless an equal (text, scope) synonym is already present.
  void add_synonym(Synonym synonym);

  bool operator==(const Annotations&) const = default;
};

enum class ExprKind { Named, Some, And };

/// Right-hand-side class expression. The OBO subset only produces named
/// classes, existential restrictions with a named filler, and one level of
/// intersection over those, so nesting never exceeds depth 2.
struct ClassExpr {
  ExprKind kind = ExprKind::Named;
  EntityId entity;                   // Named: the class; Some: the relation
  EntityId filler;                   // Some only
  std::vector<ClassExpr> conjuncts;  // And only; >= 2, canonically sorted

  static ClassExpr named(EntityId entity);
  static ClassExpr some(EntityId relation, EntityId filler);
  /// Sorts the conjuncts. Throws std::logic_error on fewer than two
  /// conjuncts or on nested And (grammar violations, not input errors).
  static ClassExpr intersection(std::vector<ClassExpr> conjuncts);

  std::strong_ordering operator<=>(const ClassExpr& other) const;
  bool operator==(const ClassExpr& other) const {
    return (*this <=> other) == std::strong_ordering::equal;
  }

  std::string str() const;
};

enum class AxiomKind { SubClassOf, EquivalentToIntersection, Disjoint, Equivalent };

/// Normalized logical statement. Disjoint and Equivalent keep their two
/// sides in canonical (ascending) order; provenance names the ontology the
/// axiom came from and is ignored by logical comparison.
struct Axiom {
  AxiomKind kind = AxiomKind::SubClassOf;
  EntityId lhs;        // sub / lhs / first side
  ClassExpr rhs;       // SubClassOf: superclass expr; EqToInt: the And
  EntityId rhs_entity; // Disjoint / Equivalent: second side
  OntologyId provenance;

  static Axiom subclass_of(EntityId sub, ClassExpr sup, OntologyId provenance);
  static Axiom equivalent_to_intersection(EntityId lhs, ClassExpr rhs_and,
                                          OntologyId provenance);
  static Axiom disjoint(EntityId a, EntityId b, OntologyId provenance);
  static Axiom equivalent(EntityId a, EntityId b, OntologyId provenance);

  /// Canonical text form, parseable by parse_axiom. Provenance is not part
  /// of the text.
  std::string str() const;

  /// Inverse of str(). Throws Error{MalformedLine} on unrecognized input.
  static Axiom parse(const std::string& text, OntologyId provenance);
};

/// Ordering and equality on the logical content only (kind + sides),
/// ignoring provenance. All deduplication and sorting uses these.
std::strong_ordering logical_order(const Axiom& a, const Axiom& b);
bool logical_less(const Axiom& a, const Axiom& b);
bool logical_eq(const Axiom& a, const Axiom& b);

struct LogicalLess {
  bool operator()(const Axiom& a, const Axiom& b) const {
    return logical_less(a, b);
  }
};

/// One parsed ontology. Axioms are kept canonically sorted and
/// duplicate-free; every entity referenced by an axiom is declared in
/// classes or relations.
struct Ontology {
  OntologyId id;
  std::map<EntityId, Annotations> classes;
  std::map<EntityId, Annotations> relations;
  std::vector<Axiom> axioms;

  bool declares(const EntityId& entity) const {
    return classes.count(entity) > 0 || relations.count(entity) > 0;
  }
};

/// A locality module: a subset of one ontology's axioms plus the
/// annotations of every entity in its signature that the source declares.
struct Module {
  OntologyId source;
  Signature seed_signature;
  std::vector<Axiom> axioms;
  std::map<EntityId, Annotations> carried_classes;
  std::map<EntityId, Annotations> carried_relations;

  bool carries(const EntityId& entity) const {
    return carried_classes.count(entity) > 0 ||
           carried_relations.count(entity) > 0;
  }
};

/// Whole-ontology view as a module (empty seed signature): how stage
/// commands reload module files written by an earlier stage.
Module as_module(const Ontology& ontology);

/// Lowercase seed/match terms. Insertion folds ASCII case and drops empty
/// strings; membership is set-semantic.
struct TermSet {
  std::set<std::string> terms;

  TermSet() = default;
  explicit TermSet(const std::vector<std::string>& raw);

  void insert(const std::string& term);
  bool empty() const { return terms.empty(); }
  std::size_t size() const { return terms.size(); }

  bool operator==(const TermSet&) const = default;
};

/// Every EntityId occurring in the axiom: sides, relation names, fillers.
Signature sig_of_axiom(const Axiom& axiom);

/// Union of sig_of_axiom over the module's axioms plus its seed signature.
Signature sig_of_module(const Module& module);

Signature sig_union(const Signature& a, const Signature& b);

/// ASCII-only case folding; non-ASCII bytes pass through.
std::string ascii_lower(const std::string& text);

/// Sorts canonically and drops logical duplicates (first occurrence wins).
void canonicalize_axioms(std::vector<Axiom>& axioms);

}  // namespace ontofuse
