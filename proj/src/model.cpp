#include "ontofuse/model.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "ontofuse/error.hpp"

namespace ontofuse {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingId: return "MissingId";
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::DanglingIntersection: return "DanglingIntersection";
    case ErrorCode::EmptyTermSet: return "EmptyTermSet";
    case ErrorCode::InvalidThreshold: return "InvalidThreshold";
    case ErrorCode::UnknownEndpoint: return "UnknownEndpoint";
    case ErrorCode::TooFewModules: return "TooFewModules";
    case ErrorCode::NotAClash: return "NotAClash";
    case ErrorCode::RepairIncomplete: return "RepairIncomplete";
    case ErrorCode::MaxRoundsExceeded: return "MaxRoundsExceeded";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

EntityId EntityId::parse(const std::string& text) {
  auto pos = text.find(':');
  if (pos == std::string::npos || pos == 0)
    return EntityId("", text);
  return EntityId(text.substr(0, pos), text.substr(pos + 1));
}

const char* synonym_scope_name(SynonymScope scope) {
  switch (scope) {
    case SynonymScope::Exact: return "EXACT";
    case SynonymScope::Broad: return "BROAD";
    case SynonymScope::Narrow: return "NARROW";
    case SynonymScope::Related: return "RELATED";
  }
  return "RELATED";
}

void Annotations::add_synonym(Synonym synonym) {
  for (const auto& existing : synonyms)
    if (existing == synonym) return;
  synonyms.push_back(std::move(synonym));
}

ClassExpr ClassExpr::named(EntityId entity) {
  ClassExpr e;
  e.kind = ExprKind::Named;
  e.entity = std::move(entity);
  return e;
}

ClassExpr ClassExpr::some(EntityId relation, EntityId filler) {
  ClassExpr e;
  e.kind = ExprKind::Some;
  e.entity = std::move(relation);
  e.filler = std::move(filler);
  return e;
}

ClassExpr ClassExpr::intersection(std::vector<ClassExpr> conjuncts) {
  if (conjuncts.size() < 2)
    throw std::logic_error("intersection requires at least two conjuncts");
  for (const auto& c : conjuncts)
    if (c.kind == ExprKind::And)
      throw std::logic_error("nested intersections are outside the grammar");
  std::sort(conjuncts.begin(), conjuncts.end());
  ClassExpr e;
  e.kind = ExprKind::And;
  e.conjuncts = std::move(conjuncts);
  return e;
}

std::strong_ordering ClassExpr::operator<=>(const ClassExpr& other) const {
  if (auto c = kind <=> other.kind; c != 0) return c;
  if (auto c = entity <=> other.entity; c != 0) return c;
  if (auto c = filler <=> other.filler; c != 0) return c;
  return std::lexicographical_compare_three_way(
      conjuncts.begin(), conjuncts.end(), other.conjuncts.begin(),
      other.conjuncts.end());
}

std::string ClassExpr::str() const {
  switch (kind) {
    case ExprKind::Named:
      return entity.str();
    case ExprKind::Some:
      return entity.str() + " some " + filler.str();
    case ExprKind::And: {
      std::string out = "(";
      for (std::size_t i = 0; i < conjuncts.size(); ++i) {
        if (i) out += " and ";
        out += conjuncts[i].str();
      }
      out += ")";
      return out;
    }
  }
  return {};
}

Axiom Axiom::subclass_of(EntityId sub, ClassExpr sup, OntologyId provenance) {
  Axiom a;
  a.kind = AxiomKind::SubClassOf;
  a.lhs = std::move(sub);
  a.rhs = std::move(sup);
  a.provenance = std::move(provenance);
  return a;
}

Axiom Axiom::equivalent_to_intersection(EntityId lhs, ClassExpr rhs_and,
                                        OntologyId provenance) {
  if (rhs_and.kind != ExprKind::And)
    throw std::logic_error("equivalent_to_intersection needs an And expr");
  Axiom a;
  a.kind = AxiomKind::EquivalentToIntersection;
  a.lhs = std::move(lhs);
  a.rhs = std::move(rhs_and);
  a.provenance = std::move(provenance);
  return a;
}

Axiom Axiom::disjoint(EntityId a, EntityId b, OntologyId provenance) {
  if (b < a) std::swap(a, b);
  Axiom ax;
  ax.kind = AxiomKind::Disjoint;
  ax.lhs = std::move(a);
  ax.rhs_entity = std::move(b);
  ax.provenance = std::move(provenance);
  return ax;
}

Axiom Axiom::equivalent(EntityId a, EntityId b, OntologyId provenance) {
  if (b < a) std::swap(a, b);
  Axiom ax;
  ax.kind = AxiomKind::Equivalent;
  ax.lhs = std::move(a);
  ax.rhs_entity = std::move(b);
  ax.provenance = std::move(provenance);
  return ax;
}

std::string Axiom::str() const {
  switch (kind) {
    case AxiomKind::SubClassOf:
      return lhs.str() + " subClassOf " + rhs.str();
    case AxiomKind::EquivalentToIntersection:
      return lhs.str() + " equivalentTo " + rhs.str();
    case AxiomKind::Disjoint:
      return lhs.str() + " disjointWith " + rhs_entity.str();
    case AxiomKind::Equivalent:
      return lhs.str() + " equivalentTo " + rhs_entity.str();
  }
  return {};
}

namespace {

std::vector<std::string> split_words(const std::string& text) {
  std::vector<std::string> words;
  std::istringstream in(text);
  std::string word;
  while (in >> word) words.push_back(word);
  return words;
}

[[noreturn]] void bad_axiom(const std::string& text) {
  throw Error(ErrorCode::MalformedLine, "unparseable axiom: " + text);
}

// Grammar: "A some B" | "A" for leaf exprs; "(e1 and e2 ...)" for
// intersections; words never contain spaces or parentheses.
ClassExpr parse_expr_words(const std::vector<std::string>& words,
                           std::size_t begin, std::size_t end,
                           const std::string& text) {
  if (end - begin == 1) return ClassExpr::named(EntityId::parse(words[begin]));
  if (end - begin == 3 && words[begin + 1] == "some")
    return ClassExpr::some(EntityId::parse(words[begin]),
                           EntityId::parse(words[begin + 2]));
  bad_axiom(text);
}

}  // namespace

Axiom Axiom::parse(const std::string& text, OntologyId provenance) {
  auto words = split_words(text);
  if (words.size() < 3) bad_axiom(text);
  const EntityId lhs = EntityId::parse(words[0]);
  const std::string& verb = words[1];
  if (verb == "disjointWith") {
    if (words.size() != 3) bad_axiom(text);
    return Axiom::disjoint(lhs, EntityId::parse(words[2]), provenance);
  }
  if (verb == "equivalentTo" && words[2].front() != '(') {
    if (words.size() != 3) bad_axiom(text);
    return Axiom::equivalent(lhs, EntityId::parse(words[2]), provenance);
  }
  if (verb != "subClassOf" && verb != "equivalentTo") bad_axiom(text);

  std::vector<std::string> rest(words.begin() + 2, words.end());
  ClassExpr rhs;
  if (!rest.empty() && rest.front().front() == '(') {
    rest.front() = rest.front().substr(1);
    if (rest.back().empty() || rest.back().back() != ')') bad_axiom(text);
    rest.back().pop_back();
    // split on "and" at word level
    std::vector<ClassExpr> conjuncts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= rest.size(); ++i) {
      if (i == rest.size() || rest[i] == "and") {
        if (i == start) bad_axiom(text);
        conjuncts.push_back(parse_expr_words(rest, start, i, text));
        start = i + 1;
      }
    }
    if (conjuncts.size() < 2) bad_axiom(text);
    rhs = ClassExpr::intersection(std::move(conjuncts));
  } else {
    rhs = parse_expr_words(rest, 0, rest.size(), text);
  }

  if (verb == "subClassOf") return Axiom::subclass_of(lhs, rhs, provenance);
  if (rhs.kind != ExprKind::And) bad_axiom(text);
  return Axiom::equivalent_to_intersection(lhs, rhs, provenance);
}

std::strong_ordering logical_order(const Axiom& a, const Axiom& b) {
  if (auto c = a.kind <=> b.kind; c != 0) return c;
  if (auto c = a.lhs <=> b.lhs; c != 0) return c;
  if (auto c = a.rhs <=> b.rhs; c != 0) return c;
  return a.rhs_entity <=> b.rhs_entity;
}

bool logical_less(const Axiom& a, const Axiom& b) {
  return logical_order(a, b) < 0;
}

bool logical_eq(const Axiom& a, const Axiom& b) {
  return logical_order(a, b) == 0;
}

Signature sig_of_axiom(const Axiom& axiom) {
  Signature sig;
  sig.insert(axiom.lhs);
  switch (axiom.kind) {
    case AxiomKind::SubClassOf:
    case AxiomKind::EquivalentToIntersection: {
      auto add_expr = [&sig](const ClassExpr& e, auto&& self) -> void {
        switch (e.kind) {
          case ExprKind::Named:
            sig.insert(e.entity);
            break;
          case ExprKind::Some:
            sig.insert(e.entity);
            sig.insert(e.filler);
            break;
          case ExprKind::And:
            for (const auto& c : e.conjuncts) self(c, self);
            break;
        }
      };
      add_expr(axiom.rhs, add_expr);
      break;
    }
    case AxiomKind::Disjoint:
    case AxiomKind::Equivalent:
      sig.insert(axiom.rhs_entity);
      break;
  }
  return sig;
}

Signature sig_of_module(const Module& module) {
  Signature sig = module.seed_signature;
  for (const auto& axiom : module.axioms) {
    Signature axiom_sig = sig_of_axiom(axiom);
    sig.insert(axiom_sig.begin(), axiom_sig.end());
  }
  return sig;
}

Signature sig_union(const Signature& a, const Signature& b) {
  Signature out = a;
  out.insert(b.begin(), b.end());
  return out;
}

Module as_module(const Ontology& ontology) {
  Module module;
  module.source = ontology.id;
  module.axioms = ontology.axioms;
  module.carried_classes = ontology.classes;
  module.carried_relations = ontology.relations;
  return module;
}

std::string ascii_lower(const std::string& text) {
  std::string out = text;
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

TermSet::TermSet(const std::vector<std::string>& raw) {
  for (const auto& term : raw) insert(term);
}

void TermSet::insert(const std::string& term) {
  std::string folded = ascii_lower(term);
  if (!folded.empty()) terms.insert(std::move(folded));
}

void canonicalize_axioms(std::vector<Axiom>& axioms) {
  std::stable_sort(axioms.begin(), axioms.end(), logical_less);
  axioms.erase(std::unique(axioms.begin(), axioms.end(), logical_eq),
               axioms.end());
}

}  // namespace ontofuse
