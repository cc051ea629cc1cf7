#pragma once

#include <string>
#include <vector>

#include "ontofuse/match.hpp"
#include "ontofuse/model.hpp"

namespace ontofuse {

/// Verdict of an expression under the locality check. This grammar has no
/// top-producing forms, so Top is never assigned; it exists to name the
/// third case of the classification.
enum class LocalityClass { Bot, Top, Neither };

/// Bot iff interpreting every out-of-sigma symbol as the empty concept
/// makes the expression empty: Named(e) with e not in sigma; Some(r, f)
/// with r or f not in sigma; And with any bot conjunct.
LocalityClass expr_locality(const ClassExpr& expr, const Signature& sigma);

/// True when the axiom is a tautology under the bot interpretation of
/// out-of-sigma symbols, i.e. it carries no knowledge about sigma.
bool is_bot_local(const Axiom& axiom, const Signature& sigma);

/// Syntactic bot-locality module: starts from the seed signature and pulls
/// in every non-local axiom until stable. The result is independent of
/// axiom iteration order. Annotations are carried for every entity of the
/// final signature the ontology declares.
Module extract_module(const Ontology& ontology, const Signature& seed);

/// Which entity strings feed the term enrichment.
struct EnrichFields {
  bool ids = true;
  bool names = true;
  bool synonyms = false;
};

/// Unions the terms with the lowercase id (and name, when present) of
/// every class entity in the module signature. Relations contribute
/// nothing; they are not matched.
TermSet enrich_terms(const TermSet& terms, const Module& module,
                     const EnrichFields& fields = {});

struct RoundEntry {
  OntologyId ontology;
  std::size_t term_count = 0;
  std::size_t signature_size = 0;
  std::size_t axiom_count = 0;
};

struct FixpointRound {
  int round_index = 0;  // 1-based
  std::vector<RoundEntry> per_ontology;
};

struct FixpointTrace {
  std::vector<FixpointRound> rounds;
};

std::string trace_tsv(const FixpointTrace& trace);

struct FixpointOptions {
  MatchMode match_mode = MatchMode::Substring;
  EnrichFields enrich;
  int max_rounds = 32;
};

struct FixpointResult {
  std::vector<Module> modules;  // one per ontology, input order
  FixpointTrace trace;
  TermSet final_terms;
};

/// Iterates rounds over the ontologies in the given order: match the
/// current terms, extract a module from the matched signature unioned with
/// the previous round's seed, then enrich the terms before the next
/// ontology. Stops when the union of module signatures repeats between
/// consecutive rounds. Throws Error{MaxRoundsExceeded} past max_rounds.
FixpointResult run_fixpoint(const std::vector<Ontology>& ontologies,
                            const TermSet& seeds,
                            const FixpointOptions& options = {});

/// True iff enriching the terms with every module's contribution leaves
/// all per-ontology match reports unchanged — the Match(T) = T criterion.
bool match_fixpoint_test(const std::vector<Ontology>& ontologies,
                         const TermSet& terms,
                         const std::vector<Module>& modules,
                         MatchMode mode = MatchMode::Substring,
                         const EnrichFields& fields = {});

}  // namespace ontofuse
