#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "ontofuse/error.hpp"
#include "ontofuse/extract.hpp"
#include "ontofuse/obo.hpp"
#include "support/oracles.hpp"

using namespace ontofuse;

namespace {

EntityId id(const std::string& text) { return EntityId::parse(text); }

Axiom sub(const std::string& a, const std::string& b) {
  return Axiom::subclass_of(id(a), ClassExpr::named(id(b)), "o");
}

Ontology ontology_of(std::vector<Axiom> axioms) {
  Ontology onto;
  onto.id = "o";
  for (const Axiom& ax : axioms)
    for (const EntityId& e : sig_of_axiom(ax))
      if (!onto.declares(e)) onto.classes[e] = {};
  onto.axioms = std::move(axioms);
  canonicalize_axioms(onto.axioms);
  return onto;
}

bool same_axioms(const std::vector<Axiom>& a, const std::vector<Axiom>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!logical_eq(a[i], b[i])) return false;
  return true;
}

}  // namespace

TEST_CASE("locality of the documented single-axiom cases") {
  const Signature only_b = {id("X:B")};
  const Signature only_a = {id("X:A")};

  auto ab = Axiom::subclass_of(id("X:A"), ClassExpr::named(id("X:B")), "o");
  CHECK(is_bot_local(ab, only_b));        // bot ⊑ B says nothing
  CHECK_FALSE(is_bot_local(ab, only_a));  // A ⊑ bot empties A

  auto dis = Axiom::disjoint(id("X:A"), id("X:B"), "o");
  CHECK(is_bot_local(dis, only_a));  // Disjoint(A, bot) holds trivially
  CHECK(is_bot_local(dis, only_b));
  CHECK_FALSE(is_bot_local(dis, Signature{id("X:A"), id("X:B")}));

  auto eq = Axiom::equivalent(id("X:A"), id("X:B"), "o");
  CHECK(is_bot_local(eq, Signature{}));
  CHECK_FALSE(is_bot_local(eq, only_a));  // A ≡ bot constrains A
  CHECK_FALSE(is_bot_local(eq, only_b));
}

TEST_CASE("locality of existentials and intersections") {
  // A ⊑ r some F: local iff A out of sigma, regardless of r/F.
  auto some = Axiom::subclass_of(
      id("X:A"), ClassExpr::some(id("r0"), id("X:F")), "o");
  CHECK(is_bot_local(some, Signature{id("r0"), id("X:F")}));
  CHECK_FALSE(is_bot_local(some, Signature{id("X:A")}));

  // A ≡ (B and r some F): local iff A out AND some conjunct bot.
  auto eqint = Axiom::equivalent_to_intersection(
      id("X:A"),
      ClassExpr::intersection({ClassExpr::named(id("X:B")),
                               ClassExpr::some(id("r0"), id("X:F"))}),
      "o");
  CHECK(is_bot_local(eqint, Signature{id("X:B")}));  // filler bot, A out
  CHECK_FALSE(is_bot_local(eqint, Signature{id("X:A")}));  // A in sigma
  // Every symbol present: rhs is not bot, so the axiom defines A.
  CHECK_FALSE(is_bot_local(
      eqint, Signature{id("X:B"), id("r0"), id("X:F")}));

  // expr_locality never reports Top for this grammar.
  CHECK(expr_locality(ClassExpr::named(id("X:B")), Signature{id("X:B")}) ==
        LocalityClass::Neither);
  CHECK(expr_locality(ClassExpr::named(id("X:B")), Signature{}) ==
        LocalityClass::Bot);
}

TEST_CASE("chain extraction follows the seed upward only") {
  Ontology onto = ontology_of({sub("X:A", "X:B"), sub("X:B", "X:C")});

  Module from_a = extract_module(onto, {id("X:A")});
  CHECK(from_a.axioms.size() == 2);

  Module from_c = extract_module(onto, {id("X:C")});
  CHECK(from_c.axioms.empty());

  Module from_b = extract_module(onto, {id("X:B")});
  REQUIRE(from_b.axioms.size() == 1);
  CHECK(from_b.axioms[0].str() == "X:B subClassOf X:C");
}

TEST_CASE("disjointness joins once both sides are in the signature") {
  Ontology onto = ontology_of(
      {sub("X:A", "X:C"), sub("X:B", "X:D"),
       Axiom::disjoint(id("X:C"), id("X:D"), "o")});
  Module m = extract_module(onto, {id("X:A"), id("X:B")});
  CHECK(m.axioms.size() == 3);

  Module only_a = extract_module(onto, {id("X:A")});
  CHECK(only_a.axioms.size() == 1);  // disjointness stays local
}

TEST_CASE("module carries annotations for its final signature") {
  Ontology onto = ontology_of({sub("X:A", "X:B")});
  onto.classes[id("X:B")].name = "b side";
  onto.classes[id("X:Z")].name = "unrelated";
  Module m = extract_module(onto, {id("X:A")});
  CHECK(m.carries(id("X:A")));
  CHECK(m.carried_classes.at(id("X:B")).name == "b side");
  CHECK_FALSE(m.carries(id("X:Z")));
  CHECK(m.seed_signature == Signature{id("X:A")});
}

TEST_CASE("seeds not present in the ontology are inert") {
  Ontology onto = ontology_of({sub("X:A", "X:B")});
  Module m = extract_module(onto, {id("Q:404")});
  CHECK(m.axioms.empty());
  CHECK(m.seed_signature == Signature{id("Q:404")});
}

TEST_CASE("extraction equals the rescan oracle on random ontologies") {
  std::mt19937 rng(2026);
  for (int i = 0; i < 300; ++i) {
    Ontology onto = oracles::random_ontology(rng, 12, 10);
    Signature seed = oracles::random_seed(rng, onto);
    Module m = extract_module(onto, seed);
    std::vector<Axiom> expected = oracles::extract_rescan(onto, seed);
    CHECK(same_axioms(m.axioms, expected));
  }
}

TEST_CASE("extraction is monotone in the seed") {
  std::mt19937 rng(31);
  for (int i = 0; i < 100; ++i) {
    Ontology onto = oracles::random_ontology(rng, 12, 10);
    Signature small = oracles::random_seed(rng, onto);
    Signature large = small;
    for (const EntityId& e : oracles::random_seed(rng, onto)) large.insert(e);

    Module ms = extract_module(onto, small);
    Module ml = extract_module(onto, large);
    for (const Axiom& ax : ms.axioms) {
      CHECK(std::any_of(ml.axioms.begin(), ml.axioms.end(),
                        [&](const Axiom& other) {
                          return logical_eq(ax, other);
                        }));
    }
  }
}

TEST_CASE("extraction ignores axiom order") {
  std::mt19937 rng(55);
  for (int i = 0; i < 50; ++i) {
    Ontology onto = oracles::random_ontology(rng, 12, 10);
    Signature seed = oracles::random_seed(rng, onto);
    Module before = extract_module(onto, seed);

    Ontology shuffled = onto;
    std::shuffle(shuffled.axioms.begin(), shuffled.axioms.end(), rng);
    Module after = extract_module(shuffled, seed);
    CHECK(same_axioms(before.axioms, after.axioms));
    CHECK(sig_of_module(before) == sig_of_module(after));
  }
}

TEST_CASE("extraction is idempotent") {
  std::mt19937 rng(81);
  for (int i = 0; i < 50; ++i) {
    Ontology onto = oracles::random_ontology(rng, 12, 10);
    Signature seed = oracles::random_seed(rng, onto);
    Module once = extract_module(onto, seed);

    // Re-extracting over the module's own signature adds nothing.
    Module twice = extract_module(onto, sig_of_module(once));
    CHECK(same_axioms(once.axioms, twice.axioms));
  }
}

TEST_CASE("enrich_terms adds ids and names of signature classes") {
  Ontology onto = ontology_of({sub("GO:0034142", "GO:0007165")});
  onto.classes[id("GO:0034142")].name =
      "toll-like receptor 4 signaling pathway";
  Module m = extract_module(onto, {id("GO:0034142")});

  TermSet terms({"toll"});
  TermSet enriched = enrich_terms(terms, m);
  CHECK(enriched.terms.count("go:0034142") == 1);
  CHECK(enriched.terms.count("toll-like receptor 4 signaling pathway") == 1);
  CHECK(enriched.terms.count("go:0007165") == 1);  // id even without a name
  CHECK(enriched.terms.count("toll") == 1);

  // Idempotent.
  CHECK(enrich_terms(enriched, m) == enriched);

  // Empty module changes nothing.
  Module empty;
  CHECK(enrich_terms(terms, empty) == terms);
}

TEST_CASE("enrich fields are configurable") {
  Ontology onto = ontology_of({sub("X:A", "X:B")});
  onto.classes[id("X:A")].name = "alpha thing";
  onto.classes[id("X:A")].add_synonym({"alf", SynonymScope::Exact});
  Module m = extract_module(onto, {id("X:A")});

  EnrichFields ids_only;
  ids_only.ids = true;
  ids_only.names = false;
  TermSet t1 = enrich_terms(TermSet({"seed"}), m, ids_only);
  CHECK(t1.terms.count("x:a") == 1);
  CHECK(t1.terms.count("alpha thing") == 0);

  EnrichFields with_syn;
  with_syn.synonyms = true;
  TermSet t2 = enrich_terms(TermSet({"seed"}), m, with_syn);
  CHECK(t2.terms.count("alf") == 1);
}

TEST_CASE("relations never contribute terms") {
  Ontology onto;
  onto.id = "o";
  onto.classes[id("X:A")] = {};
  onto.classes[id("X:F")] = {};
  onto.relations[id("part_of")] = {};
  onto.relations[id("part_of")].name = "part of";
  onto.axioms = {Axiom::subclass_of(
      id("X:A"), ClassExpr::some(id("part_of"), id("X:F")), "o")};
  Module m = extract_module(onto, {id("X:A")});
  TermSet t = enrich_terms(TermSet({"seed"}), m);
  CHECK(t.terms.count("part_of") == 0);
  CHECK(t.terms.count("part of") == 0);
  CHECK(t.terms.count("x:f") == 1);
}

TEST_CASE("single ontology fixpoint converges in two rounds") {
  Ontology onto = ontology_of({sub("X:A", "X:B")});
  onto.classes[id("X:A")].name = "alpha receptor";
  auto result = run_fixpoint({onto}, TermSet({"alpha"}));
  CHECK(result.trace.rounds.size() == 2);
  REQUIRE(result.modules.size() == 1);
  CHECK(result.modules[0].axioms.size() == 1);
  CHECK(match_fixpoint_test({onto}, result.final_terms, result.modules));
}

TEST_CASE("seeds matching nothing give empty modules in two rounds") {
  Ontology a = ontology_of({sub("X:A", "X:B")});
  Ontology b = ontology_of({sub("Y:A", "Y:B")});
  b.id = "o2";
  auto result = run_fixpoint({a, b}, TermSet({"zzz-nothing"}));
  CHECK(result.trace.rounds.size() == 2);
  CHECK(result.modules[0].axioms.empty());
  CHECK(result.modules[1].axioms.empty());
  CHECK(match_fixpoint_test({a, b}, result.final_terms, result.modules));
}

TEST_CASE("cross-ontology enrichment grows the second module") {
  // O1's module introduces the label "bridgeword" which matches O2.
  Ontology o1 = ontology_of({sub("A:1", "A:2")});
  o1.id = "o1";
  o1.classes[id("A:1")].name = "seedword item";
  o1.classes[id("A:2")].name = "bridgeword";

  Ontology o2 = ontology_of({sub("B:1", "B:2")});
  o2.id = "o2";
  o2.classes[id("B:1")].name = "about bridgeword stuff";

  // Round 1: o2 sees only "seedword", matches nothing... but after o1's
  // module enriches the terms with "bridgeword", round 1's o2 pass
  // already matches B:1 (within-round enrichment). Stability needs one
  // more full round.
  auto result = run_fixpoint({o1, o2}, TermSet({"seedword"}));
  REQUIRE(result.modules.size() == 2);
  CHECK(result.modules[0].axioms.size() == 1);
  CHECK(result.modules[1].axioms.size() == 1);
  CHECK(result.trace.rounds.size() == 2);
  CHECK(match_fixpoint_test({o1, o2}, result.final_terms, result.modules));

  // Reversed order: o2 matches nothing in round 1 until o1 has run, so
  // o2's module grows in round 2 and stability arrives in round 3.
  auto reversed = run_fixpoint({o2, o1}, TermSet({"seedword"}));
  CHECK(reversed.trace.rounds.size() == 3);
  CHECK(reversed.modules[0].axioms.size() == 1);
  CHECK(match_fixpoint_test({o2, o1}, reversed.final_terms,
                            reversed.modules));

  // Signature union is order independent.
  Signature u1 = sig_union(sig_of_module(result.modules[0]),
                           sig_of_module(result.modules[1]));
  Signature u2 = sig_union(sig_of_module(reversed.modules[0]),
                           sig_of_module(reversed.modules[1]));
  CHECK(u1 == u2);
}

TEST_CASE("match_fixpoint_test is false before convergence") {
  Ontology o1 = ontology_of({sub("A:1", "A:2")});
  o1.id = "o1";
  o1.classes[id("A:1")].name = "seedword item";
  o1.classes[id("A:2")].name = "bridgeword";

  Ontology o2 = ontology_of({sub("B:1", "B:2")});
  o2.id = "o2";
  o2.classes[id("B:1")].name = "about bridgeword stuff";

  // A hand-made "round 0" state: modules extracted from the raw seed only.
  TermSet seeds({"seedword"});
  Module m1 = extract_module(o1, match_terms(o1, seeds).matched);
  Module m2 = extract_module(o2, match_terms(o2, seeds).matched);
  CHECK_FALSE(match_fixpoint_test({o1, o2}, seeds, {m1, m2}));
}

TEST_CASE("trace records non-decreasing signature sizes") {
  auto nci = parse_obo_file(ONTOFUSE_FIXTURE_DIR "/nci.obo", "nci").ontology;
  auto mro = parse_obo_file(ONTOFUSE_FIXTURE_DIR "/mro.obo", "mro").ontology;
  auto go = parse_obo_file(ONTOFUSE_FIXTURE_DIR "/go.obo", "go").ontology;

  auto result = run_fixpoint({nci, mro, go}, TermSet({"toll", "tlr"}));
  REQUIRE(result.trace.rounds.size() == 3);
  for (std::size_t o = 0; o < 3; ++o) {
    for (std::size_t r = 1; r < result.trace.rounds.size(); ++r) {
      CHECK(result.trace.rounds[r].per_ontology[o].signature_size >=
            result.trace.rounds[r - 1].per_ontology[o].signature_size);
    }
  }
  // Hand-traced expectations for the toy corpus.
  const auto& r1 = result.trace.rounds[0].per_ontology;
  CHECK(r1[0].signature_size == 6);
  CHECK(r1[1].signature_size == 4);
  CHECK(r1[2].signature_size == 6);
  const auto& r2 = result.trace.rounds[1].per_ontology;
  CHECK(r2[0].signature_size == 8);  // NCI grows via enrichment
  CHECK(match_fixpoint_test({nci, mro, go}, result.final_terms,
                            result.modules));

  const std::string tsv = trace_tsv(result.trace);
  CHECK(tsv.find("1\tnci\t14\t6\t5\n") != std::string::npos);
  CHECK(tsv.find("2\tnci\t30\t8\t7\n") != std::string::npos);
}

TEST_CASE("max rounds is enforced") {
  Ontology o1 = ontology_of({sub("A:1", "A:2")});
  o1.id = "o1";
  o1.classes[id("A:1")].name = "seedword item";
  o1.classes[id("A:2")].name = "bridgeword";
  Ontology o2 = ontology_of({sub("B:1", "B:2")});
  o2.id = "o2";
  o2.classes[id("B:1")].name = "about bridgeword stuff";

  FixpointOptions opts;
  opts.max_rounds = 2;  // the reversed order needs 3
  try {
    run_fixpoint({o2, o1}, TermSet({"seedword"}), opts);
    FAIL("expected MaxRoundsExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MaxRoundsExceeded);
  }
}
