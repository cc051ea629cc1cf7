#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "ontofuse/error.hpp"
#include "ontofuse/obo.hpp"
#include "support/oracles.hpp"
#include "support/proc.hpp"

using namespace ontofuse;

namespace {

EntityId id(const std::string& text) { return EntityId::parse(text); }

bool same_ontology(const Ontology& a, const Ontology& b) {
  if (a.id != b.id) return false;
  if (a.classes != b.classes) return false;
  if (a.relations != b.relations) return false;
  if (a.axioms.size() != b.axioms.size()) return false;
  for (std::size_t i = 0; i < a.axioms.size(); ++i)
    if (!logical_eq(a.axioms[i], b.axioms[i])) return false;
  return true;
}

const char* kFixtures[] = {
    ONTOFUSE_FIXTURE_DIR "/nci.obo",
    ONTOFUSE_FIXTURE_DIR "/mro.obo",
    ONTOFUSE_FIXTURE_DIR "/go.obo",
};

}  // namespace

TEST_CASE("basic term stanza maps to a named subclass axiom") {
  auto r = parse_obo("[Term]\nid: A:1\nname: alpha\nis_a: A:2\n", "o");
  const Ontology& onto = r.ontology;
  CHECK(onto.classes.at(id("A:1")).name == "alpha");
  REQUIRE(onto.axioms.size() == 1);
  CHECK(onto.axioms[0].str() == "A:1 subClassOf A:2");
  CHECK(onto.axioms[0].provenance == "o");
}

TEST_CASE("relationship tag becomes an existential restriction") {
  auto r = parse_obo("[Term]\nid: A:1\nrelationship: part_of A:3\n", "o");
  REQUIRE(r.ontology.axioms.size() == 1);
  CHECK(r.ontology.axioms[0].str() == "A:1 subClassOf part_of some A:3");
  // part_of was auto-declared as a relation, A:3 as a class.
  CHECK(r.ontology.relations.count(id("part_of")) == 1);
  CHECK(r.ontology.classes.count(id("A:3")) == 1);
}

TEST_CASE("two intersection_of lines define the class") {
  auto r = parse_obo(
      "[Term]\nid: A:1\nintersection_of: B:1\nintersection_of: part_of B:2\n",
      "o");
  REQUIRE(r.ontology.axioms.size() == 1);
  CHECK(r.ontology.axioms[0].kind == AxiomKind::EquivalentToIntersection);
  CHECK(r.ontology.axioms[0].str() ==
        "A:1 equivalentTo (B:1 and part_of some B:2)");
}

TEST_CASE("a single intersection_of line is an error") {
  CHECK_THROWS_AS(parse_obo("[Term]\nid: A:1\nintersection_of: B:1\n", "o"),
                  Error);
  try {
    parse_obo("[Term]\nid: A:1\nintersection_of: B:1\n", "o");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DanglingIntersection);
  }
}

TEST_CASE("comments and qualifier blocks are stripped outside quotes") {
  auto r = parse_obo(
      "! a file comment\n"
      "[Term]\n"
      "id: A:1\n"
      "name: alpha ! trailing remark\n"
      "is_a: A:2 {source=\"curator\"} ! both\n",
      "o");
  CHECK(r.ontology.classes.at(id("A:1")).name == "alpha");
  REQUIRE(r.ontology.axioms.size() == 1);
  CHECK(r.ontology.axioms[0].str() == "A:1 subClassOf A:2");
}

TEST_CASE("escaped specials survive outside quotes") {
  auto r = parse_obo("[Term]\nid: A:1\nname: five \\! four \\{x\\}\n", "o");
  CHECK(r.ontology.classes.at(id("A:1")).name == "five ! four {x}");
}

TEST_CASE("def keeps the quoted text and drops the dbxref list") {
  auto r = parse_obo(
      "[Term]\nid: A:1\ndef: \"receptor [of] the \\\"TLR\\\" family\" "
      "[PMID:123, ISBN:456]\n",
      "o");
  CHECK(r.ontology.classes.at(id("A:1")).definition ==
        "receptor [of] the \"TLR\" family");
}

TEST_CASE("exclamation marks inside quoted strings are content") {
  auto r = parse_obo("[Term]\nid: A:1\ndef: \"watch out! really\" []\n", "o");
  CHECK(r.ontology.classes.at(id("A:1")).definition == "watch out! really");
}

TEST_CASE("synonym scope keywords are honored, default RELATED") {
  auto r = parse_obo(
      "[Term]\nid: A:1\n"
      "synonym: \"s1\" EXACT []\n"
      "synonym: \"s2\" BROAD []\n"
      "synonym: \"s3\" NARROW []\n"
      "synonym: \"s4\" RELATED []\n"
      "synonym: \"s5\" []\n"
      "synonym: \"s1\" EXACT [dup]\n",
      "o");
  const auto& syns = r.ontology.classes.at(id("A:1")).synonyms;
  REQUIRE(syns.size() == 5);  // the duplicate collapsed
  CHECK(syns[0].scope == SynonymScope::Exact);
  CHECK(syns[1].scope == SynonymScope::Broad);
  CHECK(syns[2].scope == SynonymScope::Narrow);
  CHECK(syns[3].scope == SynonymScope::Related);
  CHECK(syns[4].scope == SynonymScope::Related);
}

TEST_CASE("alt_id lines accumulate without duplicates") {
  auto r = parse_obo(
      "[Term]\nid: A:1\nalt_id: A:9\nalt_id: A:8\nalt_id: A:9\n", "o");
  const auto& alts = r.ontology.classes.at(id("A:1")).alt_ids;
  REQUIRE(alts.size() == 2);
  CHECK(alts[0] == id("A:9"));
  CHECK(alts[1] == id("A:8"));
}

TEST_CASE("is_obsolete true is recorded; axioms are still parsed") {
  auto r = parse_obo("[Term]\nid: A:1\nis_obsolete: true\nis_a: A:2\n", "o");
  CHECK(r.ontology.classes.at(id("A:1")).is_obsolete);
  CHECK(r.ontology.axioms.size() == 1);

  auto r2 = parse_obo("[Term]\nid: A:1\nis_obsolete: false\n", "o");
  CHECK_FALSE(r2.ontology.classes.at(id("A:1")).is_obsolete);

  auto r3 = parse_obo("[Term]\nid: A:1\nis_obsolete: maybe\n", "o");
  CHECK_FALSE(r3.ontology.classes.at(id("A:1")).is_obsolete);
  CHECK(r3.warnings.size() == 1);
}

TEST_CASE("disjoint_from and equivalent_to parse to normalized axioms") {
  auto r = parse_obo(
      "[Term]\nid: B:2\ndisjoint_from: A:1\nequivalent_to: C:3\n", "o");
  REQUIRE(r.ontology.axioms.size() == 2);
  CHECK(r.ontology.axioms[0].str() == "A:1 disjointWith B:2");  // sides sorted
  CHECK(r.ontology.axioms[1].str() == "B:2 equivalentTo C:3");
}

TEST_CASE("unknown tags and foreign stanzas produce warnings, not errors") {
  auto r = parse_obo(
      "[Term]\nid: A:1\nxref: FOO:1\n\n[Instance]\nid: A:2\n", "o");
  CHECK(r.ontology.classes.count(id("A:1")) == 1);
  CHECK(r.ontology.classes.count(id("A:2")) == 0);
  REQUIRE(r.warnings.size() == 2);
  CHECK(r.warnings[0].message.find("unknown tag 'xref'") != std::string::npos);
  CHECK(r.warnings[1].message.find("[Instance]") != std::string::npos);
}

TEST_CASE("typedef stanzas declare relations; logical tags there warn") {
  auto r = parse_obo(
      "[Typedef]\nid: part_of\nname: part of\nis_a: overlaps\n", "o");
  CHECK(r.ontology.relations.at(id("part_of")).name == "part of");
  CHECK(r.ontology.axioms.empty());
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.warnings[0].message.find("logical tag 'is_a'") != std::string::npos);
}

TEST_CASE("stanza without id is an error") {
  try {
    parse_obo("[Term]\nname: nameless\n", "o");
    FAIL("expected MissingId");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingId);
  }
}

TEST_CASE("tag line without separator is an error") {
  try {
    parse_obo("[Term]\nid A:1\n", "o");
    FAIL("expected MalformedLine");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MalformedLine);
  }
  CHECK_THROWS_AS(parse_obo("[Term\nid: A:1\n", "o"), Error);
}

TEST_CASE("duplicate stanzas merge with a warning") {
  auto r = parse_obo(
      "[Term]\nid: A:1\nname: first\n\n[Term]\nid: A:1\nname: second\nis_a: "
      "A:2\n",
      "o");
  // First name wins; the conflict and the duplicate both warn.
  CHECK(r.ontology.classes.at(id("A:1")).name == "first");
  CHECK(r.ontology.axioms.size() == 1);
  bool saw_dup = false, saw_conflict = false;
  for (const auto& w : r.warnings) {
    if (w.message.find("duplicate stanza") != std::string::npos) saw_dup = true;
    if (w.message.find("conflicting name") != std::string::npos)
      saw_conflict = true;
  }
  CHECK(saw_dup);
  CHECK(saw_conflict);
}

TEST_CASE("auto-declared entities carry a warning") {
  auto r = parse_obo("[Term]\nid: A:1\nis_a: A:2\n", "o");
  CHECK(r.ontology.classes.count(id("A:2")) == 1);
  bool saw = false;
  for (const auto& w : r.warnings)
    if (w.message.find("auto-declared class A:2") != std::string::npos)
      saw = true;
  CHECK(saw);
}

TEST_CASE("duplicate logical lines collapse to one axiom") {
  auto r = parse_obo("[Term]\nid: A:1\nis_a: A:2\nis_a: A:2\n", "o");
  CHECK(r.ontology.axioms.size() == 1);
}

TEST_CASE("header tags are kept and queryable") {
  auto doc = parse_document(
      "format-version: 1.2\nontology: go\ndate: ignored\n\n[Term]\nid: A:1\n");
  CHECK(doc.header_values("ontology") == std::vector<std::string>{"go"});
  CHECK(doc.header_values("format-version") ==
        std::vector<std::string>{"1.2"});
  CHECK(doc.header_values("missing").empty());
  REQUIRE(doc.stanzas.size() == 1);
  CHECK(doc.stanzas[0].raw_kind == "Term");
}

TEST_CASE("document round-trip preserves stanza and tag order") {
  const std::string text =
      "format-version: 1.2\n"
      "ontology: demo\n"
      "\n"
      "[Term]\n"
      "id: B:2\n"
      "name: second listed first\n"
      "\n"
      "[Term]\n"
      "id: A:1\n"
      "name: alpha\n"
      "is_a: B:2\n";
  const OboDocument doc = parse_document(text);
  const std::string out = serialize_document(doc);
  const OboDocument again = parse_document(out);
  REQUIRE(again.stanzas.size() == 2);
  CHECK(again.stanzas[0].tags[0].value == "B:2");  // order untouched
  CHECK(again.header.size() == doc.header.size());
  for (std::size_t i = 0; i < doc.header.size(); ++i)
    CHECK(again.header[i] == doc.header[i]);
}

TEST_CASE("CRLF and a UTF-8 BOM are tolerated") {
  auto r = parse_obo(
      "\xEF\xBB\xBF" "format-version: 1.2\r\n\r\n[Term]\r\nid: A:1\r\nname: "
      "alpha\r\n",
      "o");
  CHECK(r.ontology.classes.at(id("A:1")).name == "alpha");
}

TEST_CASE("invalid UTF-8 bytes are replaced, not fatal") {
  std::string text = "[Term]\nid: A:1\nname: bad\xFF" "byte\n";
  auto r = parse_obo(text, "o");
  CHECK(r.ontology.classes.at(id("A:1")).name == "bad?byte");
}

TEST_CASE("serializing an empty ontology yields a header-only document") {
  Ontology onto;
  onto.id = "empty";
  const std::string out = serialize_obo(onto);
  CHECK(out.find("format-version: 1.2") == 0);
  CHECK(out.find("ontology: empty") != std::string::npos);
  CHECK(out.find("generated-by: ontofuse") != std::string::npos);
  CHECK(out.find("[Term]") == std::string::npos);
}

TEST_CASE("equivalence axioms serialize as equivalent_to lines") {
  Ontology onto;
  onto.id = "demo";
  onto.classes[id("A:1")] = {};
  onto.classes[id("B:2")] = {};
  onto.axioms = {Axiom::equivalent(id("A:1"), id("B:2"), "demo")};
  const std::string out = serialize_obo(onto);
  CHECK(out.find("equivalent_to: B:2") != std::string::npos);
  // And also anchored at the lexically smaller side only.
  CHECK(out.find("equivalent_to: A:1") == std::string::npos);
}

TEST_CASE("an And superclass splits into is_a plus relationship lines") {
  Ontology onto;
  onto.id = "demo";
  onto.classes[id("A:1")] = {};
  onto.classes[id("B:1")] = {};
  onto.classes[id("B:2")] = {};
  onto.relations[id("part_of")] = {};
  onto.axioms = {Axiom::subclass_of(
      id("A:1"),
      ClassExpr::intersection({ClassExpr::named(id("B:1")),
                               ClassExpr::some(id("part_of"), id("B:2"))}),
      "demo")};
  const std::string out = serialize_obo(onto);
  CHECK(out.find("is_a: B:1") != std::string::npos);
  CHECK(out.find("relationship: part_of B:2") != std::string::npos);
  // Re-reading yields the two split axioms.
  auto again = parse_obo(out, "demo");
  CHECK(again.ontology.axioms.size() == 2);
}

TEST_CASE("names needing escapes survive a round-trip") {
  Ontology onto;
  onto.id = "demo";
  Annotations ann;
  ann.name = "weird {name} with ! and \\ inside";
  ann.definition = "a \"quoted\" def\nwith a newline";
  onto.classes[id("A:1")] = ann;
  auto again = parse_obo(serialize_obo(onto), "demo");
  CHECK(again.ontology.classes.at(id("A:1")) == ann);
}

TEST_CASE("fixture files are parse-serialize-parse fixpoints") {
  for (const char* path : kFixtures) {
    auto first = parse_obo_file(path);
    const std::string s1 = serialize_obo(first.ontology);
    auto second = parse_obo(s1, first.ontology.id);
    CHECK(same_ontology(first.ontology, second.ontology));
    // Serialization is idempotent from the first normal form on.
    CHECK(serialize_obo(second.ontology) == s1);
  }
}

TEST_CASE("warning lists are deterministic") {
  const std::string text = testsupport::slurp(ONTOFUSE_FIXTURE_DIR "/go.obo");
  auto a = parse_obo(text, "go");
  auto b = parse_obo(text, "go");
  REQUIRE(a.warnings.size() == b.warnings.size());
  for (std::size_t i = 0; i < a.warnings.size(); ++i) {
    CHECK(a.warnings[i].line == b.warnings[i].line);
    CHECK(a.warnings[i].message == b.warnings[i].message);
  }
}

TEST_CASE("parse_obo_file prefers the ontology header tag for the id") {
  const auto dir = testsupport::fresh_dir("obo-ids");
  write_file((dir / "stemfile.obo").string(),
             "format-version: 1.2\nontology: declared\n\n[Term]\nid: A:1\n");
  CHECK(parse_obo_file((dir / "stemfile.obo").string()).ontology.id ==
        "declared");

  write_file((dir / "bare.obo").string(), "[Term]\nid: A:1\n");
  CHECK(parse_obo_file((dir / "bare.obo").string()).ontology.id == "bare");

  // An explicit override beats both.
  CHECK(parse_obo_file((dir / "stemfile.obo").string(), "forced").ontology.id ==
        "forced");
}

TEST_CASE("reading a missing file reports IoError") {
  try {
    parse_obo_file("/nonexistent/nowhere.obo");
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoError);
  }
}

TEST_CASE("module file names follow the label_from_source convention") {
  CHECK(module_file_name("Toll", "pathway") == "Toll_from_pathway.obo");
}

TEST_CASE("parser survives arbitrary bytes") {
  std::mt19937 rng(4242);
  std::uniform_int_distribution<int> byte(0, 255);
  std::uniform_int_distribution<std::size_t> len(0, 2000);
  for (int round = 0; round < 200; ++round) {
    std::string text;
    const std::size_t n = len(rng);
    text.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
      text.push_back(static_cast<char>(byte(rng)));
    try {
      auto r = parse_obo(text, "fuzz");
      (void)r;
    } catch (const Error&) {
      // Listed error codes are acceptable outcomes; crashes are not.
    }
  }
}
