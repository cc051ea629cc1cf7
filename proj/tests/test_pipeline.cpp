#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include "ontofuse/error.hpp"
#include "ontofuse/obo.hpp"
#include "ontofuse/pipeline.hpp"
#include "ontofuse/satcheck.hpp"
#include "support/proc.hpp"

using namespace ontofuse;

namespace {

PipelineConfig toy_config(const std::string& out_dir) {
  PipelineConfig config;
  config.seed_label = "toy";
  config.seed_terms = {"toll", "tlr"};
  config.ontologies = {
      {"nci", ONTOFUSE_FIXTURE_DIR "/nci.obo"},
      {"mro", ONTOFUSE_FIXTURE_DIR "/mro.obo"},
      {"go", ONTOFUSE_FIXTURE_DIR "/go.obo"},
  };
  config.threshold = 0.95;
  config.enrich = EnrichFields{true, true, false};
  config.out_dir = out_dir;
  return config;
}

void expect_config_error(const std::string& text,
                         const std::string& needle) {
  try {
    parse_config(text);
    FAIL("expected ConfigError for: ", text);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
    CHECK(std::string(e.what()).find(needle) != std::string::npos);
  }
}

void expect_invalid(PipelineConfig config, const std::string& needle) {
  try {
    validate_config(config);
    FAIL("expected ConfigError containing: ", needle);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
    CHECK(std::string(e.what()).find(needle) != std::string::npos);
  }
}

std::size_t data_rows(const std::string& tsv) {
  std::size_t rows = 0;
  std::size_t pos = 0;
  while (pos < tsv.size()) {
    std::size_t end = tsv.find('\n', pos);
    if (end == std::string::npos) end = tsv.size();
    if (end > pos && tsv[pos] != '#') ++rows;
    pos = end + 1;
  }
  return rows;
}

}  // namespace

TEST_CASE("parse_config reads every key") {
  const std::string text =
      "# a comment\n"
      "\n"
      "seed_label = immune\n"
      "seed = toll\n"
      "seed = tlr\n"
      "ontology = nci=data/nci.obo\n"
      "ontology = data/go.obo\n"
      "threshold = 0.9\n"
      "match_mode = word\n"
      "enrich_fields = ids, names, synonyms\n"
      "max_rounds = 8\n"
      "repair_passes = 3\n"
      "order_audit = true\n"
      "auto_repair = true\n"
      "no_def_similarity = true\n"
      "out = results\n";
  PipelineConfig config = parse_config(text);
  CHECK(config.seed_label == "immune");
  CHECK(config.seed_terms == std::vector<std::string>{"toll", "tlr"});
  REQUIRE(config.ontologies.size() == 2);
  CHECK(config.ontologies[0] ==
        std::pair<OntologyId, std::string>{"nci", "data/nci.obo"});
  CHECK(config.ontologies[1] ==
        std::pair<OntologyId, std::string>{"go", "data/go.obo"});
  CHECK(config.threshold == doctest::Approx(0.9));
  CHECK(config.match_mode == MatchMode::Word);
  CHECK(config.enrich.ids);
  CHECK(config.enrich.names);
  CHECK(config.enrich.synonyms);
  CHECK(config.max_rounds == 8);
  CHECK(config.repair_passes == 3);
  CHECK(config.order_audit);
  CHECK(config.auto_repair);
  CHECK_FALSE(config.use_definitions);
  CHECK(config.out_dir == "results");
}

TEST_CASE("parse_config defaults match the documented flags") {
  PipelineConfig config = parse_config("");
  CHECK(config.seed_label == "seed");
  CHECK(config.seed_terms.empty());
  CHECK(config.threshold == doctest::Approx(0.95));
  CHECK(config.match_mode == MatchMode::Substring);
  CHECK(config.max_rounds == 32);
  CHECK(config.repair_passes == 8);
  CHECK_FALSE(config.order_audit);
  CHECK_FALSE(config.auto_repair);
  CHECK(config.use_definitions);
  CHECK(config.out_dir == "out");
}

TEST_CASE("config errors carry the offending line number") {
  expect_config_error("seed = toll\nbogus_key = 1\n", "line 2");
  expect_config_error("seed = toll\nbogus_key = 1\n", "unknown key");
  expect_config_error("threshold = abc\n", "line 1");
  expect_config_error("max_rounds = 1.5\n", "expected an integer");
  expect_config_error("order_audit = yes\n", "expected true or false");
  expect_config_error("match_mode = regex\n", "substring or word");
  expect_config_error("enrich_fields = labels\n", "ids, names or synonyms");
  expect_config_error("seed_label immune\n", "expected key = value");
}

TEST_CASE("windows line endings and surrounding blanks are tolerated") {
  PipelineConfig config =
      parse_config("seed_label = x\r\n\r\n  seed =  toll  \r\n");
  CHECK(config.seed_label == "x");
  CHECK(config.seed_terms == std::vector<std::string>{"toll"});
}

TEST_CASE("ontology values split at the first equals sign") {
  auto [id, path] = parse_ontology_arg("nci=dir/with=sign.obo");
  CHECK(id == "nci");
  CHECK(path == "dir/with=sign.obo");
  auto [bare_id, bare_path] = parse_ontology_arg("corpus/gene_ontology.obo");
  CHECK(bare_id == "gene_ontology");
  CHECK(bare_path == "corpus/gene_ontology.obo");
}

TEST_CASE("the bundled toy config file loads as expected") {
  PipelineConfig config =
      load_config_file(ONTOFUSE_FIXTURE_DIR "/toy.cfg");
  CHECK(config.seed_label == "toy");
  CHECK(config.seed_terms == std::vector<std::string>{"toll", "tlr"});
  REQUIRE(config.ontologies.size() == 3);
  CHECK(config.ontologies[0].first == "nci");
  CHECK(config.ontologies[1].first == "mro");
  CHECK(config.ontologies[2].first == "go");
  CHECK(config.threshold == doctest::Approx(0.95));
  CHECK(config.enrich.ids);
  CHECK(config.enrich.names);
  CHECK_FALSE(config.enrich.synonyms);
  CHECK(config.max_rounds == 32);
  CHECK_NOTHROW(validate_config(config));
}

TEST_CASE("validate_config rejects each broken invariant") {
  PipelineConfig good = toy_config("out");

  PipelineConfig c = good;
  c.seed_terms.clear();
  expect_invalid(c, "no seed terms");

  c = good;
  c.seed_terms = {"toll", "ab"};
  expect_invalid(c, "shorter than 3");

  c = good;
  c.threshold = 0.0;
  expect_invalid(c, "threshold");
  c.threshold = 1.001;
  expect_invalid(c, "threshold");

  c = good;
  c.ontologies.resize(1);
  expect_invalid(c, "at least two");

  c = good;
  c.ontologies[1].first = "nci";
  expect_invalid(c, "duplicate ontology id");

  c = good;
  c.ontologies[1].second = c.ontologies[0].second;
  expect_invalid(c, "duplicate ontology path");

  c = good;
  c.ontologies[1].first = "";
  expect_invalid(c, "empty id");

  c = good;
  c.max_rounds = 1;
  expect_invalid(c, "max_rounds");

  c = good;
  c.repair_passes = 0;
  expect_invalid(c, "repair_passes");

  c = good;
  c.seed_label = "bad label";
  expect_invalid(c, "seed_label");

  c = good;
  c.out_dir = "";
  expect_invalid(c, "output directory");
}

TEST_CASE("run_pipeline rejects invalid configs before writing") {
  PipelineConfig config = toy_config(
      testsupport::fresh_dir("pipe-invalid").string());
  config.seed_terms.clear();
  CHECK_THROWS_AS(run_pipeline(config), Error);
  const bool untouched = !std::filesystem::exists(config.out_dir) ||
                         std::filesystem::is_empty(config.out_dir);
  CHECK(untouched);
}

TEST_CASE("run_pipeline surfaces unreadable inputs as IO errors") {
  PipelineConfig config =
      toy_config(testsupport::fresh_dir("pipe-io").string());
  config.ontologies[1].second = ONTOFUSE_FIXTURE_DIR "/absent.obo";
  try {
    run_pipeline(config);
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoError);
  }
}

TEST_CASE("the toy corpus runs end to end with the expected artifacts") {
  const auto out = testsupport::fresh_dir("pipe-toy");
  PipelineConfig config = toy_config(out.string());
  PipelineOutcome outcome = run_pipeline(config);

  CHECK(outcome.exit_code == 0);
  CHECK(outcome.unsat_count == 5);
  CHECK(outcome.plan_verified);

  const std::vector<std::string> expected = {
      "toy_from_nci.obo",    "toy_from_mro.obo",
      "toy_from_go.obo",     "toy_trace.tsv",
      "toy_mappings.json",   "toy_mappings.tsv",
      "toy_bridge.obo",      "toy_merged.obo",
      "toy_conflicts.tsv",   "toy_pairwise.tsv",
      "toy_unsat.tsv",       "toy_explanations.json",
      "toy_repair.txt",
  };
  REQUIRE(outcome.artifacts.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(std::filesystem::path(outcome.artifacts[i]).filename() ==
          expected[i]);
    CHECK(std::filesystem::file_size(outcome.artifacts[i]) > 0);
  }

  // The summary tells the story of the run.
  auto has_line = [&](const std::string& needle) {
    return std::any_of(outcome.summary.begin(), outcome.summary.end(),
                       [&](const std::string& line) {
                         return line.find(needle) != std::string::npos;
                       });
  };
  CHECK(has_line("parsed 3 ontologies"));
  CHECK(has_line("fixpoint converged after 3 round(s)"));
  CHECK(has_line("8 mapping(s)"));
  CHECK(has_line("merged: 17 classes, 23 axioms, 0 annotation conflict(s)"));
  CHECK(has_line("0 of 3 pairwise merges clash"));
  CHECK(has_line("5 unsatisfiable class(es)"));
  CHECK(has_line("repair plan verified: 1 removal(s)"));

  // The emitted plan names the one false mapping.
  const std::string plan = testsupport::slurp(out / "toy_repair.txt");
  CHECK(plan.find("REMOVE GO:0000005 equivalentTo MRO:0004\n") !=
        std::string::npos);
}

TEST_CASE("identical inputs produce byte-identical artifacts") {
  const auto out_a = testsupport::fresh_dir("pipe-det-a");
  const auto out_b = testsupport::fresh_dir("pipe-det-b");
  run_pipeline(toy_config(out_a.string()));
  run_pipeline(toy_config(out_b.string()));
  CHECK(testsupport::dir_contents(out_a) == testsupport::dir_contents(out_b));
}

TEST_CASE("auto_repair applies the verified plan") {
  const auto out = testsupport::fresh_dir("pipe-repair");
  PipelineConfig config = toy_config(out.string());
  config.auto_repair = true;
  PipelineOutcome outcome = run_pipeline(config);
  CHECK(outcome.exit_code == 0);
  REQUIRE(!outcome.artifacts.empty());
  CHECK(std::filesystem::path(outcome.artifacts.back()).filename() ==
        "toy_repaired.obo");

  auto repaired = parse_obo(testsupport::slurp(out / "toy_repaired.obo"),
                            "toy_repaired");
  CHECK(find_unsat(repaired.ontology).empty());
  for (const Axiom& ax : repaired.ontology.axioms)
    CHECK(ax.str() != "GO:0000005 equivalentTo MRO:0004");
}

TEST_CASE("order_audit reports a stable signature union") {
  const auto out = testsupport::fresh_dir("pipe-audit");
  PipelineConfig config = toy_config(out.string());
  config.order_audit = true;
  PipelineOutcome outcome = run_pipeline(config);
  auto is_audit = [](const std::string& path) {
    return std::filesystem::path(path).filename() == "toy_order_audit.tsv";
  };
  CHECK(std::any_of(outcome.artifacts.begin(), outcome.artifacts.end(),
                    is_audit));
  const std::string audit =
      testsupport::slurp(out / "toy_order_audit.tsv");
  CHECK(audit.find("UNION\t18\t18\tyes") != std::string::npos);
}

TEST_CASE("raising the threshold never adds mappings") {
  const auto out_low = testsupport::fresh_dir("pipe-t95");
  const auto out_high = testsupport::fresh_dir("pipe-t100");
  run_pipeline(toy_config(out_low.string()));
  PipelineConfig strict = toy_config(out_high.string());
  strict.threshold = 1.0;
  run_pipeline(strict);

  const std::size_t low =
      data_rows(testsupport::slurp(out_low / "toy_mappings.tsv"));
  const std::size_t high =
      data_rows(testsupport::slurp(out_high / "toy_mappings.tsv"));
  CHECK(low == 8);
  CHECK(high == 7);  // the exact-score pairs survive; the 0.9655 one drops
}
