#include "ontofuse/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <set>
#include <sstream>

#include "ontofuse/align.hpp"
#include "ontofuse/error.hpp"
#include "ontofuse/integrate.hpp"
#include "ontofuse/obo.hpp"
#include "ontofuse/satcheck.hpp"

namespace ontofuse {

namespace {

std::string trim(const std::string& text) {
  std::size_t first = text.find_first_not_of(" \t");
  if (first == std::string::npos) return "";
  std::size_t last = text.find_last_not_of(" \t");
  return text.substr(first, last - first + 1);
}

[[noreturn]] void config_error(int line, const std::string& message) {
  throw Error(ErrorCode::ConfigError,
              "config line " + std::to_string(line) + ": " + message);
}

bool parse_bool(const std::string& value, int line) {
  if (value == "true") return true;
  if (value == "false") return false;
  config_error(line, "expected true or false, got '" + value + "'");
}

double parse_double(const std::string& value, int line) {
  try {
    std::size_t used = 0;
    double parsed = std::stod(value, &used);
    if (used == value.size()) return parsed;
  } catch (const std::exception&) {
  }
  config_error(line, "expected a number, got '" + value + "'");
}

int parse_int(const std::string& value, int line) {
  int parsed = 0;
  auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(),
                                   parsed);
  if (ec != std::errc{} || end != value.data() + value.size())
    config_error(line, "expected an integer, got '" + value + "'");
  return parsed;
}

std::pair<OntologyId, std::string> parse_ontology_value(
    const std::string& value) {
  std::size_t eq = value.find('=');
  if (eq == std::string::npos || eq == 0)
    return {file_stem(value), value};  // bare path: id from the file stem
  return {trim(value.substr(0, eq)), trim(value.substr(eq + 1))};
}

}  // namespace

std::pair<OntologyId, std::string> parse_ontology_arg(
    const std::string& value) {
  return parse_ontology_value(value);
}

MatchMode parse_match_mode(const std::string& text) {
  if (text == "substring") return MatchMode::Substring;
  if (text == "word") return MatchMode::Word;
  throw Error(ErrorCode::ConfigError,
              "match mode must be substring or word, got '" + text + "'");
}

EnrichFields parse_enrich_fields(const std::string& text) {
  EnrichFields fields{false, false, false};
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item == "ids")
      fields.ids = true;
    else if (item == "names")
      fields.names = true;
    else if (item == "synonyms")
      fields.synonyms = true;
    else if (!item.empty())
      throw Error(ErrorCode::ConfigError,
                  "enrich field must be ids, names or synonyms, got '" +
                      item + "'");
  }
  return fields;
}

PipelineConfig parse_config(const std::string& text) {
  PipelineConfig config;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      config_error(line_no, "expected key = value");
    std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));

    if (key == "seed_label")
      config.seed_label = value;
    else if (key == "seed")
      config.seed_terms.push_back(value);
    else if (key == "ontology")
      config.ontologies.push_back(parse_ontology_value(value));
    else if (key == "threshold")
      config.threshold = parse_double(value, line_no);
    else if (key == "match_mode")
      config.match_mode = parse_match_mode(value);
    else if (key == "enrich_fields")
      config.enrich = parse_enrich_fields(value);
    else if (key == "max_rounds")
      config.max_rounds = parse_int(value, line_no);
    else if (key == "repair_passes")
      config.repair_passes = parse_int(value, line_no);
    else if (key == "order_audit")
      config.order_audit = parse_bool(value, line_no);
    else if (key == "auto_repair")
      config.auto_repair = parse_bool(value, line_no);
    else if (key == "no_def_similarity")
      config.use_definitions = !parse_bool(value, line_no);
    else if (key == "out")
      config.out_dir = value;
    else
      config_error(line_no, "unknown key '" + key + "'");
  }
  return config;
}

PipelineConfig load_config_file(const std::string& path) {
  return parse_config(read_file(path));
}

void validate_config(const PipelineConfig& config) {
  auto fail = [](const std::string& message) {
    throw Error(ErrorCode::ConfigError, message);
  };
  if (config.seed_terms.empty()) fail("no seed terms given");
  for (const auto& term : config.seed_terms)
    if (trim(term).size() < 3)
      fail("seed term '" + term + "' is shorter than 3 characters");
  if (!(config.threshold > 0.0 && config.threshold <= 1.0))
    fail("threshold must be in (0, 1]");
  if (config.ontologies.size() < 2) fail("need at least two ontologies");
  std::set<OntologyId> ids;
  std::set<std::string> paths;
  for (const auto& [id, path] : config.ontologies) {
    if (id.empty()) fail("ontology with empty id");
    if (path.empty()) fail("ontology '" + id + "' has an empty path");
    if (!ids.insert(id).second) fail("duplicate ontology id '" + id + "'");
    if (!paths.insert(path).second) fail("duplicate ontology path " + path);
  }
  if (config.max_rounds < 2) fail("max_rounds must be at least 2");
  if (config.repair_passes < 1) fail("repair_passes must be at least 1");
  if (config.seed_label.empty()) fail("seed_label is empty");
  for (char c : config.seed_label) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '_' || c == '-';
    if (!ok) fail("seed_label may only contain [A-Za-z0-9_-]");
  }
  if (config.out_dir.empty()) fail("output directory is empty");
}

namespace {

/// Accumulates artifact writes so the outcome lists them in order.
struct ArtifactWriter {
  std::filesystem::path dir;
  std::vector<std::string>& artifacts;

  std::string write(const std::string& name, const std::string& content) {
    std::string path = (dir / name).string();
    write_file(path, content);
    artifacts.push_back(path);
    return path;
  }
};

std::string order_audit_tsv(const std::vector<Module>& configured,
                            const std::vector<Module>& reversed) {
  // Both runs carry one module per ontology; align them by source id.
  auto by_source = [](const std::vector<Module>& modules) {
    std::map<OntologyId, const Module*> index;
    for (const auto& module : modules) index.emplace(module.source, &module);
    return index;
  };
  auto left = by_source(configured);
  auto right = by_source(reversed);

  std::string out =
      "# configured order vs reversed order\n"
      "# ontology\tsig_configured\tsig_reversed\tsig_equal\taxioms_equal\n";
  Signature union_left, union_right;
  for (const auto& [source, module] : left) {
    const Module* other = right.at(source);
    Signature sig_l = sig_of_module(*module);
    Signature sig_r = sig_of_module(*other);
    union_left = sig_union(union_left, sig_l);
    union_right = sig_union(union_right, sig_r);
    bool axioms_equal =
        module->axioms.size() == other->axioms.size() &&
        std::equal(module->axioms.begin(), module->axioms.end(),
                   other->axioms.begin(), logical_eq);
    out += source;
    out += '\t';
    out += std::to_string(sig_l.size());
    out += '\t';
    out += std::to_string(sig_r.size());
    out += '\t';
    out += sig_l == sig_r ? "yes" : "no";
    out += '\t';
    out += axioms_equal ? "yes" : "no";
    out += '\n';
  }
  out += "UNION\t" + std::to_string(union_left.size()) + "\t" +
         std::to_string(union_right.size()) + "\t" +
         (union_left == union_right ? "yes" : "no") + "\t-\n";
  return out;
}

}  // namespace

PipelineOutcome run_pipeline(const PipelineConfig& config) {
  validate_config(config);

  PipelineOutcome outcome;
  std::filesystem::create_directories(config.out_dir);
  ArtifactWriter writer{config.out_dir, outcome.artifacts};
  auto note = [&](std::string line) {
    outcome.summary.push_back(std::move(line));
  };

  std::vector<Ontology> ontologies;
  std::size_t warning_count = 0;
  for (const auto& [id, path] : config.ontologies) {
    ParseResult parsed = parse_obo_file(path, id);
    warning_count += parsed.warnings.size();
    ontologies.push_back(std::move(parsed.ontology));
  }
  {
    std::ostringstream line;
    line << "parsed " << ontologies.size() << " ontologies ("
         << warning_count << " warning(s))";
    note(line.str());
  }

  TermSet seeds(config.seed_terms);
  FixpointOptions fixpoint_options{config.match_mode, config.enrich,
                                   config.max_rounds};
  FixpointResult fixpoint = run_fixpoint(ontologies, seeds, fixpoint_options);
  note("fixpoint converged after " +
       std::to_string(fixpoint.trace.rounds.size()) + " round(s)");

  for (const auto& module : fixpoint.modules)
    writer.write(module_file_name(config.seed_label, module.source),
                 serialize_obo(module));
  writer.write(config.seed_label + "_trace.tsv", trace_tsv(fixpoint.trace));

  if (config.order_audit) {
    std::vector<Ontology> reversed(ontologies.rbegin(), ontologies.rend());
    FixpointResult audit = run_fixpoint(reversed, seeds, fixpoint_options);
    writer.write(config.seed_label + "_order_audit.tsv",
                 order_audit_tsv(fixpoint.modules, audit.modules));
    note("order audit written");
  }

  SimilarityOptions similarity;
  similarity.use_definitions = config.use_definitions;
  MappingSet maps =
      compute_mappings(fixpoint.modules, config.threshold, similarity);
  writer.write(config.seed_label + "_mappings.json", mappings_json(maps));
  writer.write(config.seed_label + "_mappings.tsv", mappings_tsv(maps));
  {
    std::ostringstream line;
    line << maps.mappings.size() << " mapping(s) at threshold "
         << config.threshold;
    note(line.str());
  }

  BridgeOntology bridge =
      build_bridge(fixpoint.modules, maps, config.seed_label);
  writer.write(config.seed_label + "_bridge.obo", serialize_bridge(bridge));

  MergedOntology merged =
      merge(fixpoint.modules, bridge, config.seed_label + "_merged");
  Ontology merged_onto = merged_to_ontology(merged);
  writer.write(config.seed_label + "_merged.obo", serialize_obo(merged_onto));
  writer.write(config.seed_label + "_conflicts.tsv", conflicts_tsv(merged));
  {
    std::ostringstream line;
    line << "merged: " << merged_onto.classes.size() << " classes, "
         << merged_onto.axioms.size() << " axioms, "
         << merged.conflicts.size() << " annotation conflict(s)";
    note(line.str());
  }

  std::vector<PairClashReport> pair_reports =
      check_pairs(pairwise_merges(fixpoint.modules, bridge));
  writer.write(config.seed_label + "_pairwise.tsv",
               pairwise_tsv(pair_reports));
  std::size_t clashing_pairs = 0;
  for (const auto& report : pair_reports)
    if (!report.unsat.empty()) ++clashing_pairs;
  note(std::to_string(clashing_pairs) + " of " +
       std::to_string(pair_reports.size()) + " pairwise merges clash");

  CheckResult check = check_ontology(merged_onto);
  outcome.unsat_count = check.unsat.size();
  writer.write(config.seed_label + "_unsat.tsv", unsat_tsv(check));
  writer.write(config.seed_label + "_explanations.json",
               explanations_json(merged_onto.id, check));
  note(std::to_string(check.unsat.size()) +
       " unsatisfiable class(es) in the full merge");

  if (!check.unsat.empty()) {
    try {
      RepairPlan plan =
          propose_repair(merged_onto, check.explanations, config.repair_passes);
      outcome.plan_verified = true;
      writer.write(config.seed_label + "_repair.txt",
                   plan_text(merged_onto.id, plan));
      note("repair plan verified: " + std::to_string(plan.removals.size()) +
           " removal(s)");
      if (config.auto_repair) {
        Ontology repaired = apply_removals(merged_onto, plan);
        writer.write(config.seed_label + "_repaired.obo",
                     serialize_obo(repaired));
        note("repair applied");
      }
    } catch (const Error& error) {
      if (error.code() != ErrorCode::RepairIncomplete) throw;
      outcome.exit_code = 2;
      note("repair incomplete: clashes remain after " +
           std::to_string(config.repair_passes) + " pass(es)");
    }
  }
  return outcome;
}

}  // namespace ontofuse
