#include <algorithm>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ontofuse/align.hpp"
#include "ontofuse/error.hpp"
#include "ontofuse/extract.hpp"
#include "ontofuse/integrate.hpp"
#include "ontofuse/match.hpp"
#include "ontofuse/obo.hpp"
#include "ontofuse/pipeline.hpp"
#include "ontofuse/satcheck.hpp"
#include "ontofuse/version.hpp"

namespace {

using namespace ontofuse;

std::vector<std::pair<OntologyId, std::string>> split_args(
    const std::vector<std::string>& values) {
  std::vector<std::pair<OntologyId, std::string>> out;
  for (const auto& value : values) out.push_back(parse_ontology_arg(value));
  return out;
}

std::vector<Ontology> load_ontologies(
    const std::vector<std::pair<OntologyId, std::string>>& inputs,
    bool print_warnings) {
  std::vector<Ontology> out;
  for (const auto& [id, path] : inputs) {
    ParseResult parsed = parse_obo_file(path, id);
    if (print_warnings)
      for (const auto& warning : parsed.warnings)
        std::cerr << path << ":" << warning.line << ": warning: "
                  << warning.message << "\n";
    out.push_back(std::move(parsed.ontology));
  }
  return out;
}

std::vector<Module> load_modules(
    const std::vector<std::pair<OntologyId, std::string>>& inputs) {
  std::vector<Module> out;
  for (const auto& onto : load_ontologies(inputs, false))
    out.push_back(as_module(onto));
  return out;
}

std::string out_path(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / name).string();
}

/// Merged files carry no per-axiom provenance, so restore it from the
/// sibling artifacts when given: an axiom takes the first module (in
/// canonical source order) that contains it, then BRIDGE, matching what
/// an in-memory merge records. Repair preferences depend on this.
void stamp_provenance(Ontology& onto,
                      const std::vector<std::string>& module_args,
                      const std::string& bridge_path) {
  std::vector<Module> modules = load_modules(split_args(module_args));
  std::sort(modules.begin(), modules.end(),
            [](const Module& a, const Module& b) { return a.source < b.source; });
  BridgeOntology bridge;
  if (!bridge_path.empty())
    bridge = parse_bridge(read_file(bridge_path), file_stem(bridge_path));

  auto contains = [](const std::vector<Axiom>& axioms, const Axiom& axiom) {
    for (const auto& candidate : axioms)
      if (logical_eq(candidate, axiom)) return true;
    return false;
  };
  for (auto& axiom : onto.axioms) {
    bool stamped = false;
    for (const auto& module : modules)
      if (contains(module.axioms, axiom)) {
        axiom.provenance = module.source;
        stamped = true;
        break;
      }
    if (!stamped && contains(bridge.bridge_axioms, axiom))
      axiom.provenance = kBridgeProvenance;
  }
}

struct StageCommon {
  std::vector<std::string> ontology_args;
  std::vector<std::string> seeds;
  std::string seed_label = "seed";
  std::string match_mode = "substring";
  std::string enrich_fields = "ids,names";
  std::string out_dir = "out";
  int max_rounds = 32;
};

FixpointOptions fixpoint_options(const StageCommon& common) {
  FixpointOptions options;
  options.match_mode = parse_match_mode(common.match_mode);
  options.enrich = parse_enrich_fields(common.enrich_fields);
  options.max_rounds = common.max_rounds;
  return options;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ontofuse: modular ontology fusion from seed terms"};
  app.set_version_flag("--version", ONTOFUSE_VERSION);
  app.require_subcommand(1);

  int exit_code = 0;

  // ---- pipeline ---------------------------------------------------------
  struct {
    std::string config_path;
    StageCommon common;
    double threshold = -1.0;  // sentinel: only override when set
    int repair_passes = -1;
    bool order_audit = false;
    bool auto_repair = false;
    bool no_def_similarity = false;
    bool quiet = false;
  } pipe;
  {
    CLI::App* cmd = app.add_subcommand(
        "pipeline", "Run every stage end to end from a config file");
    cmd->add_option("--config", pipe.config_path, "Flat key=value config");
    cmd->add_option("--ontology", pipe.common.ontology_args,
                    "id=path of a source ontology (repeatable)");
    cmd->add_option("--seed", pipe.common.seeds, "Seed term (repeatable)");
    cmd->add_option("--seed-label", pipe.common.seed_label,
                    "Label used in artifact file names");
    cmd->add_option("--threshold", pipe.threshold, "Similarity threshold");
    cmd->add_option("--match-mode", pipe.common.match_mode,
                    "substring or word");
    cmd->add_option("--enrich-fields", pipe.common.enrich_fields,
                    "Comma list of ids,names,synonyms");
    cmd->add_option("--max-rounds", pipe.common.max_rounds,
                    "Fixpoint round bound");
    cmd->add_option("--repair-passes", pipe.repair_passes,
                    "Explain/repair iteration bound");
    cmd->add_flag("--order-audit", pipe.order_audit,
                  "Also run the reversed ontology order and compare");
    cmd->add_flag("--auto-repair", pipe.auto_repair,
                  "Apply the verified repair plan");
    cmd->add_flag("--no-def-similarity", pipe.no_def_similarity,
                  "Ignore definitions when scoring similarity");
    cmd->add_option("--out", pipe.common.out_dir, "Output directory");
    cmd->add_flag("--quiet", pipe.quiet, "Suppress the progress summary");

    cmd->callback([&] {
      PipelineConfig config;
      if (!pipe.config_path.empty())
        config = load_config_file(pipe.config_path);
      // Command-line flags override file keys.
      for (const auto& arg : pipe.common.ontology_args)
        config.ontologies.push_back(parse_ontology_arg(arg));
      for (const auto& seed : pipe.common.seeds)
        config.seed_terms.push_back(seed);
      auto* cli = app.get_subcommand("pipeline");
      if (cli->count("--seed-label")) config.seed_label = pipe.common.seed_label;
      if (pipe.threshold >= 0.0) config.threshold = pipe.threshold;
      if (cli->count("--match-mode"))
        config.match_mode = parse_match_mode(pipe.common.match_mode);
      if (cli->count("--enrich-fields"))
        config.enrich = parse_enrich_fields(pipe.common.enrich_fields);
      if (cli->count("--max-rounds")) config.max_rounds = pipe.common.max_rounds;
      if (pipe.repair_passes >= 0) config.repair_passes = pipe.repair_passes;
      if (pipe.order_audit) config.order_audit = true;
      if (pipe.auto_repair) config.auto_repair = true;
      if (pipe.no_def_similarity) config.use_definitions = false;
      if (cli->count("--out")) config.out_dir = pipe.common.out_dir;

      PipelineOutcome outcome = run_pipeline(config);
      if (!pipe.quiet) {
        for (const auto& line : outcome.summary)
          std::cout << line << "\n";
        for (const auto& path : outcome.artifacts)
          std::cout << "wrote " << path << "\n";
      }
      exit_code = outcome.exit_code;
    });
  }

  // ---- parse ------------------------------------------------------------
  struct {
    std::vector<std::string> ontology_args;
    std::string out_dir = "out";
  } parse_args;
  {
    CLI::App* cmd = app.add_subcommand(
        "parse", "Parse OBO files and write them back normalized");
    cmd->add_option("--ontology", parse_args.ontology_args, "id=path")
        ->required();
    cmd->add_option("--out", parse_args.out_dir, "Output directory");
    cmd->callback([&] {
      for (const auto& onto :
           load_ontologies(split_args(parse_args.ontology_args), true))
        write_file(out_path(parse_args.out_dir, onto.id + ".obo"),
                   serialize_obo(onto));
    });
  }

  // ---- match ------------------------------------------------------------
  struct {
    StageCommon common;
  } match_args;
  {
    CLI::App* cmd = app.add_subcommand(
        "match", "Report which classes the seed terms match");
    cmd->add_option("--ontology", match_args.common.ontology_args, "id=path")
        ->required();
    cmd->add_option("--seed", match_args.common.seeds, "Seed term")
        ->required();
    cmd->add_option("--match-mode", match_args.common.match_mode,
                    "substring or word");
    cmd->add_option("--out", match_args.common.out_dir, "Output directory");
    cmd->callback([&] {
      TermSet terms(match_args.common.seeds);
      MatchMode mode = parse_match_mode(match_args.common.match_mode);
      for (const auto& onto :
           load_ontologies(split_args(match_args.common.ontology_args), true)) {
        MatchReport report = match_terms(onto, terms, mode);
        write_file(out_path(match_args.common.out_dir,
                            onto.id + "_matches.tsv"),
                   match_report_tsv(report));
        std::cout << onto.id << ": " << report.matched.size()
                  << " class(es) matched\n";
      }
    });
  }

  // ---- extract ----------------------------------------------------------
  struct {
    StageCommon common;
    std::vector<std::string> seed_entities;
  } extract_args;
  {
    CLI::App* cmd = app.add_subcommand(
        "extract", "Extract a bot-locality module per ontology");
    cmd->add_option("--ontology", extract_args.common.ontology_args, "id=path")
        ->required();
    cmd->add_option("--seed", extract_args.common.seeds,
                    "Seed term matched to build the signature");
    cmd->add_option("--seed-entity", extract_args.seed_entities,
                    "Entity id added to the seed signature directly");
    cmd->add_option("--seed-label", extract_args.common.seed_label,
                    "Label used in module file names");
    cmd->add_option("--match-mode", extract_args.common.match_mode,
                    "substring or word");
    cmd->add_option("--out", extract_args.common.out_dir, "Output directory");
    cmd->callback([&] {
      if (extract_args.common.seeds.empty() &&
          extract_args.seed_entities.empty())
        throw Error(ErrorCode::ConfigError,
                    "extract needs --seed terms or --seed-entity ids");
      MatchMode mode = parse_match_mode(extract_args.common.match_mode);
      for (const auto& onto : load_ontologies(
               split_args(extract_args.common.ontology_args), true)) {
        Signature seed;
        if (!extract_args.common.seeds.empty()) {
          TermSet terms(extract_args.common.seeds);
          seed = match_terms(onto, terms, mode).matched;
        }
        for (const auto& text : extract_args.seed_entities)
          seed.insert(EntityId::parse(text));
        Module module = extract_module(onto, seed);
        write_file(
            out_path(extract_args.common.out_dir,
                     module_file_name(extract_args.common.seed_label,
                                      module.source)),
            serialize_obo(module));
        std::cout << onto.id << ": module with " << module.axioms.size()
                  << " axiom(s)\n";
      }
    });
  }

  // ---- fixpoint ---------------------------------------------------------
  struct {
    StageCommon common;
  } fix_args;
  {
    CLI::App* cmd = app.add_subcommand(
        "fixpoint", "Run the cross-ontology enrichment loop to stability");
    cmd->add_option("--ontology", fix_args.common.ontology_args, "id=path")
        ->required();
    cmd->add_option("--seed", fix_args.common.seeds, "Seed term")->required();
    cmd->add_option("--seed-label", fix_args.common.seed_label, "Label");
    cmd->add_option("--match-mode", fix_args.common.match_mode,
                    "substring or word");
    cmd->add_option("--enrich-fields", fix_args.common.enrich_fields,
                    "Comma list of ids,names,synonyms");
    cmd->add_option("--max-rounds", fix_args.common.max_rounds, "Round bound");
    cmd->add_option("--out", fix_args.common.out_dir, "Output directory");
    cmd->callback([&] {
      auto ontologies =
          load_ontologies(split_args(fix_args.common.ontology_args), true);
      TermSet seeds(fix_args.common.seeds);
      FixpointResult result =
          run_fixpoint(ontologies, seeds, fixpoint_options(fix_args.common));
      for (const auto& module : result.modules)
        write_file(out_path(fix_args.common.out_dir,
                            module_file_name(fix_args.common.seed_label,
                                             module.source)),
                   serialize_obo(module));
      write_file(out_path(fix_args.common.out_dir,
                          fix_args.common.seed_label + "_trace.tsv"),
                 trace_tsv(result.trace));
      std::cout << "converged after " << result.trace.rounds.size()
                << " round(s)\n";
    });
  }

  // ---- map --------------------------------------------------------------
  struct {
    std::vector<std::string> module_args;
    std::string seed_label = "seed";
    std::string out_dir = "out";
    double threshold = 0.95;
    bool no_def_similarity = false;
  } map_args;
  {
    CLI::App* cmd = app.add_subcommand(
        "map", "Align module classes with the normalized Levenshtein metric");
    cmd->add_option("--module", map_args.module_args, "id=path of a module")
        ->required();
    cmd->add_option("--threshold", map_args.threshold, "Keep scores >= this");
    cmd->add_option("--seed-label", map_args.seed_label, "Label");
    cmd->add_flag("--no-def-similarity", map_args.no_def_similarity,
                  "Ignore definitions when scoring");
    cmd->add_option("--out", map_args.out_dir, "Output directory");
    cmd->callback([&] {
      SimilarityOptions options;
      options.use_definitions = !map_args.no_def_similarity;
      MappingSet maps = compute_mappings(
          load_modules(split_args(map_args.module_args)), map_args.threshold,
          options);
      write_file(out_path(map_args.out_dir,
                          map_args.seed_label + "_mappings.json"),
                 mappings_json(maps));
      write_file(out_path(map_args.out_dir,
                          map_args.seed_label + "_mappings.tsv"),
                 mappings_tsv(maps));
      std::cout << maps.mappings.size() << " mapping(s)\n";
    });
  }

  // ---- bridge -----------------------------------------------------------
  struct {
    std::vector<std::string> module_args;
    std::string mappings_path;
    std::string seed_label = "seed";
    std::string out_dir = "out";
  } bridge_args;
  {
    CLI::App* cmd = app.add_subcommand(
        "bridge", "Build the bridge ontology from a mapping set");
    cmd->add_option("--module", bridge_args.module_args, "id=path")
        ->required();
    cmd->add_option("--mappings", bridge_args.mappings_path,
                    "Mapping set JSON")
        ->required();
    cmd->add_option("--seed-label", bridge_args.seed_label, "Label");
    cmd->add_option("--out", bridge_args.out_dir, "Output directory");
    cmd->callback([&] {
      MappingSet maps = mappings_from_json(read_file(bridge_args.mappings_path));
      BridgeOntology bridge =
          build_bridge(load_modules(split_args(bridge_args.module_args)), maps,
                       bridge_args.seed_label);
      write_file(out_path(bridge_args.out_dir,
                          bridge_args.seed_label + "_bridge.obo"),
                 serialize_bridge(bridge));
      std::cout << bridge.bridge_axioms.size() << " bridge axiom(s)\n";
    });
  }

  // ---- merge ------------------------------------------------------------
  struct {
    std::vector<std::string> module_args;
    std::string bridge_path;
    std::string seed_label = "seed";
    std::string out_dir = "out";
    bool pairwise = false;
  } merge_args;
  {
    CLI::App* cmd = app.add_subcommand(
        "merge", "Merge modules and bridge into one ontology");
    cmd->add_option("--module", merge_args.module_args, "id=path")->required();
    cmd->add_option("--bridge", merge_args.bridge_path, "Bridge OBO file");
    cmd->add_option("--seed-label", merge_args.seed_label, "Label");
    cmd->add_flag("--pairwise", merge_args.pairwise,
                  "Also write the pairwise clash report");
    cmd->add_option("--out", merge_args.out_dir, "Output directory");
    cmd->callback([&] {
      std::vector<Module> modules =
          load_modules(split_args(merge_args.module_args));
      BridgeOntology bridge;
      if (!merge_args.bridge_path.empty())
        bridge = parse_bridge(read_file(merge_args.bridge_path),
                              file_stem(merge_args.bridge_path));
      MergedOntology merged =
          merge(modules, bridge, merge_args.seed_label + "_merged");
      write_file(out_path(merge_args.out_dir,
                          merge_args.seed_label + "_merged.obo"),
                 serialize_obo(merged_to_ontology(merged)));
      write_file(out_path(merge_args.out_dir,
                          merge_args.seed_label + "_conflicts.tsv"),
                 conflicts_tsv(merged));
      if (merge_args.pairwise) {
        auto reports = check_pairs(pairwise_merges(modules, bridge));
        write_file(out_path(merge_args.out_dir,
                            merge_args.seed_label + "_pairwise.tsv"),
                   pairwise_tsv(reports));
      }
      std::cout << merged.classes.size() << " class(es), "
                << merged.axioms.size() << " axiom(s)\n";
    });
  }

  // ---- check ------------------------------------------------------------
  struct {
    std::string input;
    std::vector<std::string> module_args;
    std::string bridge_path;
    std::string out_dir = "out";
    std::string label;
  } check_args;
  {
    CLI::App* cmd = app.add_subcommand(
        "check", "Detect told-unsatisfiable classes in a merged ontology");
    cmd->add_option("input", check_args.input, "Merged OBO file")->required();
    cmd->add_option("--module", check_args.module_args,
                    "id=path of a source module, to restore provenance");
    cmd->add_option("--bridge", check_args.bridge_path,
                    "Bridge file, to tag bridge axiom provenance");
    cmd->add_option("--seed-label", check_args.label,
                    "Label for report names (default: input stem)");
    cmd->add_option("--out", check_args.out_dir, "Output directory");
    cmd->callback([&] {
      Ontology onto = parse_obo_file(check_args.input, "").ontology;
      stamp_provenance(onto, check_args.module_args, check_args.bridge_path);
      std::string label = check_args.label.empty() ? file_stem(check_args.input)
                                                   : check_args.label;
      CheckResult result = check_ontology(onto);
      write_file(out_path(check_args.out_dir, label + "_unsat.tsv"),
                 unsat_tsv(result));
      write_file(out_path(check_args.out_dir, label + "_explanations.json"),
                 explanations_json(onto.id, result));
      std::cout << result.unsat.size() << " unsatisfiable class(es)\n";
      if (!result.unsat.empty()) exit_code = 2;
    });
  }

  // ---- explain ----------------------------------------------------------
  struct {
    std::string input;
    std::vector<std::string> module_args;
    std::string bridge_path;
    std::string clash_class;
  } explain_args;
  {
    CLI::App* cmd = app.add_subcommand(
        "explain", "Print minimal explanations for one unsatisfiable class");
    cmd->add_option("input", explain_args.input, "Merged OBO file")
        ->required();
    cmd->add_option("--class", explain_args.clash_class, "Class id")
        ->required();
    cmd->add_option("--module", explain_args.module_args,
                    "id=path of a source module");
    cmd->add_option("--bridge", explain_args.bridge_path, "Bridge file");
    cmd->callback([&] {
      Ontology onto = parse_obo_file(explain_args.input, "").ontology;
      stamp_provenance(onto, explain_args.module_args,
                       explain_args.bridge_path);
      EntityId entity = EntityId::parse(explain_args.clash_class);
      CheckResult result;
      result.unsat = find_unsat(onto);
      std::erase_if(result.unsat, [&](const UnsatClass& u) {
        return u.entity != entity;
      });
      result.explanations = explain(onto, entity);
      std::cout << explanations_json(onto.id, result);
    });
  }

  // ---- repair -----------------------------------------------------------
  struct {
    std::string input;
    std::vector<std::string> module_args;
    std::string bridge_path;
    std::string out_dir = "out";
    std::string label;
    int passes = 8;
    bool apply = false;
  } repair_args;
  {
    CLI::App* cmd = app.add_subcommand(
        "repair", "Propose (and optionally apply) a clash repair plan");
    cmd->add_option("input", repair_args.input, "Merged OBO file")->required();
    cmd->add_option("--module", repair_args.module_args,
                    "id=path of a source module");
    cmd->add_option("--bridge", repair_args.bridge_path, "Bridge file");
    cmd->add_option("--seed-label", repair_args.label,
                    "Label for the plan file (default: input stem)");
    cmd->add_option("--passes", repair_args.passes, "Explain/repair bound");
    cmd->add_flag("--apply", repair_args.apply, "Write the repaired ontology");
    cmd->add_option("--out", repair_args.out_dir, "Output directory");
    cmd->callback([&] {
      Ontology onto = parse_obo_file(repair_args.input, "").ontology;
      stamp_provenance(onto, repair_args.module_args,
                       repair_args.bridge_path);
      std::string label = repair_args.label.empty()
                              ? file_stem(repair_args.input)
                              : repair_args.label;
      CheckResult result = check_ontology(onto);
      if (result.unsat.empty()) {
        std::cout << "no clashes; nothing to repair\n";
        return;
      }
      try {
        RepairPlan plan =
            propose_repair(onto, result.explanations, repair_args.passes);
        write_file(out_path(repair_args.out_dir, label + "_repair.txt"),
                   plan_text(onto.id, plan));
        std::cout << "plan verified: " << plan.removals.size()
                  << " removal(s)\n";
        if (repair_args.apply) {
          Ontology repaired = apply_removals(onto, plan);
          write_file(out_path(repair_args.out_dir, label + "_repaired.obo"),
                     serialize_obo(repaired));
        }
      } catch (const Error& error) {
        if (error.code() != ErrorCode::RepairIncomplete) throw;
        std::cerr << "repair incomplete: " << error.what() << "\n";
        exit_code = 2;
      }
    });
  }

  // ---- apply-repair -----------------------------------------------------
  struct {
    std::string input;
    std::string plan_path;
    std::string output;
  } apply_args;
  {
    CLI::App* cmd = app.add_subcommand(
        "apply-repair", "Apply a reviewed plan file and re-check");
    cmd->add_option("input", apply_args.input, "Merged OBO file")->required();
    cmd->add_option("--plan", apply_args.plan_path, "Plan file")->required();
    cmd->add_option("--out-file", apply_args.output, "Repaired OBO path")
        ->required();
    cmd->callback([&] {
      Ontology onto = parse_obo_file(apply_args.input, "").ontology;
      RepairPlan plan = parse_plan(read_file(apply_args.plan_path));
      Ontology repaired = apply_removals(onto, plan);
      write_file(apply_args.output, serialize_obo(repaired));
      std::size_t remaining = find_unsat(repaired).size();
      std::cout << remaining << " unsatisfiable class(es) after repair\n";
      if (remaining > 0) exit_code = 2;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const ontofuse::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
