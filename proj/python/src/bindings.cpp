// Python bindings for the main operations: parse, match, extract, align,
// integrate, check/repair, and the end-to-end pipeline. Entity ids and
// axioms cross the boundary as their canonical string forms.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <utility>
#include <vector>

#include "ontofuse/align.hpp"
#include "ontofuse/error.hpp"
#include "ontofuse/extract.hpp"
#include "ontofuse/integrate.hpp"
#include "ontofuse/match.hpp"
#include "ontofuse/model.hpp"
#include "ontofuse/obo.hpp"
#include "ontofuse/pipeline.hpp"
#include "ontofuse/satcheck.hpp"
#include "ontofuse/version.hpp"

namespace py = pybind11;
using namespace ontofuse;

namespace {

Signature signature_of(const std::vector<std::string>& ids) {
  Signature out;
  for (const auto& text : ids) out.insert(EntityId::parse(text));
  return out;
}

std::vector<std::string> id_strings(const Signature& sig) {
  std::vector<std::string> out;
  for (const auto& entity : sig) out.push_back(entity.str());
  return out;
}

std::vector<std::string> axiom_strings(const std::vector<Axiom>& axioms) {
  std::vector<std::string> out;
  for (const auto& axiom : axioms) out.push_back(axiom.str());
  return out;
}

std::vector<std::pair<std::string, std::string>> witness_pairs(
    const std::vector<std::pair<EntityId, EntityId>>& witnesses) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [a, b] : witnesses) out.emplace_back(a.str(), b.str());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Seed-driven ontology fusion: modules, mappings, merge, repair";
  m.attr("__version__") = ONTOFUSE_VERSION;
  m.attr("BRIDGE_PROVENANCE") = kBridgeProvenance;

  py::register_exception<Error>(m, "OntofuseError");

  // ---- core types -------------------------------------------------------
  py::class_<Ontology>(m, "Ontology")
      .def_readonly("id", &Ontology::id)
      .def_property_readonly(
          "class_count",
          [](const Ontology& o) { return o.classes.size(); })
      .def_property_readonly(
          "relation_count",
          [](const Ontology& o) { return o.relations.size(); })
      .def_property_readonly("class_ids",
                             [](const Ontology& o) {
                               std::vector<std::string> out;
                               for (const auto& [e, ann] : o.classes)
                                 out.push_back(e.str());
                               return out;
                             })
      .def_property_readonly(
          "axioms",
          [](const Ontology& o) { return axiom_strings(o.axioms); })
      .def("name_of",
           [](const Ontology& o, const std::string& entity) {
             auto it = o.classes.find(EntityId::parse(entity));
             return it == o.classes.end() ? std::string() : it->second.name;
           },
           py::arg("entity"))
      .def("serialize",
           [](const Ontology& o) { return serialize_obo(o); })
      .def("__repr__", [](const Ontology& o) {
        return "<Ontology " + o.id + ": " + std::to_string(o.classes.size()) +
               " classes, " + std::to_string(o.axioms.size()) + " axioms>";
      });

  py::class_<Module>(m, "Module")
      .def_readonly("source", &Module::source)
      .def_property_readonly(
          "signature",
          [](const Module& mod) { return id_strings(sig_of_module(mod)); })
      .def_property_readonly(
          "axioms",
          [](const Module& mod) { return axiom_strings(mod.axioms); })
      .def_property_readonly("carried_class_ids",
                             [](const Module& mod) {
                               std::vector<std::string> out;
                               for (const auto& [e, ann] :
                                    mod.carried_classes)
                                 out.push_back(e.str());
                               return out;
                             })
      .def("serialize",
           [](const Module& mod) { return serialize_obo(mod); })
      .def("__repr__", [](const Module& mod) {
        return "<Module from " + mod.source + ": " +
               std::to_string(mod.axioms.size()) + " axioms>";
      });

  py::class_<Mapping>(m, "Mapping")
      .def_readonly("source_ontology", &Mapping::source_ontology)
      .def_property_readonly(
          "source_id", [](const Mapping& v) { return v.source_id.str(); })
      .def_readonly("target_ontology", &Mapping::target_ontology)
      .def_property_readonly(
          "target_id", [](const Mapping& v) { return v.target_id.str(); })
      .def_readonly("score", &Mapping::score)
      .def_property_readonly(
          "field", [](const Mapping& v) { return field_pair_name(v.field); })
      .def("__repr__", [](const Mapping& v) {
        return "<Mapping " + v.source_id.str() + " -> " + v.target_id.str() +
               " @ " + std::to_string(v.score) + ">";
      });

  py::class_<MappingSet>(m, "MappingSet")
      .def_readonly("threshold", &MappingSet::threshold)
      .def_readonly("mappings", &MappingSet::mappings)
      .def("__len__",
           [](const MappingSet& s) { return s.mappings.size(); })
      .def("to_json", [](const MappingSet& s) { return mappings_json(s); })
      .def("to_tsv", [](const MappingSet& s) { return mappings_tsv(s); });

  py::class_<BridgeOntology>(m, "Bridge")
      .def_readonly("id", &BridgeOntology::id)
      .def_readonly("imports", &BridgeOntology::imports)
      .def_property_readonly("axioms",
                             [](const BridgeOntology& b) {
                               return axiom_strings(b.bridge_axioms);
                             })
      .def("serialize",
           [](const BridgeOntology& b) { return serialize_bridge(b); });

  py::class_<FixpointResult>(m, "FixpointResult")
      .def_readonly("modules", &FixpointResult::modules)
      .def_property_readonly(
          "rounds",
          [](const FixpointResult& r) { return r.trace.rounds.size(); })
      .def_property_readonly(
          "trace_tsv",
          [](const FixpointResult& r) { return trace_tsv(r.trace); });

  py::class_<UnsatClass>(m, "UnsatClass")
      .def_property_readonly(
          "entity", [](const UnsatClass& u) { return u.entity.str(); })
      .def_property_readonly(
          "witnesses",
          [](const UnsatClass& u) { return witness_pairs(u.witnesses); })
      .def("__repr__", [](const UnsatClass& u) {
        return "<UnsatClass " + u.entity.str() + ">";
      });

  py::class_<Explanation>(m, "Explanation")
      .def_property_readonly(
          "clash_class",
          [](const Explanation& e) { return e.clash_class.str(); })
      .def_property_readonly("witness",
                             [](const Explanation& e) {
                               return std::pair(e.witness.first.str(),
                                                e.witness.second.str());
                             })
      .def_property_readonly("axioms", [](const Explanation& e) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& axiom : e.axioms)
          out.emplace_back(axiom.str(), axiom.provenance);
        return out;
      });

  py::class_<RepairPlan>(m, "RepairPlan")
      .def_property_readonly("removals",
                             [](const RepairPlan& plan) {
                               std::vector<std::pair<std::string,
                                                     std::string>> out;
                               for (const auto& removal : plan.removals)
                                 out.emplace_back(removal.axiom.str(),
                                                  removal.rationale);
                               return out;
                             })
      .def("to_text", [](const RepairPlan& plan, const std::string& id) {
        return plan_text(id, plan);
      }, py::arg("ontology_id"));

  py::class_<PipelineOutcome>(m, "PipelineOutcome")
      .def_readonly("exit_code", &PipelineOutcome::exit_code)
      .def_readonly("artifacts", &PipelineOutcome::artifacts)
      .def_readonly("summary", &PipelineOutcome::summary)
      .def_readonly("unsat_count", &PipelineOutcome::unsat_count)
      .def_readonly("plan_verified", &PipelineOutcome::plan_verified);

  // ---- obo_io -----------------------------------------------------------
  m.def(
      "parse_obo_file",
      [](const std::string& path, const std::string& id) {
        ParseResult result = parse_obo_file(path, id);
        std::vector<std::string> warnings;
        for (const auto& warning : result.warnings)
          warnings.push_back("line " + std::to_string(warning.line) + ": " +
                             warning.message);
        return std::pair(std::move(result.ontology), std::move(warnings));
      },
      py::arg("path"), py::arg("id") = "",
      "Parse an OBO file; returns (ontology, warnings).");
  m.def(
      "parse_obo",
      [](const std::string& text, const std::string& id) {
        return parse_obo(text, id).ontology;
      },
      py::arg("text"), py::arg("id"));
  m.def("serialize_obo",
        [](const Ontology& onto) { return serialize_obo(onto); },
        py::arg("ontology"));
  m.def("module_file_name", &module_file_name, py::arg("seed_label"),
        py::arg("source"));

  // ---- matching and extraction ------------------------------------------
  m.def(
      "match_terms",
      [](const Ontology& onto, const std::vector<std::string>& seeds,
         const std::string& mode) {
        MatchReport report =
            match_terms(onto, TermSet(seeds), parse_match_mode(mode));
        return id_strings(report.matched);
      },
      py::arg("ontology"), py::arg("seeds"), py::arg("mode") = "substring",
      "Ids of the classes whose annotations contain a seed term.");
  m.def(
      "extract_module",
      [](const Ontology& onto, const std::vector<std::string>& seed_ids) {
        return extract_module(onto, signature_of(seed_ids));
      },
      py::arg("ontology"), py::arg("seed_ids"),
      "Syntactic bot-locality module for the seed signature.");
  m.def(
      "run_fixpoint",
      [](const std::vector<Ontology>& ontologies,
         const std::vector<std::string>& seeds, const std::string& mode,
         const std::string& enrich, int max_rounds) {
        FixpointOptions options;
        options.match_mode = parse_match_mode(mode);
        options.enrich = parse_enrich_fields(enrich);
        options.max_rounds = max_rounds;
        return run_fixpoint(ontologies, TermSet(seeds), options);
      },
      py::arg("ontologies"), py::arg("seeds"),
      py::arg("mode") = "substring", py::arg("enrich") = "ids,names",
      py::arg("max_rounds") = 32,
      "Cross-ontology enriched-signature extraction to a fixpoint.");

  // ---- alignment ---------------------------------------------------------
  m.def("edit_distance", &edit_distance, py::arg("a"), py::arg("b"));
  m.def("lev_metric", &lev_metric, py::arg("a"), py::arg("b"),
        "Normalized Levenshtein similarity on lowercased strings.");
  m.def(
      "compute_mappings",
      [](const std::vector<Module>& modules, double threshold,
         bool use_definitions) {
        SimilarityOptions options;
        options.use_definitions = use_definitions;
        return compute_mappings(modules, threshold, options);
      },
      py::arg("modules"), py::arg("threshold") = 0.95,
      py::arg("use_definitions") = true,
      "Best above-threshold correspondences between module classes.");

  // ---- integration -------------------------------------------------------
  m.def(
      "build_bridge",
      [](const std::vector<Module>& modules, const MappingSet& maps,
         const std::string& label) {
        return build_bridge(modules, maps, label);
      },
      py::arg("modules"), py::arg("mappings"), py::arg("label"));
  m.def(
      "merge_modules",
      [](const std::vector<Module>& modules, const BridgeOntology& bridge,
         const std::string& merged_id) {
        return merged_to_ontology(merge(modules, bridge, merged_id));
      },
      py::arg("modules"), py::arg("bridge"), py::arg("merged_id"),
      "Union of the modules plus bridge axioms as one ontology.");

  // ---- satisfiability ----------------------------------------------------
  m.def("find_unsat",
        [](const Ontology& onto) { return find_unsat(onto); },
        py::arg("ontology"),
        "Told-unsatisfiable classes with their disjointness witnesses.");
  m.def(
      "explain",
      [](const Ontology& onto, const std::string& clash_class) {
        return explain(onto, EntityId::parse(clash_class));
      },
      py::arg("ontology"), py::arg("clash_class"),
      "Minimal told explanations for one unsatisfiable class.");
  m.def(
      "propose_repair",
      [](const Ontology& onto, int max_passes) {
        CheckResult result = check_ontology(onto);
        if (result.unsat.empty()) return RepairPlan{};
        return propose_repair(onto, result.explanations, max_passes);
      },
      py::arg("ontology"), py::arg("max_passes") = 8,
      "Greedy bridge-preferring removal plan, verified clash-free.");
  m.def(
      "apply_removals",
      [](const Ontology& onto, const RepairPlan& plan) {
        return apply_removals(onto, plan);
      },
      py::arg("ontology"), py::arg("plan"));

  // ---- pipeline ----------------------------------------------------------
  m.def(
      "run_pipeline",
      [](const std::vector<std::pair<std::string, std::string>>& ontologies,
         const std::vector<std::string>& seeds, const std::string& seed_label,
         double threshold, const std::string& out_dir,
         const std::string& mode, const std::string& enrich, int max_rounds,
         int repair_passes, bool order_audit, bool auto_repair,
         bool use_definitions) {
        PipelineConfig config;
        config.seed_label = seed_label;
        config.seed_terms = seeds;
        for (const auto& [id, path] : ontologies)
          config.ontologies.emplace_back(id, path);
        config.threshold = threshold;
        config.match_mode = parse_match_mode(mode);
        config.enrich = parse_enrich_fields(enrich);
        config.max_rounds = max_rounds;
        config.repair_passes = repair_passes;
        config.order_audit = order_audit;
        config.auto_repair = auto_repair;
        config.use_definitions = use_definitions;
        config.out_dir = out_dir;
        return run_pipeline(config);
      },
      py::arg("ontologies"), py::arg("seeds"), py::arg("seed_label") = "seed",
      py::arg("threshold") = 0.95, py::arg("out_dir") = "out",
      py::arg("mode") = "substring", py::arg("enrich") = "ids,names",
      py::arg("max_rounds") = 32, py::arg("repair_passes") = 8,
      py::arg("order_audit") = false, py::arg("auto_repair") = false,
      py::arg("use_definitions") = true,
      "End-to-end: parse, fixpoint, map, bridge, merge, check, repair plan.");
}
