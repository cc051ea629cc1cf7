#include "ontofuse/integrate.hpp"

#include <algorithm>

#include "ontofuse/error.hpp"
#include "ontofuse/obo.hpp"

namespace ontofuse {

BridgeOntology build_bridge(const std::vector<Module>& modules,
                            const MappingSet& maps,
                            const std::string& seed_label) {
  BridgeOntology bridge;
  bridge.id = seed_label + "_bridge";

  std::vector<OntologyId> sources;
  for (const auto& module : modules) sources.push_back(module.source);
  std::sort(sources.begin(), sources.end());
  sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
  for (const auto& source : sources)
    bridge.imports.push_back(module_file_name(seed_label, source));

  auto module_by_source = [&](const OntologyId& id) -> const Module* {
    for (const auto& module : modules)
      if (module.source == id) return &module;
    return nullptr;
  };

  for (const auto& mapping : maps.mappings) {
    const Module* src = module_by_source(mapping.source_ontology);
    const Module* dst = module_by_source(mapping.target_ontology);
    if (!src || !src->carried_classes.count(mapping.source_id))
      throw Error(ErrorCode::UnknownEndpoint,
                  mapping.source_id.str() + " is not a class of module " +
                      mapping.source_ontology);
    if (!dst || !dst->carried_classes.count(mapping.target_id))
      throw Error(ErrorCode::UnknownEndpoint,
                  mapping.target_id.str() + " is not a class of module " +
                      mapping.target_ontology);
    bridge.bridge_axioms.push_back(Axiom::equivalent(
        mapping.source_id, mapping.target_id, kBridgeProvenance));
  }
  canonicalize_axioms(bridge.bridge_axioms);
  return bridge;
}

std::string serialize_bridge(const BridgeOntology& bridge) {
  // Reuse the ontology serializer: each axiom endpoint becomes a bare
  // declaration; the imports ride in the header.
  Ontology onto;
  onto.id = bridge.id;
  onto.axioms = bridge.bridge_axioms;
  for (const auto& axiom : bridge.bridge_axioms) {
    onto.classes.emplace(axiom.lhs, Annotations{});
    onto.classes.emplace(axiom.rhs_entity, Annotations{});
  }
  std::string body = serialize_obo(onto);

  // Splice the import lines after the ontology header tag.
  std::string imports;
  for (const auto& path : bridge.imports)
    imports += "import: " + path + "\n";
  auto anchor = body.find("generated-by:");
  body.insert(anchor == std::string::npos ? 0 : anchor, imports);
  return body;
}

BridgeOntology parse_bridge(const std::string& text, const std::string& id) {
  OboDocument doc = parse_document(text);
  BridgeOntology bridge;
  bridge.id = id;
  bridge.imports = doc.header_values("import");
  ParseResult parsed = ontology_from_document(doc, id);
  for (auto& axiom : parsed.ontology.axioms) {
    if (axiom.kind != AxiomKind::Equivalent)
      throw Error(ErrorCode::MalformedLine,
                  "bridge documents may only contain equivalent_to axioms");
    axiom.provenance = kBridgeProvenance;
    bridge.bridge_axioms.push_back(std::move(axiom));
  }
  return bridge;
}

namespace {

void merge_annotations(std::map<EntityId, Annotations>& target,
                       const EntityId& entity, const Annotations& incoming,
                       const OntologyId& incoming_from,
                       std::map<EntityId, OntologyId>& first_source,
                       std::vector<ConflictNote>& conflicts) {
  auto it = target.find(entity);
  if (it == target.end()) {
    target.emplace(entity, incoming);
    first_source[entity] = incoming_from;
    return;
  }
  Annotations& kept = it->second;
  const OntologyId& kept_from = first_source[entity];
  if (incoming.name && kept.name && *incoming.name != *kept.name)
    conflicts.push_back({entity, "NAME", kept_from, *kept.name,
                         incoming_from, *incoming.name});
  if (incoming.name && !kept.name) kept.name = incoming.name;
  if (incoming.definition && kept.definition &&
      *incoming.definition != *kept.definition)
    conflicts.push_back({entity, "DEF", kept_from, *kept.definition,
                         incoming_from, *incoming.definition});
  if (incoming.definition && !kept.definition)
    kept.definition = incoming.definition;
  for (const auto& syn : incoming.synonyms) kept.add_synonym(syn);
  for (const auto& alt : incoming.alt_ids)
    if (std::find(kept.alt_ids.begin(), kept.alt_ids.end(), alt) ==
        kept.alt_ids.end())
      kept.alt_ids.push_back(alt);
  kept.is_obsolete = kept.is_obsolete || incoming.is_obsolete;
}

void add_axiom(std::vector<MergedAxiom>& axioms, const Axiom& axiom,
               const OntologyId& provenance) {
  for (auto& existing : axioms) {
    if (logical_eq(existing.axiom, axiom)) {
      auto& provs = existing.provenances;
      if (std::find(provs.begin(), provs.end(), provenance) == provs.end()) {
        provs.push_back(provenance);
        std::sort(provs.begin(), provs.end());
      }
      return;
    }
  }
  axioms.push_back({axiom, {provenance}});
}

}  // namespace

MergedOntology merge(const std::vector<Module>& parts,
                     const BridgeOntology& bridge, const std::string& id) {
  // Canonical ontology order decides annotation conflicts.
  std::vector<const Module*> ordered;
  for (const auto& part : parts) ordered.push_back(&part);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const Module* a, const Module* b) {
                     return a->source < b->source;
                   });

  MergedOntology merged;
  merged.id = id;
  std::map<EntityId, OntologyId> first_class_source, first_relation_source;
  for (const Module* part : ordered) {
    for (const auto& [entity, ann] : part->carried_classes)
      merge_annotations(merged.classes, entity, ann, part->source,
                        first_class_source, merged.conflicts);
    for (const auto& [entity, ann] : part->carried_relations)
      merge_annotations(merged.relations, entity, ann, part->source,
                        first_relation_source, merged.conflicts);
    for (const auto& axiom : part->axioms)
      add_axiom(merged.axioms, axiom, part->source);
  }
  for (const auto& axiom : bridge.bridge_axioms) {
    add_axiom(merged.axioms, axiom, kBridgeProvenance);
    merged.classes.emplace(axiom.lhs, Annotations{});
    merged.classes.emplace(axiom.rhs_entity, Annotations{});
  }

  std::sort(merged.axioms.begin(), merged.axioms.end(),
            [](const MergedAxiom& a, const MergedAxiom& b) {
              return logical_less(a.axiom, b.axiom);
            });
  std::sort(merged.conflicts.begin(), merged.conflicts.end(),
            [](const ConflictNote& a, const ConflictNote& b) {
              return std::tie(a.entity, a.field, a.dropped_from) <
                     std::tie(b.entity, b.field, b.dropped_from);
            });
  return merged;
}

std::vector<PairMerge> pairwise_merges(const std::vector<Module>& modules,
                                       const BridgeOntology& bridge) {
  if (modules.size() < 2)
    throw Error(ErrorCode::TooFewModules,
                "pairwise merges need at least two modules");

  std::vector<const Module*> ordered;
  for (const auto& module : modules) ordered.push_back(&module);
  std::sort(ordered.begin(), ordered.end(),
            [](const Module* a, const Module* b) {
              return a->source < b->source;
            });

  std::vector<PairMerge> result;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    for (std::size_t j = i + 1; j < ordered.size(); ++j) {
      const Module& a = *ordered[i];
      const Module& b = *ordered[j];
      BridgeOntology restricted;
      restricted.id = bridge.id;
      for (const auto& axiom : bridge.bridge_axioms) {
        bool lhs_in = a.carries(axiom.lhs) || b.carries(axiom.lhs);
        bool rhs_in = a.carries(axiom.rhs_entity) || b.carries(axiom.rhs_entity);
        if (lhs_in && rhs_in) restricted.bridge_axioms.push_back(axiom);
      }
      PairMerge pm;
      pm.pair = {a.source, b.source};
      pm.merged = merge({a, b}, restricted, a.source + "+" + b.source);
      result.push_back(std::move(pm));
    }
  }
  return result;
}

Ontology merged_to_ontology(const MergedOntology& merged) {
  Ontology onto;
  onto.id = merged.id;
  onto.classes = merged.classes;
  onto.relations = merged.relations;
  for (const auto& entry : merged.axioms) onto.axioms.push_back(entry.axiom);
  canonicalize_axioms(onto.axioms);
  return onto;
}

std::string conflicts_tsv(const MergedOntology& merged) {
  std::string out =
      "# entity\tfield\tkept_from\tkept_value\tdropped_from\tdropped_value\n";
  for (const auto& note : merged.conflicts) {
    out += note.entity.str();
    out += '\t';
    out += note.field;
    out += '\t';
    out += note.kept_from;
    out += '\t';
    out += note.kept_value;
    out += '\t';
    out += note.dropped_from;
    out += '\t';
    out += note.dropped_value;
    out += '\n';
  }
  return out;
}

}  // namespace ontofuse
