#pragma once

#include <string>
#include <vector>

#include "ontofuse/model.hpp"

namespace ontofuse {

struct TagLine {
  std::string tag;
  std::string value;
  int line = 0;

  bool operator==(const TagLine& other) const {
    return tag == other.tag && value == other.value;
  }
};

enum class StanzaKind { Term, Typedef, Other };

struct Stanza {
  StanzaKind kind = StanzaKind::Other;
  std::string raw_kind;  // text inside the brackets, e.g. "Term"
  std::vector<TagLine> tags;
  int line = 0;
};

/// Low-level view of an OBO file: header tag lines followed by stanzas,
/// both in document order. Comments and trailing {qualifier} blocks are
/// already stripped from the values.
struct OboDocument {
  std::vector<TagLine> header;
  std::vector<Stanza> stanzas;

  /// Values of every header tag with the given key, in order.
  std::vector<std::string> header_values(const std::string& key) const;
};

struct Warning {
  int line = 0;
  std::string message;
};

struct ParseResult {
  Ontology ontology;
  std::vector<Warning> warnings;
};

/// Splits text into header and stanzas. Throws Error{MalformedLine} on tag
/// lines without a ": " separator or broken stanza headers. Invalid UTF-8
/// bytes are replaced with '?' rather than rejected.
OboDocument parse_document(const std::string& text);

/// Re-emits a document preserving stanza order and tag order.
std::string serialize_document(const OboDocument& doc);

/// Builds the normalized ontology from a document. Unknown tags, ignored
/// stanzas, and auto-declared entities are reported as warnings. Throws
/// Error{MissingId, DanglingIntersection}.
ParseResult ontology_from_document(const OboDocument& doc, OntologyId id);

/// parse_document + ontology_from_document.
ParseResult parse_obo(const std::string& text, OntologyId id);

/// Reads a file; the ontology id defaults to the file stem.
ParseResult parse_obo_file(const std::string& path,
                           const OntologyId& id_override = "");

/// Deterministic OBO text: stanzas sorted by EntityId, tags in fixed order
/// (id, name, def, synonym*, alt_id*, is_a*, intersection_of*,
/// relationship*, disjoint_from*, equivalent_to*, is_obsolete).
std::string serialize_obo(const Ontology& ontology);
std::string serialize_obo(const Module& module);

/// Module file name convention: "<seedLabel>_from_<ontologyId>.obo".
std::string module_file_name(const std::string& seed_label,
                             const OntologyId& source);

std::string file_stem(const std::string& path);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace ontofuse
