#include "ontofuse/obo.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ontofuse/error.hpp"
#include "ontofuse/version.hpp"

namespace ontofuse {

namespace {

// --- text utilities -------------------------------------------------------

void trim(std::string& s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
}

// Replaces structurally invalid UTF-8 bytes with '?'. Only sequence shape
// is checked; the parser itself is byte-oriented.
std::string sanitize_utf8(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    std::size_t len = 0;
    if (c < 0x80) len = 1;
    else if ((c & 0xE0) == 0xC0) len = 2;
    else if ((c & 0xF0) == 0xE0) len = 3;
    else if ((c & 0xF8) == 0xF0) len = 4;
    if (len == 0) {
      out += '?';
      ++i;
      continue;
    }
    bool ok = i + len <= text.size();
    for (std::size_t k = 1; ok && k < len; ++k)
      ok = (static_cast<unsigned char>(text[i + k]) & 0xC0) == 0x80;
    if (ok) {
      out.append(text, i, len);
      i += len;
    } else {
      out += '?';
      ++i;
    }
  }
  return out;
}

// Strips the trailing "! comment" and {qualifier} blocks, resolving the
// escapes that protect those specials. Escapes inside quoted strings are
// left for the quoted-value reader.
std::string clean_line(const std::string& raw) {
  std::string out;
  bool in_quote = false;
  std::size_t i = 0;
  while (i < raw.size()) {
    char c = raw[i];
    if (c == '\\' && i + 1 < raw.size()) {
      char next = raw[i + 1];
      if (!in_quote && (next == '!' || next == '{' || next == '}' || next == '\\')) {
        out += next;
      } else {
        out += c;
        out += next;
      }
      i += 2;
      continue;
    }
    if (c == '"') {
      in_quote = !in_quote;
      out += c;
      ++i;
      continue;
    }
    if (!in_quote && c == '!') break;
    if (!in_quote && c == '{') {
      while (i < raw.size() && raw[i] != '}') ++i;
      if (i < raw.size()) ++i;
      continue;
    }
    out += c;
    ++i;
  }
  trim(out);
  return out;
}

std::string escape_unquoted(const std::string& value) {
  std::string out;
  for (char c : value) {
    if (c == '!' || c == '{' || c == '}' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string escape_quoted(const std::string& value) {
  std::string out = "\"";
  for (char c : value) {
    if (c == '"' || c == '\\') { out += '\\'; out += c; }
    else if (c == '\n') out += "\\n";
    else out += c;
  }
  out += '"';
  return out;
}

// Reads a leading quoted string, honoring \" \\ \n. Returns false when the
// value does not start with a quote. rest receives everything after the
// closing quote.
bool read_quoted(const std::string& value, std::string& text,
                 std::string& rest) {
  if (value.empty() || value[0] != '"') return false;
  std::string out;
  std::size_t i = 1;
  while (i < value.size()) {
    char c = value[i];
    if (c == '\\' && i + 1 < value.size()) {
      char next = value[i + 1];
      if (next == '"' || next == '\\') out += next;
      else if (next == 'n') out += '\n';
      else { out += c; out += next; }
      i += 2;
      continue;
    }
    if (c == '"') {
      text = std::move(out);
      rest = value.substr(i + 1);
      trim(rest);
      return true;
    }
    out += c;
    ++i;
  }
  // Unterminated quote: take everything after the opening one.
  text = std::move(out);
  rest.clear();
  return true;
}

std::vector<std::string> tokens_of(const std::string& value) {
  std::vector<std::string> words;
  std::istringstream in(value);
  std::string word;
  while (in >> word) words.push_back(word);
  return words;
}

// --- ontology construction ------------------------------------------------

struct Builder {
  OntologyId id;
  Ontology onto;
  std::vector<Warning> warnings;

  void warn(int line, std::string message) {
    warnings.push_back({line, std::move(message)});
  }

  Annotations& slot(StanzaKind kind, const EntityId& entity) {
    auto& map = kind == StanzaKind::Typedef ? onto.relations : onto.classes;
    return map[entity];
  }

  void apply_stanza(const Stanza& stanza);
  void finish();
};

bool is_logical_tag(const std::string& tag) {
  return tag == "is_a" || tag == "relationship" || tag == "intersection_of" ||
         tag == "disjoint_from" || tag == "equivalent_to";
}

bool is_known_tag(const std::string& tag) {
  return tag == "id" || tag == "name" || tag == "def" || tag == "synonym" ||
         tag == "alt_id" || tag == "is_obsolete" || is_logical_tag(tag);
}

void Builder::apply_stanza(const Stanza& stanza) {
  if (stanza.kind == StanzaKind::Other) {
    warn(stanza.line, "ignored stanza [" + stanza.raw_kind + "]");
    return;
  }

  const TagLine* id_tag = nullptr;
  for (const auto& tag : stanza.tags) {
    if (tag.tag == "id") {
      if (!id_tag) id_tag = &tag;
      else warn(tag.line, "duplicate id tag ignored");
    }
  }
  if (!id_tag || tokens_of(id_tag->value).empty())
    throw Error(ErrorCode::MissingId,
                "line " + std::to_string(stanza.line) + ": [" +
                    stanza.raw_kind + "] stanza without id");

  const EntityId self = EntityId::parse(tokens_of(id_tag->value)[0]);
  const bool had_entity = stanza.kind == StanzaKind::Typedef
                              ? onto.relations.count(self) > 0
                              : onto.classes.count(self) > 0;
  if (had_entity) warn(stanza.line, "duplicate stanza for " + self.str());
  Annotations& ann = slot(stanza.kind, self);

  std::vector<ClassExpr> conjuncts;
  int first_intersection_line = 0;

  for (const auto& tag : stanza.tags) {
    if (tag.tag == "id") continue;

    if (stanza.kind == StanzaKind::Typedef && is_logical_tag(tag.tag)) {
      warn(tag.line, "logical tag '" + tag.tag + "' ignored in [Typedef]");
      continue;
    }

    if (tag.tag == "name") {
      if (ann.name && *ann.name != tag.value)
        warn(tag.line, "conflicting name for " + self.str() + " ignored");
      if (!ann.name) ann.name = tag.value;
    } else if (tag.tag == "def") {
      std::string text, rest;
      if (!read_quoted(tag.value, text, rest)) {
        warn(tag.line, "unquoted def value");
        text = tag.value;
      }
      if (ann.definition && *ann.definition != text)
        warn(tag.line, "conflicting def for " + self.str() + " ignored");
      if (!ann.definition) ann.definition = text;
    } else if (tag.tag == "synonym") {
      std::string text, rest;
      if (!read_quoted(tag.value, text, rest)) {
        warn(tag.line, "unquoted synonym value");
        text = tag.value;
        rest.clear();
      }
      SynonymScope scope = SynonymScope::Related;
      auto words = tokens_of(rest);
      if (!words.empty()) {
        if (words[0] == "EXACT") scope = SynonymScope::Exact;
        else if (words[0] == "BROAD") scope = SynonymScope::Broad;
        else if (words[0] == "NARROW") scope = SynonymScope::Narrow;
        else if (words[0] == "RELATED") scope = SynonymScope::Related;
      }
      ann.add_synonym({text, scope});
    } else if (tag.tag == "alt_id") {
      auto words = tokens_of(tag.value);
      if (words.empty()) {
        warn(tag.line, "empty alt_id ignored");
        continue;
      }
      EntityId alt = EntityId::parse(words[0]);
      if (std::find(ann.alt_ids.begin(), ann.alt_ids.end(), alt) ==
          ann.alt_ids.end())
        ann.alt_ids.push_back(alt);
    } else if (tag.tag == "is_obsolete") {
      if (tag.value == "true") ann.is_obsolete = true;
      else if (tag.value != "false")
        warn(tag.line, "unrecognized is_obsolete value '" + tag.value + "'");
    } else if (tag.tag == "is_a") {
      auto words = tokens_of(tag.value);
      if (words.empty())
        throw Error(ErrorCode::MalformedLine,
                    "line " + std::to_string(tag.line) + ": empty is_a");
      if (words.size() > 1) warn(tag.line, "trailing tokens after is_a id");
      onto.axioms.push_back(Axiom::subclass_of(
          self, ClassExpr::named(EntityId::parse(words[0])), id));
    } else if (tag.tag == "relationship") {
      auto words = tokens_of(tag.value);
      if (words.size() < 2)
        throw Error(ErrorCode::MalformedLine,
                    "line " + std::to_string(tag.line) +
                        ": relationship needs a relation and a target");
      if (words.size() > 2)
        warn(tag.line, "trailing tokens after relationship target");
      onto.axioms.push_back(Axiom::subclass_of(
          self,
          ClassExpr::some(EntityId::parse(words[0]),
                          EntityId::parse(words[1])),
          id));
    } else if (tag.tag == "intersection_of") {
      auto words = tokens_of(tag.value);
      if (words.empty())
        throw Error(ErrorCode::MalformedLine,
                    "line " + std::to_string(tag.line) +
                        ": empty intersection_of");
      if (words.size() > 2)
        warn(tag.line, "trailing tokens after intersection_of");
      if (!first_intersection_line) first_intersection_line = tag.line;
      if (words.size() == 1)
        conjuncts.push_back(ClassExpr::named(EntityId::parse(words[0])));
      else
        conjuncts.push_back(ClassExpr::some(EntityId::parse(words[0]),
                                            EntityId::parse(words[1])));
    } else if (tag.tag == "disjoint_from") {
      auto words = tokens_of(tag.value);
      if (words.empty())
        throw Error(ErrorCode::MalformedLine,
                    "line " + std::to_string(tag.line) +
                        ": empty disjoint_from");
      onto.axioms.push_back(
          Axiom::disjoint(self, EntityId::parse(words[0]), id));
    } else if (tag.tag == "equivalent_to") {
      auto words = tokens_of(tag.value);
      if (words.empty())
        throw Error(ErrorCode::MalformedLine,
                    "line " + std::to_string(tag.line) +
                        ": empty equivalent_to");
      onto.axioms.push_back(
          Axiom::equivalent(self, EntityId::parse(words[0]), id));
    } else {
      warn(tag.line, "unknown tag '" + tag.tag + "' ignored");
    }
  }

  if (conjuncts.size() == 1)
    throw Error(ErrorCode::DanglingIntersection,
                "line " + std::to_string(first_intersection_line) +
                    ": stanza " + self.str() +
                    " has a single intersection_of line");
  if (conjuncts.size() >= 2)
    onto.axioms.push_back(Axiom::equivalent_to_intersection(
        self, ClassExpr::intersection(std::move(conjuncts)), id));
}

void Builder::finish() {
  // Auto-declare referenced-but-undeclared entities: class positions into
  // classes, relation positions into relations.
  auto declare_class = [this](const EntityId& e) {
    if (!onto.declares(e)) {
      onto.classes[e] = Annotations{};
      warn(0, "auto-declared class " + e.str());
    }
  };
  auto declare_relation = [this](const EntityId& e) {
    if (!onto.declares(e)) {
      onto.relations[e] = Annotations{};
      warn(0, "auto-declared relation " + e.str());
    }
  };
  auto walk_expr = [&](const ClassExpr& e, auto&& self) -> void {
    switch (e.kind) {
      case ExprKind::Named:
        declare_class(e.entity);
        break;
      case ExprKind::Some:
        declare_relation(e.entity);
        declare_class(e.filler);
        break;
      case ExprKind::And:
        for (const auto& c : e.conjuncts) self(c, self);
        break;
    }
  };
  for (const auto& axiom : onto.axioms) {
    declare_class(axiom.lhs);
    switch (axiom.kind) {
      case AxiomKind::SubClassOf:
      case AxiomKind::EquivalentToIntersection:
        walk_expr(axiom.rhs, walk_expr);
        break;
      case AxiomKind::Disjoint:
      case AxiomKind::Equivalent:
        declare_class(axiom.rhs_entity);
        break;
    }
  }
  canonicalize_axioms(onto.axioms);
}

// --- serialization --------------------------------------------------------

void append_tag(std::string& out, const std::string& tag,
                const std::string& value) {
  out += tag;
  out += ": ";
  out += value;
  out += '\n';
}

void serialize_entity(std::string& out, const EntityId& entity,
                      const Annotations& ann, bool is_relation,
                      const std::vector<Axiom>& axioms) {
  out += is_relation ? "[Typedef]\n" : "[Term]\n";
  append_tag(out, "id", escape_unquoted(entity.str()));
  if (ann.name) append_tag(out, "name", escape_unquoted(*ann.name));
  if (ann.definition)
    append_tag(out, "def", escape_quoted(*ann.definition) + " []");
  for (const auto& syn : ann.synonyms)
    append_tag(out, "synonym",
               escape_quoted(syn.text) + " " +
                   synonym_scope_name(syn.scope) + " []");
  for (const auto& alt : ann.alt_ids)
    append_tag(out, "alt_id", escape_unquoted(alt.str()));

  // Axioms are already canonically sorted; emit the ones anchored here.
  // SubClassOf with an And superclass is split conjunct-wise (A <= B and C
  // is the same as A <= B plus A <= C).
  std::vector<const ClassExpr*> is_a, rel;
  const ClassExpr* inter = nullptr;
  std::vector<const EntityId*> disjoint, equivalent;
  std::vector<ClassExpr> split;
  for (const auto& axiom : axioms) {
    if (axiom.lhs != entity) continue;
    switch (axiom.kind) {
      case AxiomKind::SubClassOf:
        if (axiom.rhs.kind == ExprKind::And)
          for (const auto& c : axiom.rhs.conjuncts) split.push_back(c);
        else if (axiom.rhs.kind == ExprKind::Named)
          is_a.push_back(&axiom.rhs);
        else
          rel.push_back(&axiom.rhs);
        break;
      case AxiomKind::EquivalentToIntersection:
        inter = &axiom.rhs;
        break;
      case AxiomKind::Disjoint:
        disjoint.push_back(&axiom.rhs_entity);
        break;
      case AxiomKind::Equivalent:
        equivalent.push_back(&axiom.rhs_entity);
        break;
    }
  }
  for (const auto& c : split) {
    if (c.kind == ExprKind::Named) is_a.push_back(&c);
    else rel.push_back(&c);
  }

  for (const auto* e : is_a) append_tag(out, "is_a", e->entity.str());
  if (inter)
    for (const auto& c : inter->conjuncts)
      append_tag(out, "intersection_of",
                 c.kind == ExprKind::Named
                     ? c.entity.str()
                     : c.entity.str() + " " + c.filler.str());
  for (const auto* e : rel)
    append_tag(out, "relationship", e->entity.str() + " " + e->filler.str());
  for (const auto* e : disjoint) append_tag(out, "disjoint_from", e->str());
  for (const auto* e : equivalent) append_tag(out, "equivalent_to", e->str());
  if (ann.is_obsolete) append_tag(out, "is_obsolete", "true");
  out += '\n';
}

std::string serialize_maps(const std::string& id,
                           const std::map<EntityId, Annotations>& classes,
                           const std::map<EntityId, Annotations>& relations,
                           const std::vector<Axiom>& axioms,
                           const std::vector<std::string>& imports) {
  std::string out;
  append_tag(out, "format-version", "1.2");
  append_tag(out, "ontology", id);
  for (const auto& imp : imports) append_tag(out, "import", imp);
  append_tag(out, "generated-by", std::string("ontofuse ") + ONTOFUSE_VERSION);
  out += '\n';

  // Interleave classes and relations in one EntityId order.
  auto ci = classes.begin();
  auto ri = relations.begin();
  while (ci != classes.end() || ri != relations.end()) {
    bool take_class = ri == relations.end() ||
                      (ci != classes.end() && ci->first < ri->first);
    if (take_class) {
      serialize_entity(out, ci->first, ci->second, false, axioms);
      ++ci;
    } else {
      serialize_entity(out, ri->first, ri->second, true, axioms);
      ++ri;
    }
  }
  while (out.size() >= 2 && out[out.size() - 1] == '\n' &&
         out[out.size() - 2] == '\n')
    out.pop_back();
  return out;
}

}  // namespace

std::vector<std::string> OboDocument::header_values(
    const std::string& key) const {
  std::vector<std::string> values;
  for (const auto& tag : header)
    if (tag.tag == key) values.push_back(tag.value);
  return values;
}

OboDocument parse_document(const std::string& text) {
  OboDocument doc;
  std::string clean = sanitize_utf8(text);
  if (clean.rfind("\xEF\xBB\xBF", 0) == 0) clean.erase(0, 3);

  Stanza* current = nullptr;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= clean.size()) {
    std::size_t eol = clean.find('\n', pos);
    std::string raw = clean.substr(
        pos, eol == std::string::npos ? std::string::npos : eol - pos);
    pos = eol == std::string::npos ? clean.size() + 1 : eol + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();

    std::string line = clean_line(raw);
    if (line.empty()) continue;

    if (line[0] == '[') {
      if (line.back() != ']' || line.size() < 3)
        throw Error(ErrorCode::MalformedLine,
                    "line " + std::to_string(line_no) +
                        ": malformed stanza header '" + line + "'");
      Stanza stanza;
      stanza.raw_kind = line.substr(1, line.size() - 2);
      stanza.kind = stanza.raw_kind == "Term"      ? StanzaKind::Term
                    : stanza.raw_kind == "Typedef" ? StanzaKind::Typedef
                                                   : StanzaKind::Other;
      stanza.line = line_no;
      doc.stanzas.push_back(std::move(stanza));
      current = &doc.stanzas.back();
      continue;
    }

    auto sep = line.find(": ");
    if (sep == std::string::npos || sep == 0)
      throw Error(ErrorCode::MalformedLine,
                  "line " + std::to_string(line_no) +
                      ": expected 'tag: value' in '" + line + "'");
    TagLine tag;
    tag.tag = line.substr(0, sep);
    tag.value = line.substr(sep + 2);
    trim(tag.tag);
    trim(tag.value);
    tag.line = line_no;
    if (current) current->tags.push_back(std::move(tag));
    else doc.header.push_back(std::move(tag));
  }
  return doc;
}

std::string serialize_document(const OboDocument& doc) {
  std::string out;
  for (const auto& tag : doc.header)
    append_tag(out, tag.tag, escape_unquoted(tag.value));
  for (const auto& stanza : doc.stanzas) {
    out += '\n';
    out += '[' + stanza.raw_kind + "]\n";
    for (const auto& tag : stanza.tags) {
      // Quoted values keep their own escaping; see clean_line.
      bool quoted = !tag.value.empty() && tag.value[0] == '"';
      append_tag(out, tag.tag, quoted ? tag.value : escape_unquoted(tag.value));
    }
  }
  return out;
}

ParseResult ontology_from_document(const OboDocument& doc, OntologyId id) {
  Builder builder;
  builder.id = id;
  builder.onto.id = std::move(id);
  for (const auto& stanza : doc.stanzas) builder.apply_stanza(stanza);
  builder.finish();
  return {std::move(builder.onto), std::move(builder.warnings)};
}

ParseResult parse_obo(const std::string& text, OntologyId id) {
  return ontology_from_document(parse_document(text), std::move(id));
}

ParseResult parse_obo_file(const std::string& path,
                           const OntologyId& id_override) {
  OboDocument doc = parse_document(read_file(path));
  OntologyId id = id_override;
  if (id.empty()) {
    // Prefer the document's own ontology header so written artifacts stay
    // self-identifying; fall back to the file stem.
    auto declared = doc.header_values("ontology");
    id = declared.empty() || declared.front().empty() ? file_stem(path)
                                                      : declared.front();
  }
  return ontology_from_document(doc, std::move(id));
}

std::string serialize_obo(const Ontology& ontology) {
  return serialize_maps(ontology.id, ontology.classes, ontology.relations,
                        ontology.axioms, {});
}

std::string serialize_obo(const Module& module) {
  return serialize_maps(module.source, module.carried_classes,
                        module.carried_relations, module.axioms, {});
}

std::string module_file_name(const std::string& seed_label,
                             const OntologyId& source) {
  return seed_label + "_from_" + source + ".obo";
}

std::string file_stem(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << content;
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path);
}

}  // namespace ontofuse
