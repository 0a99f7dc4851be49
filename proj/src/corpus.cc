#include "nestex/corpus.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace nestex {

using ordered_json = nlohmann::ordered_json;

const TriggerMention* Sentence::find_trigger(const std::string& mention_id) const {
  for (const auto& t : triggers) {
    if (t.id == mention_id) return &t;
  }
  return nullptr;
}

const EntityMention* Sentence::find_entity(const std::string& mention_id) const {
  for (const auto& e : entities) {
    if (e.id == mention_id) return &e;
  }
  return nullptr;
}

std::optional<Span> Sentence::span_of(const std::string& mention_id) const {
  if (const auto* t = find_trigger(mention_id)) return t->span;
  if (const auto* e = find_entity(mention_id)) return e->span;
  return std::nullopt;
}

namespace {

std::unordered_map<std::string, int> index_labels(
    const std::vector<std::string>& labels, const char* what) {
  std::unordered_map<std::string, int> index;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!index.emplace(labels[i], static_cast<int>(i)).second) {
      throw std::invalid_argument(std::string("duplicate ") + what +
                                  " label: " + labels[i]);
    }
  }
  return index;
}

int lookup(const std::unordered_map<std::string, int>& index,
           const std::string& label) {
  auto it = index.find(label);
  return it == index.end() ? -1 : it->second;
}

}  // namespace

LabelVocab::LabelVocab(std::vector<std::string> event_types,
                       std::vector<std::string> roles,
                       std::vector<std::string> entity_types)
    : event_types_(std::move(event_types)),
      roles_(std::move(roles)),
      entity_types_(std::move(entity_types)),
      event_index_(index_labels(event_types_, "event type")),
      role_index_(index_labels(roles_, "role")),
      entity_index_(index_labels(entity_types_, "entity type")) {}

int LabelVocab::event_type_index(const std::string& label) const {
  return lookup(event_index_, label);
}
int LabelVocab::role_index(const std::string& label) const {
  return lookup(role_index_, label);
}
int LabelVocab::entity_type_index(const std::string& label) const {
  return lookup(entity_index_, label);
}

LabelVocab LabelVocab::from_json_text(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  auto list = [&](const char* key) {
    std::vector<std::string> out;
    if (j.contains(key)) out = j.at(key).get<std::vector<std::string>>();
    return out;
  };
  return LabelVocab(list("event_types"), list("roles"), list("entity_types"));
}

LabelVocab LabelVocab::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open schema file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return from_json_text(buffer.str());
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed schema file " + path + ": " + e.what());
  }
}

std::string LabelVocab::to_json_text() const {
  ordered_json j;
  j["event_types"] = event_types_;
  j["roles"] = roles_;
  j["entity_types"] = entity_types_;
  return j.dump(2);
}

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what),
      line_(line) {}

ValidationError::ValidationError(const std::string& sentence_id,
                                 const std::string& field,
                                 const std::string& what)
    : std::runtime_error("sentence '" + sentence_id + "', " + field + ": " +
                         what),
      sentence_id_(sentence_id),
      field_(field) {}

namespace {

void check_span(const Sentence& s, const Span& span, const std::string& field) {
  const int n = static_cast<int>(s.tokens.size());
  if (span.start < 0 || span.start >= span.end || span.end > n) {
    throw ValidationError(s.id, field,
                          "span [" + std::to_string(span.start) + "," +
                              std::to_string(span.end) + ") out of range for " +
                              std::to_string(n) + " tokens");
  }
}

}  // namespace

std::vector<std::string> validate(const Sentence& s, const LabelVocab& vocab) {
  std::vector<std::string> warnings;
  std::set<std::string> ids;
  auto claim_id = [&](const std::string& id, const std::string& field) {
    if (id.empty()) throw ValidationError(s.id, field, "empty mention id");
    if (!ids.insert(id).second) {
      throw ValidationError(s.id, field, "duplicate mention id '" + id + "'");
    }
  };

  for (std::size_t i = 0; i < s.entities.size(); ++i) {
    const auto& e = s.entities[i];
    const std::string field = "entities[" + std::to_string(i) + "]";
    claim_id(e.id, field + ".id");
    check_span(s, e.span, field);
    if (e.entity_type && vocab.entity_type_index(*e.entity_type) < 0) {
      throw ValidationError(s.id, field + ".type",
                            "unknown entity type '" + *e.entity_type + "'");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (s.entities[j].span == e.span) {
        throw ValidationError(s.id, field,
                              "identical span to entity '" + s.entities[j].id + "'");
      }
      if (s.entities[j].span.overlaps(e.span)) {
        throw ValidationError(s.id, field,
                              "overlaps entity '" + s.entities[j].id + "'");
      }
    }
  }

  for (std::size_t i = 0; i < s.triggers.size(); ++i) {
    const auto& t = s.triggers[i];
    const std::string field = "triggers[" + std::to_string(i) + "]";
    claim_id(t.id, field + ".id");
    check_span(s, t.span, field);
    if (vocab.event_type_index(t.event_type) < 0) {
      throw ValidationError(s.id, field + ".type",
                            "unknown event type '" + t.event_type + "'");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (s.triggers[j].span.overlaps(t.span)) {
        throw ValidationError(s.id, field,
                              "overlaps trigger '" + s.triggers[j].id + "'");
      }
    }
    for (const auto& e : s.entities) {
      if (e.span.overlaps(t.span)) {
        warnings.push_back("sentence '" + s.id + "': trigger '" + t.id +
                           "' overlaps entity '" + e.id + "'");
      }
    }
  }

  std::set<std::pair<std::string, std::string>> pairs;
  for (std::size_t i = 0; i < s.arguments.size(); ++i) {
    const auto& a = s.arguments[i];
    const std::string field = "arguments[" + std::to_string(i) + "]";
    if (!s.find_trigger(a.parent)) {
      throw ValidationError(
          s.id, field + ".parent",
          s.find_entity(a.parent)
              ? "parent '" + a.parent + "' is an entity, not a trigger"
              : "dangling parent id '" + a.parent + "'");
    }
    if (!s.find_trigger(a.child) && !s.find_entity(a.child)) {
      throw ValidationError(s.id, field + ".child",
                            "dangling child id '" + a.child + "'");
    }
    if (a.child == a.parent) {
      throw ValidationError(s.id, field, "self-link on '" + a.parent + "'");
    }
    if (vocab.role_index(a.role) < 0) {
      throw ValidationError(s.id, field + ".role", "unknown role '" + a.role + "'");
    }
    if (!pairs.emplace(a.parent, a.child).second) {
      throw ValidationError(s.id, field,
                            "duplicate link " + a.parent + " -> " + a.child);
    }
  }
  return warnings;
}

namespace {

using json = nlohmann::json;

void require_keys(const json& obj, std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional,
                  const std::string& where) {
  if (!obj.is_object()) throw std::runtime_error(where + " is not an object");
  for (const char* key : required) {
    if (!obj.contains(key)) {
      throw std::runtime_error(where + " is missing key '" + key + "'");
    }
  }
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : required) known = known || item.key() == key;
    for (const char* key : optional) known = known || item.key() == key;
    if (!known) {
      throw std::runtime_error(where + " has unknown key '" + item.key() + "'");
    }
  }
}

Span read_span(const json& obj) {
  return Span{obj.at("start").get<int>(), obj.at("end").get<int>()};
}

Sentence from_json(const json& j) {
  require_keys(j, {"id", "tokens", "entities", "triggers", "arguments"}, {},
               "record");
  Sentence s;
  s.id = j.at("id").get<std::string>();
  s.tokens = j.at("tokens").get<std::vector<std::string>>();
  for (const auto& e : j.at("entities")) {
    require_keys(e, {"id", "start", "end"}, {"type"}, "entity");
    EntityMention m{e.at("id").get<std::string>(), read_span(e), std::nullopt};
    if (e.contains("type")) m.entity_type = e.at("type").get<std::string>();
    s.entities.push_back(std::move(m));
  }
  for (const auto& t : j.at("triggers")) {
    require_keys(t, {"id", "start", "end", "type"}, {}, "trigger");
    s.triggers.push_back(TriggerMention{t.at("id").get<std::string>(),
                                        read_span(t),
                                        t.at("type").get<std::string>()});
  }
  for (const auto& a : j.at("arguments")) {
    require_keys(a, {"parent", "child", "role"}, {}, "argument");
    s.arguments.push_back(ArgumentLink{a.at("parent").get<std::string>(),
                                       a.at("child").get<std::string>(),
                                       a.at("role").get<std::string>()});
  }
  return s;
}

}  // namespace

Sentence parse_record(const std::string& line, std::size_t line_number,
                      const LabelVocab& vocab) {
  Sentence s;
  try {
    s = from_json(json::parse(line));
  } catch (const json::exception& e) {
    throw ParseError(line_number, e.what());
  } catch (const std::runtime_error& e) {
    throw ParseError(line_number, e.what());
  }
  validate(s, vocab);
  return s;
}

std::vector<Sentence> parse_jsonl(std::istream& in, const LabelVocab& vocab) {
  std::vector<Sentence> out;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_record(line, line_number, vocab));
  }
  return out;
}

std::vector<Sentence> parse_jsonl(const std::string& path,
                                  const LabelVocab& vocab) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  return parse_jsonl(in, vocab);
}

std::string to_jsonl_record(const Sentence& s) {
  ordered_json j;
  j["id"] = s.id;
  j["tokens"] = s.tokens;
  j["entities"] = ordered_json::array();
  for (const auto& e : s.entities) {
    ordered_json m;
    m["id"] = e.id;
    m["start"] = e.span.start;
    m["end"] = e.span.end;
    if (e.entity_type) m["type"] = *e.entity_type;
    j["entities"].push_back(std::move(m));
  }
  j["triggers"] = ordered_json::array();
  for (const auto& t : s.triggers) {
    ordered_json m;
    m["id"] = t.id;
    m["start"] = t.span.start;
    m["end"] = t.span.end;
    m["type"] = t.event_type;
    j["triggers"].push_back(std::move(m));
  }
  j["arguments"] = ordered_json::array();
  for (const auto& a : s.arguments) {
    ordered_json m;
    m["parent"] = a.parent;
    m["child"] = a.child;
    m["role"] = a.role;
    j["arguments"].push_back(std::move(m));
  }
  return j.dump();
}

void write_jsonl(const std::vector<Sentence>& sentences, std::ostream& out) {
  for (const auto& s : sentences) out << to_jsonl_record(s) << '\n';
}

void write_jsonl(const std::vector<Sentence>& sentences,
                 const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write corpus file: " + path);
  write_jsonl(sentences, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::set<std::string> derive_pivots(const Sentence& s) {
  std::set<std::string> pivots;
  for (const auto& a : s.arguments) {
    if (s.find_trigger(a.child)) pivots.insert(a.child);
  }
  return pivots;
}

}  // namespace nestex
