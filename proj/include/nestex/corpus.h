#ifndef NESTEX_CORPUS_H_
#define NESTEX_CORPUS_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace nestex {

// Half-open token range [start, end).
struct Span {
  int start = 0;
  int end = 0;

  int length() const { return end - start; }
  bool overlaps(const Span& other) const {
    return start < other.end && other.start < end;
  }
  friend auto operator<=>(const Span&, const Span&) = default;
};

struct TriggerMention {
  std::string id;
  Span span;
  std::string event_type;
  friend bool operator==(const TriggerMention&, const TriggerMention&) = default;
};

struct EntityMention {
  std::string id;
  Span span;
  std::optional<std::string> entity_type;
  friend bool operator==(const EntityMention&, const EntityMention&) = default;
};

// parent is always a trigger; child is a trigger (a pivot element) or entity.
struct ArgumentLink {
  std::string parent;
  std::string child;
  std::string role;
  friend bool operator==(const ArgumentLink&, const ArgumentLink&) = default;
};

struct Sentence {
  std::string id;
  std::vector<std::string> tokens;
  std::vector<EntityMention> entities;
  std::vector<TriggerMention> triggers;
  std::vector<ArgumentLink> arguments;

  const TriggerMention* find_trigger(const std::string& mention_id) const;
  const EntityMention* find_entity(const std::string& mention_id) const;
  // Span of a trigger or entity mention; nullopt for unknown ids.
  std::optional<Span> span_of(const std::string& mention_id) const;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

// Ordered, index-stable label inventories.
class LabelVocab {
 public:
  LabelVocab() = default;
  LabelVocab(std::vector<std::string> event_types,
             std::vector<std::string> roles,
             std::vector<std::string> entity_types = {});

  const std::vector<std::string>& event_types() const { return event_types_; }
  const std::vector<std::string>& roles() const { return roles_; }
  const std::vector<std::string>& entity_types() const { return entity_types_; }

  // -1 when the label is unknown.
  int event_type_index(const std::string& label) const;
  int role_index(const std::string& label) const;
  int entity_type_index(const std::string& label) const;

  // {"event_types": [...], "roles": [...], "entity_types": [...]}
  static LabelVocab load(const std::string& path);
  static LabelVocab from_json_text(const std::string& text);
  std::string to_json_text() const;

  friend bool operator==(const LabelVocab& a, const LabelVocab& b) {
    return a.event_types_ == b.event_types_ && a.roles_ == b.roles_ &&
           a.entity_types_ == b.entity_types_;
  }

 private:
  std::vector<std::string> event_types_;
  std::vector<std::string> roles_;
  std::vector<std::string> entity_types_;
  std::unordered_map<std::string, int> event_index_;
  std::unordered_map<std::string, int> role_index_;
  std::unordered_map<std::string, int> entity_index_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public std::runtime_error {
 public:
  ValidationError(const std::string& sentence_id, const std::string& field,
                  const std::string& what);
  const std::string& sentence_id() const { return sentence_id_; }
  const std::string& field() const { return field_; }

 private:
  std::string sentence_id_;
  std::string field_;
};

// Throws ValidationError on the first violated invariant. Returns warnings
// for permitted-but-notable situations (trigger/entity overlap).
std::vector<std::string> validate(const Sentence& s, const LabelVocab& vocab);

std::vector<Sentence> parse_jsonl(const std::string& path,
                                  const LabelVocab& vocab);
std::vector<Sentence> parse_jsonl(std::istream& in, const LabelVocab& vocab);
Sentence parse_record(const std::string& line, std::size_t line_number,
                      const LabelVocab& vocab);

// Canonical single-line serialization (keys id, tokens, entities, triggers,
// arguments; no whitespace).
std::string to_jsonl_record(const Sentence& s);
void write_jsonl(const std::vector<Sentence>& sentences, std::ostream& out);
void write_jsonl(const std::vector<Sentence>& sentences,
                 const std::string& path);

// Triggers that occur as the child of some argument link.
std::set<std::string> derive_pivots(const Sentence& s);

}  // namespace nestex

#endif  // NESTEX_CORPUS_H_
