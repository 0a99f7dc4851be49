#ifndef NESTEX_SYNTH_H_
#define NESTEX_SYNTH_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "nestex/corpus.h"

namespace nestex {

struct EventLexicon {
  std::string type;
  std::vector<std::string> lexemes;
  // Complement introduced by "to" rather than an optional "that".
  bool to_complement = false;
};

struct SchemaSpec {
  std::vector<EventLexicon> nesting_types;  // may take another event as Content
  std::vector<EventLexicon> inner_types;
  std::vector<std::string> roles;
  std::vector<std::string> entity_types;

  // Fourteen nesting-capable types with two lexemes each, seven inner types.
  static SchemaSpec builtin();

  // Event types are the nesting-capable types followed by the inner types.
  LabelVocab labels() const;
  // Sidecar listing: event_types, roles, entity_types, lexicons, nesting_types.
  // Loadable with LabelVocab::from_json_text.
  std::string to_json_text() const;
};

struct GenConfig {
  std::size_t count = 100;
  // Among sentences with events, the probability of an embedded event.
  double nested_fraction = 0.25;
  // Sentences with no mentions at all.
  double distractor_fraction = 0.2;
  // Events on the longest outer -> inner chain; 2 is one level of nesting.
  std::size_t max_depth = 2;
  std::uint64_t seed = 1;

  void check() const;
};

inline constexpr std::size_t kMaxSynthTokens = 15;

// Sentence ids are "synth-<seed>-<index>".
std::vector<Sentence> generate(const GenConfig& config, const SchemaSpec& schema);

}  // namespace nestex

#endif  // NESTEX_SYNTH_H_
