#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "nestex/corpus.h"
#include "nestex/synth.h"

using namespace nestex;

namespace {

std::string dump(const std::vector<Sentence>& corpus) {
  std::ostringstream out;
  write_jsonl(corpus, out);
  return out.str();
}

GenConfig config(std::size_t n, std::uint64_t seed, double nested = 0.25) {
  GenConfig c;
  c.count = n;
  c.seed = seed;
  c.nested_fraction = nested;
  return c;
}

}  // namespace

TEST_CASE("builtin schema") {
  const SchemaSpec schema = SchemaSpec::builtin();
  CHECK(schema.nesting_types.size() == 14);
  for (const auto& t : schema.nesting_types) CHECK_FALSE(t.lexemes.empty());
  for (const auto& t : schema.inner_types) CHECK_FALSE(t.lexemes.empty());
  const LabelVocab labels = schema.labels();
  CHECK(labels.event_types().size() == schema.nesting_types.size() + schema.inner_types.size());
  CHECK(labels.role_index("Content") >= 0);
  CHECK(LabelVocab::from_json_text(schema.to_json_text()) == labels);
}

TEST_CASE("same seed, same corpus") {
  const SchemaSpec schema = SchemaSpec::builtin();
  CHECK(dump(generate(config(300, 4), schema)) == dump(generate(config(300, 4), schema)));
  CHECK(dump(generate(config(300, 4), schema)) != dump(generate(config(300, 5), schema)));
  CHECK(generate(config(300, 4), schema)[7].id == "synth-4-7");
}

TEST_CASE("no nesting when the nested fraction is zero") {
  for (const auto& s : generate(config(500, 2, 0.0), SchemaSpec::builtin())) {
    CHECK(derive_pivots(s).empty());
  }
}

TEST_CASE("observed nested fraction tracks the target") {
  std::size_t with_events = 0, nested = 0;
  for (const auto& s : generate(config(1000, 6), SchemaSpec::builtin())) {
    if (s.triggers.empty()) continue;
    ++with_events;
    if (!derive_pivots(s).empty()) ++nested;
  }
  const double fraction = static_cast<double>(nested) / static_cast<double>(with_events);
  INFO("fraction ", fraction);
  CHECK(fraction >= 0.20);
  CHECK(fraction <= 0.30);
}

TEST_CASE("generated sentences are valid and well shaped") {
  const SchemaSpec schema = SchemaSpec::builtin();
  const LabelVocab labels = schema.labels();
  GenConfig c = config(1000, 8, 0.4);
  c.max_depth = 3;
  std::size_t distractors = 0;
  for (const auto& s : generate(c, schema)) {
    REQUIRE_NOTHROW(validate(s, labels));
    CHECK(s.tokens.size() <= kMaxSynthTokens);
    if (s.triggers.empty() && s.entities.empty()) ++distractors;

    // Each pivot is the child of exactly one Content link.
    for (const auto& pe : derive_pivots(s)) {
      std::size_t content = 0;
      for (const auto& a : s.arguments) {
        if (a.child == pe && a.role == "Content") ++content;
      }
      CHECK(content == 1);
    }

    // Nesting-type triggers use their own lexicon.
    for (const auto& t : s.triggers) {
      const std::string word = s.tokens[static_cast<std::size_t>(t.span.start)];
      bool found = false, nesting = false;
      for (const auto& lex : schema.nesting_types) {
        if (lex.type != t.event_type) continue;
        nesting = true;
        found = std::find(lex.lexemes.begin(), lex.lexemes.end(), word) != lex.lexemes.end();
      }
      if (nesting) CHECK(found);
    }
  }
  CHECK(distractors > 100);
  CHECK(distractors < 300);
}

TEST_CASE("generator configuration is checked") {
  GenConfig bad;
  bad.nested_fraction = 1.5;
  CHECK_THROWS(bad.check());
  bad.nested_fraction = 0.5;
  bad.max_depth = 1;
  CHECK_THROWS(bad.check());
  bad.nested_fraction = 0.0;
  CHECK_NOTHROW(bad.check());
  CHECK(generate(config(0, 1), SchemaSpec::builtin()).empty());
}
