#include <sstream>

#include "doctest.h"
#include "nestex/corpus.h"
#include "nestex/synth.h"

using namespace nestex;

namespace {

const std::string kWantToPay =
    R"({"id":"s1","tokens":["He","wants","to","pay"],"entities":[{"id":"e0","start":0,"end":1}],)"
    R"("triggers":[{"id":"t0","start":1,"end":2,"type":"Intention"},)"
    R"({"id":"t1","start":3,"end":4,"type":"Transfer-ownership"}],)"
    R"("arguments":[{"parent":"t0","child":"e0","role":"Agent"},{"parent":"t0","child":"t1","role":"Content"}]})";

LabelVocab vocab() { return SchemaSpec::builtin().labels(); }

Sentence base_sentence() { return parse_record(kWantToPay, 1, vocab()); }

}  // namespace

TEST_CASE("parse the want-to-pay record") {
  const Sentence s = base_sentence();
  CHECK(s.id == "s1");
  CHECK(s.tokens.size() == 4);
  CHECK(s.triggers.size() == 2);
  CHECK(s.entities.size() == 1);
  CHECK(s.arguments.size() == 2);
  CHECK_FALSE(s.entities[0].entity_type.has_value());
  CHECK(s.triggers[1].span == Span{3, 4});
  CHECK(s.arguments[1].role == "Content");
}

TEST_CASE("empty input parses to an empty corpus") {
  std::istringstream in("");
  CHECK(parse_jsonl(in, vocab()).empty());
  std::istringstream blank("\n  \n");
  CHECK(parse_jsonl(blank, vocab()).empty());
}

TEST_CASE("trigger past the end of the sentence is a validation error") {
  std::string line = kWantToPay;
  line.replace(line.find(R"("start":3,"end":4)"), 17, R"("start":3,"end":5)");
  try {
    parse_record(line, 1, vocab());
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.sentence_id() == "s1");
    CHECK(e.field() == "triggers[1]");
  }
}

TEST_CASE("malformed lines report their line number") {
  std::istringstream in(kWantToPay + "\n{not json\n");
  try {
    parse_jsonl(in, vocab());
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_record(R"({"id":"x","tokens":[],"entities":[],"triggers":[],"arguments":[],"extra":1})", 3, vocab()),
                  ParseError);
}

TEST_CASE("validation rejects each kind of broken record") {
  const LabelVocab v = vocab();
  auto rejects = [&](auto&& mutate, const char* field) {
    Sentence s = base_sentence();
    mutate(s);
    try {
      validate(s, v);
      FAIL("expected ValidationError for ", field);
    } catch (const ValidationError& e) {
      INFO("field: ", e.field());
      CHECK(e.field().rfind(field, 0) == 0);
    }
  };
  rejects([](Sentence& s) { s.arguments[0].child = "e9"; }, "arguments");
  rejects([](Sentence& s) { s.arguments[0].parent = "e0"; }, "arguments");
  rejects([](Sentence& s) { s.arguments[0].child = "t0"; }, "arguments");
  rejects([](Sentence& s) { s.entities[0].id = "t0"; }, "triggers");
  rejects([](Sentence& s) { s.triggers[0].event_type = "Nope"; }, "triggers");
  rejects([](Sentence& s) { s.arguments[1].role = "Nope"; }, "arguments");
  rejects([](Sentence& s) { s.entities[0].span = {2, 2}; }, "entities");
  rejects([](Sentence& s) { s.arguments.push_back(s.arguments[0]); }, "arguments");
}

TEST_CASE("trigger/entity overlap is allowed with a warning") {
  Sentence s = base_sentence();
  s.entities.push_back({"e1", {3, 4}, std::nullopt});
  const auto warnings = validate(s, vocab());
  CHECK(warnings.size() == 1);
}

TEST_CASE("pivots") {
  CHECK(derive_pivots(base_sentence()) == std::set<std::string>{"t1"});

  Sentence flat = base_sentence();
  flat.arguments.clear();
  CHECK(derive_pivots(flat).empty());

  Sentence chain;
  chain.id = "c";
  chain.tokens = {"a", "b", "c"};
  chain.triggers = {{"t0", {0, 1}, "Intention"}, {"t1", {1, 2}, "Idea:Belief"}, {"t2", {2, 3}, "Attack"}};
  chain.arguments = {{"t0", "t1", "Content"}, {"t1", "t2", "Content"}};
  validate(chain, vocab());
  CHECK(derive_pivots(chain) == std::set<std::string>{"t1", "t2"});
}

TEST_CASE("serialization round trip") {
  const Sentence s = base_sentence();
  CHECK(parse_record(to_jsonl_record(s), 1, vocab()) == s);
  CHECK(to_jsonl_record(s) == kWantToPay);

  std::ostringstream empty;
  write_jsonl({}, empty);
  CHECK(empty.str().empty());
}

TEST_CASE("1000 synthetic sentences round trip byte-stably") {
  GenConfig config;
  config.count = 1000;
  config.seed = 5;
  config.max_depth = 3;
  const auto corpus = generate(config, SchemaSpec::builtin());
  std::ostringstream out;
  write_jsonl(corpus, out);
  std::istringstream in(out.str());
  const auto back = parse_jsonl(in, vocab());
  CHECK(back == corpus);
  std::ostringstream again;
  write_jsonl(back, again);
  CHECK(again.str() == out.str());
  for (const auto& s : back) {
    for (const auto& id : derive_pivots(s)) CHECK(s.find_trigger(id) != nullptr);
  }
}
