#include "nestex/synth.h"

#include <stdexcept>

#include "json.hpp"
#include "nestex/rng.h"

namespace nestex {

SchemaSpec SchemaSpec::builtin() {
  SchemaSpec s;
  s.nesting_types = {
      {"Statement:Oral", {"say", "speak"}, false},
      {"Statement:Written", {"write", "report"}, false},
      {"Idea:Belief", {"believe", "think"}, false},
      {"Idea:Attitude", {"oppose", "agree"}, true},
      {"Idea:Doubt", {"wonder", "doubt"}, false},
      {"Knowledge:Aware", {"know", "aware"}, false},
      {"Knowledge:Perception", {"see", "hear"}, false},
      {"Knowledge:Inference", {"mean", "indicate"}, false},
      {"Sentiment:Preference", {"like", "hate"}, true},
      {"Sentiment:Emotion", {"worry", "fear"}, false},
      {"Instruction:Command", {"order", "instruct"}, true},
      {"Instruction:Demand", {"require", "ask"}, true},
      {"Judgement", {"accuse", "blame"}, false},
      {"Intention", {"plan", "want"}, true},
  };
  s.inner_types = {
      {"Transfer-ownership", {"pay", "buy", "sell"}, false},
      {"Attack", {"attack", "bomb", "invade"}, false},
      {"Meet", {"meet", "visit"}, false},
      {"Transport", {"travel", "move"}, false},
      {"Die", {"die"}, false},
      {"Elect", {"elect"}, false},
      {"Arrest", {"arrest", "detain"}, false},
  };
  s.roles = {"Agent", "Target", "Content", "Time", "Polarity", "Place"};
  s.entity_types = {"PER", "ORG", "LOC", "OBJ", "TIME", "ADV"};
  return s;
}

LabelVocab SchemaSpec::labels() const {
  std::vector<std::string> events;
  for (const auto& t : nesting_types) events.push_back(t.type);
  for (const auto& t : inner_types) events.push_back(t.type);
  return LabelVocab(events, roles, entity_types);
}

std::string SchemaSpec::to_json_text() const {
  nlohmann::ordered_json j;
  const LabelVocab vocab = labels();
  j["event_types"] = vocab.event_types();
  j["roles"] = roles;
  j["entity_types"] = entity_types;
  nlohmann::ordered_json lexicons = nlohmann::ordered_json::object();
  std::vector<std::string> nesting;
  for (const auto& t : nesting_types) {
    lexicons[t.type] = t.lexemes;
    nesting.push_back(t.type);
  }
  for (const auto& t : inner_types) lexicons[t.type] = t.lexemes;
  j["lexicons"] = lexicons;
  j["nesting_types"] = nesting;
  return j.dump(2) + "\n";
}

void GenConfig::check() const {
  if (nested_fraction < 0.0 || nested_fraction > 1.0) {
    throw std::invalid_argument("nested_fraction must be in [0, 1]");
  }
  if (distractor_fraction < 0.0 || distractor_fraction > 1.0) {
    throw std::invalid_argument("distractor_fraction must be in [0, 1]");
  }
  if (nested_fraction > 0.0 && max_depth < 2) {
    throw std::invalid_argument("nesting needs max_depth >= 2");
  }
}

namespace {

const std::vector<std::string> kPeople = {"john", "mary", "ahmed", "li", "maria",
                                          "peter", "anna", "omar", "david", "sara"};
const std::vector<std::string> kOrgs = {"police", "army", "government", "company", "union", "court"};
const std::vector<std::string> kObjects = {"house", "car", "shares", "weapons", "land",
                                           "bridge", "factory", "rumor", "news"};
const std::vector<std::string> kPlaces = {"paris", "baghdad", "london", "cairo", "texas", "moscow"};
const std::vector<std::string> kTimes = {"yesterday", "today", "monday", "friday", "tonight"};
const std::vector<std::string> kPolarity = {"not", "maybe", "never", "probably"};
const std::vector<std::string> kFiller = {"it", "was", "a", "quiet", "day", "there", "is",
                                          "nothing", "new", "here", "people", "market",
                                          "remained", "calm", "very", "busy", "week", "so"};

// How an inner event type takes its object.
struct InnerFrame {
  std::vector<std::string> target_types;  // empty: no object
};

InnerFrame frame_for(const std::string& type) {
  if (type == "Transfer-ownership" || type == "Transport") return {{"OBJ"}};
  if (type == "Attack") return {{"OBJ", "PER"}};
  if (type == "Meet") return {{"PER", "ORG"}};
  if (type == "Elect" || type == "Arrest") return {{"PER"}};
  return {};
}

class SentenceBuilder {
 public:
  void word(const std::string& w) { tokens_.push_back(w); }

  std::string entity(const std::vector<std::string>& words, const std::string& type) {
    const int start = static_cast<int>(tokens_.size());
    tokens_.insert(tokens_.end(), words.begin(), words.end());
    std::string id = "e" + std::to_string(entities_.size());
    entities_.push_back({id, {start, static_cast<int>(tokens_.size())}, type});
    return id;
  }

  std::string trigger(const std::string& w, const std::string& type) {
    const int start = static_cast<int>(tokens_.size());
    tokens_.push_back(w);
    std::string id = "t" + std::to_string(triggers_.size());
    triggers_.push_back({id, {start, start + 1}, type});
    return id;
  }

  void link(const std::string& parent, const std::string& child, const std::string& role) {
    arguments_.push_back({parent, child, role});
  }

  std::size_t size() const { return tokens_.size(); }

  Sentence finish(std::string id) && {
    Sentence s;
    s.id = std::move(id);
    s.tokens = std::move(tokens_);
    s.entities = std::move(entities_);
    s.triggers = std::move(triggers_);
    s.arguments = std::move(arguments_);
    return s;
  }

 private:
  std::vector<std::string> tokens_;
  std::vector<EntityMention> entities_;
  std::vector<TriggerMention> triggers_;
  std::vector<ArgumentLink> arguments_;
};

std::vector<std::string> phrase(Rng& rng, const std::string& type) {
  if (type == "PER") return {rng.pick(kPeople)};
  if (type == "ORG") return {"the", rng.pick(kOrgs)};
  if (type == "OBJ") return {"the", rng.pick(kObjects)};
  if (type == "LOC") return {rng.pick(kPlaces)};
  if (type == "TIME") return {rng.pick(kTimes)};
  return {rng.pick(kPolarity)};
}

std::string agent_type(Rng& rng) { return rng.bernoulli(0.6) ? "PER" : "ORG"; }

// Optional pieces are dropped when `minimal` is set.
struct Options {
  bool minimal = false;
};

// Inner event: TRIGGER [target] [in PLACE] [TIME]; returns the trigger id.
std::string inner_clause(SentenceBuilder& b, Rng& rng, const EventLexicon& lex,
                         const std::string& agent, bool with_modifiers, const Options& opt) {
  const std::string t = b.trigger(rng.pick(lex.lexemes), lex.type);
  if (!agent.empty()) b.link(t, agent, "Agent");
  const InnerFrame frame = frame_for(lex.type);
  if (!frame.target_types.empty() && (opt.minimal || rng.bernoulli(0.8))) {
    const std::string& type = rng.pick(frame.target_types);
    b.link(t, b.entity(phrase(rng, type), type), "Target");
  }
  if (with_modifiers && !opt.minimal) {
    if (rng.bernoulli(0.3)) {
      b.word("in");
      b.link(t, b.entity(phrase(rng, "LOC"), "LOC"), "Place");
    }
    if (rng.bernoulli(0.4)) b.link(t, b.entity(phrase(rng, "TIME"), "TIME"), "Time");
  }
  return t;
}

std::string maybe_polarity(SentenceBuilder& b, Rng& rng, const Options& opt) {
  if (opt.minimal || !rng.bernoulli(0.2)) return {};
  return b.entity(phrase(rng, "ADV"), "ADV");
}

Sentence distractor(Rng& rng, const std::string& id) {
  SentenceBuilder b;
  const std::size_t n = 4 + rng.index(6);
  for (std::size_t i = 0; i < n; ++i) b.word(rng.pick(kFiller));
  return std::move(b).finish(id);
}

Sentence flat(Rng& rng, const SchemaSpec& schema, const std::string& id, const Options& opt) {
  SentenceBuilder b;
  const bool two_events = !opt.minimal && rng.bernoulli(0.3);
  for (int clause = 0; clause < (two_events ? 2 : 1); ++clause) {
    if (clause == 1) b.word("and");
    std::string agent;
    if (opt.minimal || two_events || rng.bernoulli(0.9)) {
      const std::string type = agent_type(rng);
      agent = b.entity(phrase(rng, type), type);
    }
    const std::string polarity = two_events ? std::string() : maybe_polarity(b, rng, opt);
    std::string t;
    if (!schema.nesting_types.empty() && rng.bernoulli(0.2)) {
      // A nesting-capable event whose content is a plain entity.
      const EventLexicon& lex = rng.pick(schema.nesting_types);
      t = b.trigger(rng.pick(lex.lexemes), lex.type);
      if (!agent.empty()) b.link(t, agent, "Agent");
      b.link(t, b.entity(phrase(rng, "OBJ"), "OBJ"), "Content");
    } else {
      t = inner_clause(b, rng, rng.pick(schema.inner_types), agent, !two_events || clause == 1,
                       opt);
    }
    if (!polarity.empty()) b.link(t, polarity, "Polarity");
  }
  return std::move(b).finish(id);
}

Sentence nested(Rng& rng, const SchemaSpec& schema, std::size_t depth, const std::string& id,
                const Options& opt) {
  SentenceBuilder b;
  std::string type = agent_type(rng);
  std::string agent = b.entity(phrase(rng, type), type);
  const std::string polarity = maybe_polarity(b, rng, opt);
  std::string parent;
  for (std::size_t level = 0; level + 1 < depth; ++level) {
    const EventLexicon& lex = rng.pick(schema.nesting_types);
    const std::string t = b.trigger(rng.pick(lex.lexemes), lex.type);
    if (!agent.empty()) b.link(t, agent, "Agent");
    if (level == 0 && !polarity.empty()) b.link(t, polarity, "Polarity");
    if (!parent.empty()) b.link(parent, t, "Content");
    parent = t;
    if (lex.to_complement) {
      b.word("to");
      agent.clear();
    } else {
      if (!opt.minimal && rng.bernoulli(0.5)) b.word("that");
      type = agent_type(rng);
      agent = b.entity(phrase(rng, type), type);
    }
  }
  const std::string inner = inner_clause(b, rng, rng.pick(schema.inner_types), agent, true, opt);
  b.link(parent, inner, "Content");
  return std::move(b).finish(id);
}

}  // namespace

std::vector<Sentence> generate(const GenConfig& config, const SchemaSpec& schema) {
  config.check();
  if (schema.inner_types.empty()) throw std::invalid_argument("schema has no inner event types");
  if (config.nested_fraction > 0.0 && schema.nesting_types.empty()) {
    throw std::invalid_argument("schema has no nesting-capable event types");
  }
  Rng rng(Rng::derive(config.seed, "synth"));
  std::vector<Sentence> out;
  out.reserve(config.count);
  for (std::size_t i = 0; i < config.count; ++i) {
    const std::string id = "synth-" + std::to_string(config.seed) + "-" + std::to_string(i);
    if (rng.bernoulli(config.distractor_fraction)) {
      out.push_back(distractor(rng, id));
      continue;
    }
    const bool is_nested = rng.bernoulli(config.nested_fraction);
    const std::size_t depth = is_nested ? 2 + rng.index(config.max_depth - 1) : 1;
    // Redraw until the sentence fits; fall back to the bare template.
    Sentence s;
    for (int attempt = 0;; ++attempt) {
      const Options opt{attempt >= 32};
      s = is_nested ? nested(rng, schema, depth, id, opt) : flat(rng, schema, id, opt);
      if (s.tokens.size() <= kMaxSynthTokens || opt.minimal) break;
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace nestex
