#include "nestex/model.h"

#include <algorithm>
#include <map>

namespace nestex {

namespace {

constexpr const char* kTriggerCrf = "trig.crf";
constexpr const char* kEntityCrf = "ent.crf";
const std::string kUntypedEntity = "ENT";

std::vector<std::string> entity_labels(const RunConfig& config, const LabelVocab& labels) {
  if (!config.entity_typed) return {kUntypedEntity};
  if (labels.entity_types().empty()) {
    throw ConfigError("entity_typed=true requires entity types in the label vocabulary");
  }
  return labels.entity_types();
}

EncoderConfig encoder_config(const RunConfig& c) {
  EncoderConfig e;
  e.embed_dim = c.embed_dim;
  e.window = c.window;
  e.hidden_dim = c.hidden_dim;
  e.output_dim = c.repr_dim;
  e.layers = c.fnn_layers;
  e.dropout = c.dropout;
  e.use_prompt = c.use_prompt;
  return e;
}

void add_into(Tensor& dst, const Tensor& src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

// Adds each span-rep gradient row, divided by the span length, to the
// covered token rows.
void scatter_span_grad(Tensor& d_repr, const std::vector<Span>& spans, const Tensor& d_reps) {
  for (std::size_t s = 0; s < spans.size(); ++s) {
    const double share = 1.0 / static_cast<double>(spans[s].length());
    for (int t = spans[s].start; t < spans[s].end; ++t) {
      auto dst = d_repr.row(static_cast<std::size_t>(t));
      const auto src = d_reps.row(s);
      for (std::size_t d = 0; d < dst.size(); ++d) dst[d] += src[d] * share;
    }
  }
}

Tensor concat_pairs(const Tensor& left, const Tensor& right,
                    const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  const std::size_t dl = left.cols(), dr = right.cols();
  Tensor x = Tensor::matrix(pairs.size(), dl + dr);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto l = left.row(pairs[p].first);
    const auto r = right.row(pairs[p].second);
    std::copy(l.begin(), l.end(), &x.at(p, 0));
    std::copy(r.begin(), r.end(), &x.at(p, dl));
  }
  return x;
}

std::vector<std::pair<std::size_t, std::size_t>> cartesian(std::size_t a, std::size_t b) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < a; ++i) {
    for (std::size_t j = 0; j < b; ++j) out.emplace_back(i, j);
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> ordered_distinct(std::size_t a) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < a; ++i) {
    for (std::size_t j = 0; j < a; ++j) {
      if (i != j) out.emplace_back(i, j);
    }
  }
  return out;
}

}  // namespace

Tensor span_representations(const Tensor& repr, const std::vector<Span>& spans) {
  const std::size_t d = repr.cols();
  Tensor out = Tensor::matrix(spans.size(), d);
  for (std::size_t s = 0; s < spans.size(); ++s) {
    const Span& span = spans[s];
    if (span.start < 0 || span.end <= span.start ||
        static_cast<std::size_t>(span.end) > repr.rows()) {
      throw ShapeError("span representation: span out of range");
    }
    auto dst = out.row(s);
    for (int t = span.start; t < span.end; ++t) {
      const auto src = repr.row(static_cast<std::size_t>(t));
      for (std::size_t k = 0; k < d; ++k) dst[k] += src[k];
    }
    for (double& v : dst) v /= static_cast<double>(span.length());
  }
  return out;
}

EventModel::EventModel(RunConfig config, LabelVocab labels, TokenVocab tokens)
    : config_(std::move(config)),
      labels_(std::move(labels)),
      trigger_tags_(labels_.event_types()),
      entity_tags_(entity_labels(config_, labels_)),
      trigger_mask_(TransitionMask::bio(trigger_tags_)),
      entity_mask_(TransitionMask::bio(entity_tags_)) {
  config_.check();
  if (labels_.event_types().empty()) throw ConfigError("label vocabulary has no event types");
  const std::size_t prompt_labels = labels_.event_types().size() + labels_.roles().size();
  encoder_ = Encoder(encoder_config(config_), std::move(tokens), prompt_labels);

  const std::size_t d = config_.repr_dim, h = config_.hidden_dim, layers = config_.fnn_layers;
  const double p = config_.dropout;
  const std::size_t pair_labels = labels_.roles().size() + 1;
  trigger_tagger_ = Mlp::uniform("trig.tag", d, h, trigger_tags_.size(), layers, p);
  type_scorer_ = Mlp::uniform("trig.type", d, h, labels_.event_types().size(), layers, p);
  entity_tagger_ = Mlp::uniform("ent.tag", d, h, entity_tags_.size(), layers, p);
  trigger_entity_head_ = Mlp::uniform("pair.te", 2 * d, h, pair_labels, layers, p);
  trigger_trigger_head_ = Mlp::uniform("pair.tt", 2 * d, h, pair_labels, layers, p);

  const std::uint64_t seed = config_.seed;
  encoder_.init(params_, seed);
  trigger_tagger_.init(params_, seed);
  type_scorer_.init(params_, seed);
  entity_tagger_.init(params_, seed);
  trigger_entity_head_.init(params_, seed);
  if (!config_.ablate_per) trigger_trigger_head_.init(params_, seed);
  params_.add(kTriggerCrf, {trigger_tags_.size() + 2, trigger_tags_.size() + 2});
  params_.add(kEntityCrf, {entity_tags_.size() + 2, entity_tags_.size() + 2});
}

Tensor EventModel::encode(const std::vector<std::string>& tokens) const {
  return encoder_.encode(tokens, params_, false, nullptr);
}

CrfLayer EventModel::trigger_crf() const {
  return CrfLayer(params_.value(kTriggerCrf), trigger_mask_);
}

CrfLayer EventModel::entity_crf() const {
  return CrfLayer(params_.value(kEntityCrf), entity_mask_);
}

Tensor EventModel::trigger_emissions(const Tensor& repr) const {
  return trigger_tagger_.forward(params_, repr, false, nullptr);
}

Tensor EventModel::entity_emissions(const Tensor& repr) const {
  return entity_tagger_.forward(params_, repr, false, nullptr);
}

std::vector<TagSet::IndexedSpan> EventModel::decode_trigger_emissions(const Tensor& emissions) const {
  if (emissions.rank() != 2 || emissions.rows() == 0) return {};
  return trigger_tags_.decode(viterbi(emissions, trigger_crf()).tags);
}

std::vector<TagSet::IndexedSpan> EventModel::decode_entity_emissions(const Tensor& emissions) const {
  if (emissions.rank() != 2 || emissions.rows() == 0) return {};
  return entity_tags_.decode(viterbi(emissions, entity_crf()).tags);
}

std::vector<TagSet::IndexedSpan> EventModel::tag_triggers(const Tensor& repr) const {
  if (repr.rows() == 0) return {};
  return decode_trigger_emissions(trigger_emissions(repr));
}

std::vector<TagSet::IndexedSpan> EventModel::tag_entities(const Tensor& repr) const {
  if (repr.rows() == 0) return {};
  return decode_entity_emissions(entity_emissions(repr));
}

Tensor EventModel::score_trigger_types(const Tensor& trigger_reps) const {
  return type_scorer_.forward(params_, trigger_reps, false, nullptr);
}

PairScores EventModel::score_pairs(const Mlp& head, const Tensor& left, const Tensor& right,
                                   std::vector<std::pair<std::size_t, std::size_t>> pairs) const {
  PairScores out;
  out.pairs = std::move(pairs);
  out.scores = head.forward(params_, concat_pairs(left, right, out.pairs), false, nullptr);
  return out;
}

PairScores EventModel::score_trigger_entity_pairs(const Tensor& trigger_reps,
                                                  const Tensor& entity_reps) const {
  const std::size_t m = trigger_reps.rank() == 2 ? trigger_reps.rows() : 0;
  const std::size_t e = entity_reps.rank() == 2 ? entity_reps.rows() : 0;
  return score_pairs(trigger_entity_head_, trigger_reps, entity_reps, cartesian(m, e));
}

PairScores EventModel::score_trigger_trigger_pairs(const Tensor& trigger_reps) const {
  const std::size_t m = trigger_reps.rank() == 2 ? trigger_reps.rows() : 0;
  const Mlp& head = config_.ablate_per ? trigger_entity_head_ : trigger_trigger_head_;
  return score_pairs(head, trigger_reps, trigger_reps, ordered_distinct(m));
}

double EventModel::pair_head_loss(const Mlp& head, const Tensor& left, const Tensor& right,
                                  const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                  const std::vector<std::size_t>& gold, bool train, Rng* rng,
                                  bool accumulate_grad, Tensor* d_left, Tensor* d_right) {
  if (pairs.empty()) return 0.0;
  Mlp::Cache cache;
  const Tensor logits = head.forward(params_, concat_pairs(left, right, pairs), train, rng,
                                     accumulate_grad ? &cache : nullptr);
  double loss = 0.0;
  Tensor d_logits = Tensor::matrix(pairs.size(), logits.cols());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const CrossEntropy ce = softmax_cross_entropy(logits.row(p), gold[p]);
    loss += ce.loss;
    std::copy(ce.grad.begin(), ce.grad.end(), d_logits.row(p).begin());
  }
  if (accumulate_grad) {
    const Tensor d_x = head.backward(params_, cache, d_logits);
    const std::size_t dl = left.cols();
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      auto l = d_left->row(pairs[p].first);
      auto r = d_right->row(pairs[p].second);
      for (std::size_t k = 0; k < dl; ++k) l[k] += d_x.at(p, k);
      for (std::size_t k = 0; k < r.size(); ++k) r[k] += d_x.at(p, dl + k);
    }
  }
  return loss;
}

LossBreakdown EventModel::joint_loss(const Sentence& sentence, bool train, Rng* rng,
                                     bool accumulate_grad) {
  LossBreakdown loss;
  const std::size_t n = sentence.tokens.size();
  if (n == 0) return loss;
  const int len = static_cast<int>(n);

  Encoder::Cache enc_cache;
  const Tensor repr = encoder_.encode(sentence.tokens, params_, train, rng,
                                      accumulate_grad ? &enc_cache : nullptr);
  Tensor d_repr = Tensor::matrix(n, repr.cols());

  // Trigger tagging.
  std::vector<TagSet::IndexedSpan> gold_triggers;
  std::vector<Span> trigger_spans;
  std::vector<std::size_t> trigger_types;
  std::map<std::string, std::size_t> trigger_pos;
  for (const auto& t : sentence.triggers) {
    const int type = labels_.event_type_index(t.event_type);
    if (type < 0) throw ValidationError(sentence.id, "triggers", "unknown event type " + t.event_type);
    trigger_pos[t.id] = trigger_spans.size();
    gold_triggers.push_back({t.span, static_cast<std::size_t>(type)});
    trigger_spans.push_back(t.span);
    trigger_types.push_back(static_cast<std::size_t>(type));
  }
  {
    Mlp::Cache cache;
    const Tensor f = trigger_tagger_.forward(params_, repr, train, rng,
                                             accumulate_grad ? &cache : nullptr);
    const auto gold = trigger_tags_.encode(gold_triggers, len);
    const CrfLoss crf = nll_and_grads(f, trigger_crf(), gold);
    loss.trigger_crf = crf.loss;
    if (accumulate_grad) {
      add_into(d_repr, trigger_tagger_.backward(params_, cache, crf.d_emissions));
      add_into(params_.grad(kTriggerCrf), crf.d_transitions);
    }
  }

  // Entity tagging.
  std::vector<TagSet::IndexedSpan> gold_entities;
  std::vector<Span> entity_spans;
  std::map<std::string, std::size_t> entity_pos;
  for (const auto& e : sentence.entities) {
    std::size_t label = 0;
    if (config_.entity_typed) {
      const int idx = e.entity_type ? labels_.entity_type_index(*e.entity_type) : -1;
      if (idx < 0) throw ValidationError(sentence.id, "entities", "entity '" + e.id + "' needs a known type");
      label = static_cast<std::size_t>(idx);
    }
    entity_pos[e.id] = entity_spans.size();
    gold_entities.push_back({e.span, label});
    entity_spans.push_back(e.span);
  }
  {
    Mlp::Cache cache;
    const Tensor f = entity_tagger_.forward(params_, repr, train, rng,
                                            accumulate_grad ? &cache : nullptr);
    const auto gold = entity_tags_.encode(gold_entities, len);
    const CrfLoss crf = nll_and_grads(f, entity_crf(), gold);
    loss.entity_crf = crf.loss;
    if (accumulate_grad) {
      add_into(d_repr, entity_tagger_.backward(params_, cache, crf.d_emissions));
      add_into(params_.grad(kEntityCrf), crf.d_transitions);
    }
  }

  const std::size_t m = trigger_spans.size(), e = entity_spans.size();
  const Tensor trig_reps = span_representations(repr, trigger_spans);
  const Tensor ent_reps = span_representations(repr, entity_spans);
  Tensor d_trig = Tensor::matrix(m, repr.cols());
  Tensor d_ent = Tensor::matrix(e, repr.cols());

  // Trigger types.
  if (m > 0) {
    Mlp::Cache cache;
    const Tensor logits = type_scorer_.forward(params_, trig_reps, train, rng,
                                               accumulate_grad ? &cache : nullptr);
    Tensor d_logits = Tensor::matrix(m, logits.cols());
    for (std::size_t i = 0; i < m; ++i) {
      const CrossEntropy ce = softmax_cross_entropy(logits.row(i), trigger_types[i]);
      loss.trigger_type += ce.loss;
      std::copy(ce.grad.begin(), ce.grad.end(), d_logits.row(i).begin());
    }
    if (accumulate_grad) add_into(d_trig, type_scorer_.backward(params_, cache, d_logits));
  }

  // Gold pair labels: NONE unless an argument link connects the pair.
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> te_gold, tt_gold;
  for (const auto& a : sentence.arguments) {
    const std::size_t label = static_cast<std::size_t>(labels_.role_index(a.role)) + 1;
    const std::size_t parent = trigger_pos.at(a.parent);
    if (auto it = entity_pos.find(a.child); it != entity_pos.end()) {
      te_gold[{parent, it->second}] = label;
    } else {
      tt_gold[{parent, trigger_pos.at(a.child)}] = label;
    }
  }
  auto labels_for = [](const auto& pairs, const auto& gold) {
    std::vector<std::size_t> out;
    for (const auto& p : pairs) {
      auto it = gold.find(p);
      out.push_back(it == gold.end() ? kNoneLabel : it->second);
    }
    return out;
  };

  const auto te_pairs = cartesian(m, e);
  loss.trigger_entity = pair_head_loss(trigger_entity_head_, trig_reps, ent_reps, te_pairs,
                                       labels_for(te_pairs, te_gold), train, rng,
                                       accumulate_grad, &d_trig, &d_ent);
  const auto tt_pairs = ordered_distinct(m);
  const Mlp& tt_head = config_.ablate_per ? trigger_entity_head_ : trigger_trigger_head_;
  const double tt_loss = pair_head_loss(tt_head, trig_reps, trig_reps, tt_pairs,
                                        labels_for(tt_pairs, tt_gold), train, rng,
                                        accumulate_grad, &d_trig, &d_trig);
  // Without the pivot head, pivots are scored as regular arguments.
  if (config_.ablate_per) {
    loss.trigger_entity += tt_loss;
  } else {
    loss.trigger_trigger = tt_loss;
  }

  if (accumulate_grad) {
    scatter_span_grad(d_repr, trigger_spans, d_trig);
    scatter_span_grad(d_repr, entity_spans, d_ent);
    encoder_.backward(params_, enc_cache, d_repr);
  }
  return loss;
}

DecoderInput EventModel::decoder_input(const Tensor& repr,
                                       const std::vector<TagSet::IndexedSpan>& triggers,
                                       const std::vector<TagSet::IndexedSpan>& entities) const {
  std::vector<Span> trigger_spans, entity_spans;
  for (const auto& t : triggers) trigger_spans.push_back(t.span);
  for (const auto& e : entities) entity_spans.push_back(e.span);
  const std::size_t m = triggers.size();

  std::vector<NodeCandidate> nodes;
  const Tensor trig_reps = span_representations(repr, trigger_spans);
  const Tensor ent_reps = span_representations(repr, entity_spans);
  if (m > 0) {
    const Tensor logits = score_trigger_types(trig_reps);
    for (std::size_t i = 0; i < m; ++i) {
      nodes.push_back({trigger_spans[i], NodeKind::kTrigger, log_softmax(logits.row(i))});
    }
  }
  for (const auto& span : entity_spans) nodes.push_back({span, NodeKind::kEntity, {}});

  DecoderInput input(std::move(nodes));
  if (m == 0) return input;
  const PairScores te = score_trigger_entity_pairs(trig_reps, ent_reps);
  for (std::size_t p = 0; p < te.size(); ++p) {
    input.edge(te.pairs[p].first, m + te.pairs[p].second) = log_softmax(te.scores.row(p));
  }
  const PairScores tt = score_trigger_trigger_pairs(trig_reps);
  for (std::size_t p = 0; p < tt.size(); ++p) {
    input.edge(tt.pairs[p].first, tt.pairs[p].second) = log_softmax(tt.scores.row(p));
  }
  return input;
}

Sentence EventModel::predict(const Sentence& in) const {
  Sentence out;
  out.id = in.id;
  out.tokens = in.tokens;
  if (in.tokens.empty()) return out;

  const Tensor repr = encode(in.tokens);
  const auto triggers = tag_triggers(repr);
  const auto entities = tag_entities(repr);
  const DecoderInput input = decoder_input(repr, triggers, entities);
  const EventGraph graph =
      decode(input, BeamConfig{config_.beam_theta, config_.beta_t, config_.beta_e});

  // Graph nodes are in span order; number mentions in that order.
  std::vector<std::string> ids(graph.nodes.size());
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    const GraphNode& node = graph.nodes[i];
    if (node.kind == NodeKind::kTrigger) {
      ids[i] = "t" + std::to_string(out.triggers.size());
      out.triggers.push_back({ids[i], node.span,
                              labels_.event_types()[static_cast<std::size_t>(node.label)]});
    } else {
      ids[i] = "e" + std::to_string(out.entities.size());
      EntityMention mention{ids[i], node.span, std::nullopt};
      if (config_.entity_typed) {
        mention.entity_type = labels_.entity_types()[entities[node.source - triggers.size()].label];
      }
      out.entities.push_back(std::move(mention));
    }
  }
  for (const auto& edge : graph.edges) {
    out.arguments.push_back({ids[edge.from], ids[edge.to], labels_.roles()[edge.role]});
  }
  return out;
}

}  // namespace nestex
