#include "nestex/decoder.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace nestex {

namespace {

// Within one edge step the beam may temporarily exceed theta; past this
// multiple of theta it is cut early to bound work on dense sentences.
constexpr std::size_t kEdgeStepSlack = 64;

struct Partial {
  std::vector<int> labels;  // per placed node
  std::vector<GraphEdge> edges;
  double score = 0.0;
};

std::vector<std::size_t> top_labels(const std::vector<double>& scores, std::size_t k) {
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  if (idx.size() > k) idx.resize(k);
  return idx;
}

void prune(std::vector<Partial>& beam, std::size_t width) {
  if (beam.size() <= width) return;
  std::stable_sort(beam.begin(), beam.end(),
                   [](const Partial& a, const Partial& b) { return a.score > b.score; });
  beam.resize(width);
}

// True if `to` already reaches `from`, so from -> to would close a cycle.
bool closes_cycle(const std::vector<GraphEdge>& edges, std::size_t from, std::size_t to) {
  if (from == to) return true;
  std::vector<std::size_t> stack{to};
  std::vector<std::size_t> seen{to};
  while (!stack.empty()) {
    const std::size_t cur = stack.back();
    stack.pop_back();
    for (const auto& e : edges) {
      if (e.from != cur) continue;
      if (e.to == from) return true;
      if (std::find(seen.begin(), seen.end(), e.to) == seen.end()) {
        seen.push_back(e.to);
        stack.push_back(e.to);
      }
    }
  }
  return false;
}

}  // namespace

DecoderInput::DecoderInput(std::vector<NodeCandidate> candidates)
    : nodes(std::move(candidates)), edge_scores(nodes.size() * nodes.size()) {}

std::vector<double>& DecoderInput::edge(std::size_t from, std::size_t to) {
  return edge_scores.at(from * nodes.size() + to);
}

const std::vector<double>& DecoderInput::edge(std::size_t from, std::size_t to) const {
  return edge_scores.at(from * nodes.size() + to);
}

double graph_score(const EventGraph& graph) {
  double score = 0.0;
  for (const auto& n : graph.nodes) score += n.score;
  for (const auto& e : graph.edges) score += e.score;
  return score;
}

std::vector<std::size_t> decode_order(const std::vector<NodeCandidate>& nodes) {
  std::vector<std::size_t> order(nodes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = nodes[a];
    const auto& y = nodes[b];
    if (x.span.start != y.span.start) return x.span.start < y.span.start;
    if (x.span.end != y.span.end) return x.span.end < y.span.end;
    return x.kind == NodeKind::kTrigger && y.kind == NodeKind::kEntity;
  });
  return order;
}

EventGraph decode(const DecoderInput& input, const BeamConfig& config) {
  if (config.theta == 0 || config.beta_t == 0 || config.beta_e == 0) {
    throw std::invalid_argument("decode: beam width and candidate counts must be >= 1");
  }
  if (input.edge_scores.size() != input.nodes.size() * input.nodes.size()) {
    throw std::invalid_argument("decode: edge table does not match node count");
  }
  const std::vector<std::size_t> order = decode_order(input.nodes);
  auto node_at = [&](std::size_t pos) -> const NodeCandidate& {
    return input.nodes[order[pos]];
  };

  std::vector<Partial> beam(1);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const NodeCandidate& node = node_at(i);

    // Node step.
    std::vector<Partial> next;
    if (node.kind == NodeKind::kTrigger) {
      if (node.label_scores.empty()) {
        throw std::invalid_argument("decode: trigger node without label scores");
      }
      const auto labels = top_labels(node.label_scores, config.beta_t);
      next.reserve(beam.size() * labels.size());
      for (const auto& p : beam) {
        for (std::size_t label : labels) {
          Partial q = p;
          q.labels.push_back(static_cast<int>(label));
          q.score += node.label_scores[label];
          next.push_back(std::move(q));
        }
      }
    } else {
      next = std::move(beam);
      for (auto& p : next) p.labels.push_back(-1);
    }
    beam = std::move(next);

    // Edge step: ordered pairs between node i and every placed node j.
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t j = 0; j < i; ++j) {
      const bool i_trigger = node.kind == NodeKind::kTrigger;
      const bool j_trigger = node_at(j).kind == NodeKind::kTrigger;
      if (i_trigger) slots.emplace_back(i, j);
      if (j_trigger) slots.emplace_back(j, i);
    }
    for (const auto& [from, to] : slots) {
      const auto& scores = input.edge(order[from], order[to]);
      if (scores.empty()) continue;
      const auto labels = top_labels(scores, config.beta_e);
      const bool trigger_pair = node_at(from).kind == NodeKind::kTrigger &&
                                node_at(to).kind == NodeKind::kTrigger;
      std::vector<Partial> expanded;
      expanded.reserve(beam.size() * labels.size());
      for (const auto& p : beam) {
        const bool cyclic = trigger_pair && closes_cycle(p.edges, from, to);
        bool extended = false;
        for (std::size_t label : labels) {
          if (label == kNoneLabel) {
            expanded.push_back(p);
            extended = true;
            continue;
          }
          if (cyclic) continue;
          Partial q = p;
          const double s = scores[label] - scores[kNoneLabel];
          q.edges.push_back(GraphEdge{from, to, label - 1, s});
          q.score += s;
          expanded.push_back(std::move(q));
          extended = true;
        }
        // Every candidate label was cyclic: keep the pair unlinked.
        if (!extended) expanded.push_back(p);
      }
      beam = std::move(expanded);
      prune(beam, config.theta * kEdgeStepSlack);
    }
    prune(beam, config.theta);
  }

  std::stable_sort(beam.begin(), beam.end(),
                   [](const Partial& a, const Partial& b) { return a.score > b.score; });
  const Partial& best = beam.front();
  EventGraph graph;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const NodeCandidate& node = node_at(i);
    GraphNode g;
    g.source = order[i];
    g.span = node.span;
    g.kind = node.kind;
    g.label = best.labels[i];
    g.score = node.kind == NodeKind::kTrigger ? node.label_scores[g.label] : 0.0;
    graph.nodes.push_back(g);
  }
  graph.edges = best.edges;
  graph.beam_score = best.score;
  return graph;
}

}  // namespace nestex
