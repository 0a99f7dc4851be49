// Brute-force reference implementations used by the unit and acceptance tests.
// They share no code with the library beyond the data types.
#ifndef NESTEX_TESTS_ORACLES_H_
#define NESTEX_TESTS_ORACLES_H_

#include <cmath>
#include <limits>
#include <vector>

#include "nestex/crf.h"
#include "nestex/decoder.h"
#include "nestex/rng.h"

namespace oracle {

using nestex::Tensor;

// Calls fn(path) for every tag path of length n over k tags, in
// lexicographic order.
template <typename Fn>
void for_each_path(std::size_t n, std::size_t k, Fn&& fn) {
  std::vector<int> path(n, 0);
  while (true) {
    fn(path);
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (static_cast<std::size_t>(++path[pos]) < k) break;
      path[pos] = 0;
      if (pos == 0) return;
    }
    if (n == 0) return;
  }
}

// Term-by-term path score; -inf when any transition is disallowed.
inline double path_score(const Tensor& emissions, const Tensor& transitions,
                         const nestex::TransitionMask& mask, const std::vector<int>& path) {
  const std::size_t k = emissions.cols();
  const std::size_t start = k, end = k + 1;
  double s = 0.0;
  std::size_t prev = start;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const auto tag = static_cast<std::size_t>(path[i]);
    if (!mask.allowed(prev, tag)) return -std::numeric_limits<double>::infinity();
    s += transitions.at(prev, tag) + emissions.at(i, tag);
    prev = tag;
  }
  if (!mask.allowed(prev, end)) return -std::numeric_limits<double>::infinity();
  return s + transitions.at(prev, end);
}

inline double log_partition(const Tensor& emissions, const Tensor& transitions,
                            const nestex::TransitionMask& mask) {
  std::vector<double> scores;
  for_each_path(emissions.rows(), emissions.cols(), [&](const std::vector<int>& p) {
    scores.push_back(path_score(emissions, transitions, mask, p));
  });
  double mx = -std::numeric_limits<double>::infinity();
  for (double s : scores) mx = std::max(mx, s);
  if (mx == -std::numeric_limits<double>::infinity()) return mx;
  double total = 0.0;
  for (double s : scores) total += std::exp(s - mx);
  return mx + std::log(total);
}

struct BestPath {
  std::vector<int> path;
  double score = -std::numeric_limits<double>::infinity();
};

// First path (lexicographically) attaining the maximum score.
inline BestPath best_path(const Tensor& emissions, const Tensor& transitions,
                          const nestex::TransitionMask& mask) {
  BestPath best;
  for_each_path(emissions.rows(), emissions.cols(), [&](const std::vector<int>& p) {
    const double s = path_score(emissions, transitions, mask, p);
    if (s > best.score) {
      best.score = s;
      best.path = p;
    }
  });
  return best;
}

// Expected unary indicator counts p(z_i = a) by enumeration.
inline Tensor unary_marginals(const Tensor& emissions, const Tensor& transitions,
                              const nestex::TransitionMask& mask) {
  const double log_z = log_partition(emissions, transitions, mask);
  Tensor out = Tensor::matrix(emissions.rows(), emissions.cols());
  for_each_path(emissions.rows(), emissions.cols(), [&](const std::vector<int>& p) {
    const double prob = std::exp(path_score(emissions, transitions, mask, p) - log_z);
    for (std::size_t i = 0; i < p.size(); ++i) out.at(i, static_cast<std::size_t>(p[i])) += prob;
  });
  return out;
}

// Exhaustive argmax over complete event graphs: every trigger label, every
// edge label (NONE included) on every candidate slot, cyclic trigger graphs
// excluded. Scores follow the decoder's convention: node score plus
// s[label] - s[NONE] per non-NONE edge.
inline double best_graph_score(const nestex::DecoderInput& input) {
  using nestex::NodeKind;
  const std::size_t n = input.nodes.size();
  std::vector<std::size_t> triggers;
  for (std::size_t i = 0; i < n; ++i) {
    if (input.nodes[i].kind == NodeKind::kTrigger) triggers.push_back(i);
  }
  struct Slot {
    std::size_t from, to;
  };
  std::vector<Slot> slots;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b && input.nodes[a].kind == NodeKind::kTrigger && !input.edge(a, b).empty()) {
        slots.push_back({a, b});
      }
    }
  }

  double best = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> labels(triggers.size(), 0);
  std::vector<std::size_t> edge_labels(slots.size(), 0);
  auto has_cycle = [&]() {
    // Trigger-only subgraph; with the sizes used in tests a reachability
    // closure by repeated relaxation is enough.
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t s = 0; s < slots.size(); ++s) {
      if (edge_labels[s] != 0) reach[slots[s].from][slots[s].to] = true;
    }
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          if (reach[a][m] && reach[m][b]) reach[a][b] = true;
    for (std::size_t a = 0; a < n; ++a)
      if (reach[a][a]) return true;
    return false;
  };
  while (true) {
    if (!has_cycle()) {
      double score = 0.0;
      for (std::size_t t = 0; t < triggers.size(); ++t) {
        score += input.nodes[triggers[t]].label_scores[labels[t]];
      }
      for (std::size_t s = 0; s < slots.size(); ++s) {
        if (edge_labels[s] == 0) continue;
        const auto& table = input.edge(slots[s].from, slots[s].to);
        score += table[edge_labels[s]] - table[0];
      }
      best = std::max(best, score);
    }
    // Odometer over trigger labels then edge labels.
    std::size_t pos = 0;
    for (; pos < labels.size(); ++pos) {
      if (++labels[pos] < input.nodes[triggers[pos]].label_scores.size()) break;
      labels[pos] = 0;
    }
    if (pos < labels.size()) continue;
    std::size_t e = 0;
    for (; e < edge_labels.size(); ++e) {
      if (++edge_labels[e] < input.edge(slots[e].from, slots[e].to).size()) break;
      edge_labels[e] = 0;
    }
    if (e == edge_labels.size()) break;
  }
  return best;
}

// Random decoder instance with node spans that do not overlap. With `dyadic`
// set, all scores are multiples of 1/8 so sums are exact in floating point.
inline nestex::DecoderInput random_decoder_input(nestex::Rng& rng, std::size_t num_triggers,
                                                 std::size_t num_entities, std::size_t num_types,
                                                 std::size_t num_roles, bool dyadic) {
  using nestex::NodeKind;
  auto draw = [&]() {
    if (dyadic) return static_cast<double>(static_cast<int>(rng.index(33)) - 24) / 8.0;
    return rng.normal(-1.0, 1.5);
  };
  std::vector<nestex::NodeCandidate> nodes;
  int pos = 0;
  std::vector<NodeKind> kinds;
  for (std::size_t i = 0; i < num_triggers; ++i) kinds.push_back(NodeKind::kTrigger);
  for (std::size_t i = 0; i < num_entities; ++i) kinds.push_back(NodeKind::kEntity);
  rng.shuffle(kinds);
  for (NodeKind kind : kinds) {
    nestex::NodeCandidate c;
    c.kind = kind;
    c.span = {pos, pos + 1 + static_cast<int>(rng.index(2))};
    pos = c.span.end + static_cast<int>(rng.index(2));
    if (kind == NodeKind::kTrigger) {
      for (std::size_t t = 0; t < num_types; ++t) c.label_scores.push_back(draw());
    }
    nodes.push_back(std::move(c));
  }
  // Present candidates in a scrambled order; the decoder sorts them.
  rng.shuffle(nodes);
  nestex::DecoderInput input(std::move(nodes));
  for (std::size_t a = 0; a < input.nodes.size(); ++a) {
    for (std::size_t b = 0; b < input.nodes.size(); ++b) {
      if (a == b || input.nodes[a].kind != NodeKind::kTrigger) continue;
      auto& table = input.edge(a, b);
      for (std::size_t r = 0; r <= num_roles; ++r) table.push_back(draw());
    }
  }
  return input;
}

}  // namespace oracle

#endif  // NESTEX_TESTS_ORACLES_H_
