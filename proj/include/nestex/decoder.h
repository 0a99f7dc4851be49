#ifndef NESTEX_DECODER_H_
#define NESTEX_DECODER_H_

#include <cstddef>
#include <vector>

#include "nestex/corpus.h"

namespace nestex {

enum class NodeKind { kTrigger, kEntity };

// Edge label vectors put NONE at index 0 and role r at index r + 1.
inline constexpr std::size_t kNoneLabel = 0;

struct NodeCandidate {
  Span span;
  NodeKind kind = NodeKind::kTrigger;
  // Per event-type scores for triggers; ignored for entities.
  std::vector<double> label_scores;
};

struct DecoderInput {
  std::vector<NodeCandidate> nodes;
  // Row-major [nodes x nodes]; entry (from, to) holds scores over
  // {NONE, roles...} or is empty when the ordered pair is not a candidate.
  std::vector<std::vector<double>> edge_scores;

  explicit DecoderInput(std::vector<NodeCandidate> candidates = {});
  std::vector<double>& edge(std::size_t from, std::size_t to);
  const std::vector<double>& edge(std::size_t from, std::size_t to) const;
};

struct GraphNode {
  std::size_t source = 0;  // index into DecoderInput::nodes
  Span span;
  NodeKind kind = NodeKind::kTrigger;
  int label = -1;          // event type for triggers, -1 for entities
  double score = 0.0;
  friend bool operator==(const GraphNode&, const GraphNode&) = default;
};

struct GraphEdge {
  std::size_t from = 0;  // positions in EventGraph::nodes
  std::size_t to = 0;
  std::size_t role = 0;  // role index (edge label - 1)
  double score = 0.0;
  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

struct EventGraph {
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;
  // Score accumulated by the beam while building the graph (decode only).
  double beam_score = 0.0;

  // Structural equality; beam_score is not compared.
  friend bool operator==(const EventGraph& a, const EventGraph& b) {
    return a.nodes == b.nodes && a.edges == b.edges;
  }
};

struct BeamConfig {
  std::size_t theta = 20;   // beam width
  std::size_t beta_t = 2;   // trigger label candidates per node
  std::size_t beta_e = 2;   // edge label candidates per pair, NONE included
};

// Sum of node scores followed by edge scores.
double graph_score(const EventGraph& graph);

// Node visiting order: span start, then span end, triggers before entities.
std::vector<std::size_t> decode_order(const std::vector<NodeCandidate>& nodes);

// Beam search over node labels and edge labels. Each node is expanded over
// its top beta_t labels (entities have a single unlabeled expansion), then
// every pair with an already placed node is expanded over its top beta_e
// edge labels; the beam is cut to theta after each node. An edge label
// scores s[label] - s[NONE], so choosing NONE adds nothing and leaves no
// edge. Trigger-trigger edges that would close a directed cycle are skipped.
EventGraph decode(const DecoderInput& input, const BeamConfig& config);

}  // namespace nestex

#endif  // NESTEX_DECODER_H_
