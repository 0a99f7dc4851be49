#include <cmath>
#include <set>

#include "doctest.h"
#include "nestex/decoder.h"
#include "nestex/rng.h"
#include "oracles.h"

using namespace nestex;

namespace {

BeamConfig exhaustive(std::size_t num_types, std::size_t num_roles) {
  return BeamConfig{1000000, num_types, num_roles + 1};
}

double independent_sum(const EventGraph& g) {
  double s = 0.0;
  for (const auto& e : g.edges) s += e.score;
  for (const auto& n : g.nodes) s += n.score;
  return s;
}

}  // namespace

TEST_CASE("graph_score examples") {
  EventGraph g;
  g.nodes = {GraphNode{0, {0, 1}, NodeKind::kTrigger, 0, 0.5}, GraphNode{1, {1, 2}, NodeKind::kTrigger, 0, 1.5}};
  g.edges = {GraphEdge{0, 1, 0, 2.0}};
  CHECK(graph_score(g) == 4.0);
  CHECK(graph_score(EventGraph{}) == 0.0);

  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    EventGraph r;
    for (std::size_t i = 0; i < 1 + rng.index(6); ++i) {
      r.nodes.push_back(GraphNode{i, {0, 1}, NodeKind::kTrigger, 0, rng.normal()});
    }
    for (std::size_t i = 0; i < rng.index(6); ++i) r.edges.push_back(GraphEdge{0, 1, 0, rng.normal()});
    CHECK(graph_score(r) == doctest::Approx(independent_sum(r)).epsilon(1e-12));
  }
}

TEST_CASE("empty input decodes to an empty graph") {
  const EventGraph g = decode(DecoderInput{}, BeamConfig{});
  CHECK(g.nodes.empty());
  CHECK(g.edges.empty());
  CHECK(g.beam_score == 0.0);
  CHECK_THROWS(decode(DecoderInput{}, BeamConfig{0, 2, 2}));
}

TEST_CASE("single trigger takes its argmax type") {
  NodeCandidate c;
  c.span = {2, 3};
  c.label_scores = {-2.0, -0.1, -3.0};
  const EventGraph g = decode(DecoderInput({c}), BeamConfig{});
  REQUIRE(g.nodes.size() == 1);
  CHECK(g.nodes[0].label == 1);
  CHECK(g.nodes[0].score == -0.1);
}

TEST_CASE("node visiting order") {
  std::vector<NodeCandidate> nodes(4);
  nodes[0] = {{3, 4}, NodeKind::kTrigger, {0.0}};
  nodes[1] = {{1, 3}, NodeKind::kEntity, {}};
  nodes[2] = {{1, 2}, NodeKind::kEntity, {}};
  nodes[3] = {{1, 2}, NodeKind::kTrigger, {0.0}};
  CHECK(decode_order(nodes) == std::vector<std::size_t>{3, 2, 1, 0});
}

TEST_CASE("NONE-dominated edge tables give no edges") {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    DecoderInput input = oracle::random_decoder_input(rng, 1 + rng.index(3), rng.index(3), 3, 2, false);
    for (auto& table : input.edge_scores) {
      if (!table.empty()) table[0] = 10.0;
    }
    CHECK(decode(input, BeamConfig{}).edges.empty());
  }
}

TEST_CASE("edge step prefers a strong role and never emits NONE") {
  std::vector<NodeCandidate> nodes(2);
  nodes[0] = {{0, 1}, NodeKind::kTrigger, {-0.1}};
  nodes[1] = {{1, 2}, NodeKind::kEntity, {}};
  DecoderInput input(nodes);
  input.edge(0, 1) = {-2.0, -0.5, -3.0};
  const EventGraph g = decode(input, BeamConfig{});
  REQUIRE(g.edges.size() == 1);
  CHECK(g.edges[0].role == 0);
  CHECK(g.edges[0].score == 1.5);
  CHECK(g.beam_score == doctest::Approx(1.4));
}

TEST_CASE("mutual trigger arguments are never both kept") {
  std::vector<NodeCandidate> nodes(2);
  nodes[0] = {{0, 1}, NodeKind::kTrigger, {0.0}};
  nodes[1] = {{1, 2}, NodeKind::kTrigger, {0.0}};
  DecoderInput input(nodes);
  input.edge(0, 1) = {-5.0, 0.0};
  input.edge(1, 0) = {-5.0, -1.0};
  const EventGraph g = decode(input, BeamConfig{});
  REQUIRE(g.edges.size() == 1);
  CHECK(g.edges[0].from == 0);
  CHECK(g.beam_score == 5.0);
}

TEST_CASE("exhaustive beam equals the brute-force argmax exactly") {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t nt = 1 + rng.index(2), ne = rng.index(3);
    const std::size_t types = 1 + rng.index(3), roles = 1 + rng.index(2);
    const DecoderInput input = oracle::random_decoder_input(rng, nt, ne, types, roles, true);
    const EventGraph g = decode(input, exhaustive(types, roles));
    CHECK(g.beam_score == oracle::best_graph_score(input));
    CHECK(graph_score(g) == g.beam_score);
  }
}

TEST_CASE("returned graphs are well formed and rescore to the beam score") {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const DecoderInput input =
        oracle::random_decoder_input(rng, 1 + rng.index(4), rng.index(4), 4, 3, false);
    const EventGraph g = decode(input, BeamConfig{1 + rng.index(20), 2, 2});
    CHECK(std::abs(graph_score(g) - g.beam_score) <= 1e-12);
    std::set<std::pair<std::size_t, std::size_t>> pairs;
    for (const auto& e : g.edges) {
      CHECK(e.from != e.to);
      CHECK(g.nodes[e.from].kind == NodeKind::kTrigger);
      CHECK(e.role < 3);  // a role index, never NONE
      CHECK(pairs.insert({e.from, e.to}).second);
    }
  }
}

TEST_CASE("decode is a pure function of its input") {
  Rng rng(5);
  const DecoderInput input = oracle::random_decoder_input(rng, 4, 4, 5, 3, false);
  const EventGraph a = decode(input, BeamConfig{});
  const EventGraph b = decode(input, BeamConfig{});
  CHECK(a == b);
  CHECK(a.beam_score == b.beam_score);
}

TEST_CASE("best score does not drop as the beam widens") {
  Rng rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const DecoderInput input =
        oracle::random_decoder_input(rng, 1 + rng.index(2), rng.index(3), 1 + rng.index(3), 1 + rng.index(2), false);
    double previous = -INFINITY;
    for (std::size_t theta = 1; theta <= 64; theta *= 2) {
      const double s = decode(input, BeamConfig{theta, 2, 2}).beam_score;
      CHECK(s >= previous);
      previous = s;
    }
  }
}
