#include "nestex/metrics.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include "json.hpp"

namespace nestex {

const char* metric_name(Metric m) {
  switch (m) {
    case Metric::kTI: return "TI";
    case Metric::kTC: return "TC";
    case Metric::kAI: return "AI";
    case Metric::kAC: return "AC";
    case Metric::kPEI: return "PEI";
    case Metric::kPEC: return "PEC";
  }
  return "?";
}

MatchCounts& MatchCounts::operator+=(const MatchCounts& other) {
  for (std::size_t i = 0; i < kNumMetrics; ++i) {
    by_metric[i].tp += other.by_metric[i].tp;
    by_metric[i].predicted += other.by_metric[i].predicted;
    by_metric[i].gold += other.by_metric[i].gold;
  }
  return *this;
}

Prf prf(std::size_t tp, std::size_t predicted, std::size_t gold) {
  Prf out;
  out.precision = predicted ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
  out.recall = gold ? static_cast<double>(tp) / static_cast<double>(gold) : 0.0;
  const double sum = out.precision + out.recall;
  out.f1 = sum > 0.0 ? 2.0 * out.precision * out.recall / sum : 0.0;
  return out;
}

Report Report::from_counts(const MatchCounts& counts) {
  Report r;
  r.counts = counts;
  for (std::size_t i = 0; i < kNumMetrics; ++i) {
    const Counts& c = counts.by_metric[i];
    r.scores[i] = prf(c.tp, c.predicted, c.gold);
  }
  return r;
}

std::string Report::to_table() const {
  std::string out = "metric       P        R       F1      tp    pred    gold\n";
  char buf[128];
  for (Metric m : kAllMetrics) {
    const Prf& s = (*this)[m];
    const Counts& c = counts[m];
    std::snprintf(buf, sizeof(buf), "%-6s %7.2f  %7.2f  %7.2f  %6zu  %6zu  %6zu\n",
                  metric_name(m), 100.0 * s.precision, 100.0 * s.recall, 100.0 * s.f1,
                  c.tp, c.predicted, c.gold);
    out += buf;
  }
  return out;
}

std::string Report::to_json() const {
  nlohmann::ordered_json j;
  for (Metric m : kAllMetrics) {
    const Prf& s = (*this)[m];
    const Counts& c = counts[m];
    j[metric_name(m)] = {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1},
                         {"tp", c.tp}, {"predicted", c.predicted}, {"gold", c.gold}};
  }
  return j.dump();
}

namespace {

using SpanKey = std::tuple<int, int>;
using TypedSpanKey = std::tuple<int, int, std::string>;
// (parent event type, argument start, argument end)
using ArgKey = std::tuple<std::string, int, int>;
using RoleKey = std::tuple<std::string, int, int, std::string>;

template <typename Key>
std::size_t multiset_overlap(const std::multiset<Key>& gold, const std::multiset<Key>& pred) {
  std::size_t tp = 0;
  for (auto it = gold.begin(); it != gold.end(); it = gold.upper_bound(*it)) {
    tp += std::min(gold.count(*it), pred.count(*it));
  }
  return tp;
}

template <typename Key>
void tally(Counts& c, const std::multiset<Key>& gold, const std::multiset<Key>& pred) {
  c.tp += multiset_overlap(gold, pred);
  c.predicted += pred.size();
  c.gold += gold.size();
}

struct Keys {
  std::multiset<SpanKey> ti;
  std::multiset<TypedSpanKey> tc;
  std::multiset<ArgKey> ai, pei;
  std::multiset<RoleKey> ac, pec;
};

Keys collect(const Sentence& s, bool dedupe_mentions) {
  Keys k;
  std::set<SpanKey> seen_spans;
  std::set<TypedSpanKey> seen_typed;
  for (const auto& t : s.triggers) {
    SpanKey span{t.span.start, t.span.end};
    TypedSpanKey typed{t.span.start, t.span.end, t.event_type};
    if (!dedupe_mentions || seen_spans.insert(span).second) k.ti.insert(span);
    if (!dedupe_mentions || seen_typed.insert(typed).second) k.tc.insert(typed);
  }
  for (const auto& a : s.arguments) {
    const TriggerMention* parent = s.find_trigger(a.parent);
    const auto child_span = s.span_of(a.child);
    if (!parent || !child_span) continue;
    ArgKey arg{parent->event_type, child_span->start, child_span->end};
    RoleKey role{parent->event_type, child_span->start, child_span->end, a.role};
    k.ai.insert(arg);
    k.ac.insert(role);
    if (s.find_trigger(a.child)) {
      k.pei.insert(arg);
      k.pec.insert(role);
    }
  }
  return k;
}

}  // namespace

MatchCounts count_matches(const Sentence& gold, const Sentence& predicted) {
  const Keys g = collect(gold, false);
  const Keys p = collect(predicted, true);
  MatchCounts c;
  tally(c[Metric::kTI], g.ti, p.ti);
  tally(c[Metric::kTC], g.tc, p.tc);
  tally(c[Metric::kAI], g.ai, p.ai);
  tally(c[Metric::kAC], g.ac, p.ac);
  tally(c[Metric::kPEI], g.pei, p.pei);
  tally(c[Metric::kPEC], g.pec, p.pec);
  return c;
}

Report evaluate(const std::vector<Sentence>& gold, const std::vector<Sentence>& predicted) {
  std::map<std::string, const Sentence*> by_id;
  for (const auto& p : predicted) {
    if (!by_id.emplace(p.id, &p).second) {
      throw std::invalid_argument("evaluate: duplicate predicted sentence id '" + p.id + "'");
    }
  }
  std::set<std::string> gold_ids;
  MatchCounts total;
  for (const auto& g : gold) {
    if (!gold_ids.insert(g.id).second) {
      throw std::invalid_argument("evaluate: duplicate gold sentence id '" + g.id + "'");
    }
    auto it = by_id.find(g.id);
    if (it == by_id.end()) {
      throw std::invalid_argument("evaluate: no prediction for sentence id '" + g.id + "'");
    }
    total += count_matches(g, *it->second);
  }
  for (const auto& [id, s] : by_id) {
    if (!gold_ids.count(id)) {
      throw std::invalid_argument("evaluate: prediction for unknown sentence id '" + id + "'");
    }
  }
  return Report::from_counts(total);
}

}  // namespace nestex
