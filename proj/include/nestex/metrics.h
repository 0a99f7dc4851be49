#ifndef NESTEX_METRICS_H_
#define NESTEX_METRICS_H_

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "nestex/corpus.h"

namespace nestex {

// TI: trigger span. TC: span + event type. AI: parent event type + argument
// span. AC: AI + role. PEI/PEC: AI/AC restricted to trigger arguments.
enum class Metric : std::size_t { kTI = 0, kTC, kAI, kAC, kPEI, kPEC };
inline constexpr std::size_t kNumMetrics = 6;
inline constexpr std::array<Metric, kNumMetrics> kAllMetrics = {
    Metric::kTI, Metric::kTC, Metric::kAI, Metric::kAC, Metric::kPEI, Metric::kPEC};
const char* metric_name(Metric m);

struct Counts {
  std::size_t tp = 0;
  std::size_t predicted = 0;
  std::size_t gold = 0;
  friend bool operator==(const Counts&, const Counts&) = default;
};

struct MatchCounts {
  std::array<Counts, kNumMetrics> by_metric{};

  Counts& operator[](Metric m) { return by_metric[static_cast<std::size_t>(m)]; }
  const Counts& operator[](Metric m) const { return by_metric[static_cast<std::size_t>(m)]; }
  MatchCounts& operator+=(const MatchCounts& other);
  friend bool operator==(const MatchCounts&, const MatchCounts&) = default;
};

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Micro P/R/F1; 0/0 is taken as 0.
Prf prf(std::size_t tp, std::size_t predicted, std::size_t gold);

struct Report {
  MatchCounts counts;
  std::array<Prf, kNumMetrics> scores{};

  const Prf& operator[](Metric m) const { return scores[static_cast<std::size_t>(m)]; }
  static Report from_counts(const MatchCounts& counts);

  std::string to_table() const;
  std::string to_json() const;
};

// Counts for one aligned sentence pair (exact span matching, one-to-one).
MatchCounts count_matches(const Sentence& gold, const Sentence& predicted);

// Aligns sentences by id; throws std::invalid_argument on duplicate or
// unmatched ids.
Report evaluate(const std::vector<Sentence>& gold, const std::vector<Sentence>& predicted);

}  // namespace nestex

#endif  // NESTEX_METRICS_H_
