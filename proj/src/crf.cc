#include "nestex/crf.h"

#include <cmath>
#include <limits>
#include <string>

namespace nestex {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_emissions(const Tensor& emissions, const CrfLayer& crf) {
  if (emissions.rank() != 2 || emissions.cols() != crf.num_tags()) {
    throw ShapeError("crf: emissions " + emissions.shape_string() + " do not match " +
                     std::to_string(crf.num_tags()) + " tags");
  }
  if (emissions.rows() == 0) throw ShapeError("crf: empty emission table");
}

void check_path(const Tensor& emissions, const CrfLayer& crf,
                std::span<const int> tags) {
  if (tags.size() != emissions.rows()) {
    throw ShapeError("crf: tag path of length " + std::to_string(tags.size()) +
                     " for " + std::to_string(emissions.rows()) + " tokens");
  }
  for (int t : tags) {
    if (t < 0 || static_cast<std::size_t>(t) >= crf.num_tags()) {
      throw ShapeError("crf: tag index " + std::to_string(t) + " out of range");
    }
  }
}

// alpha[i][z]: log-sum of prefix paths ending in z at position i, including
// the emission at i.
Tensor forward_scores(const Tensor& f, const CrfLayer& crf) {
  const std::size_t n = f.rows(), k = crf.num_tags();
  Tensor alpha = Tensor::matrix(n, k);
  for (std::size_t z = 0; z < k; ++z) {
    alpha.at(0, z) = crf.transition(crf.start(), z) + f.at(0, z);
  }
  std::vector<double> terms(k);
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t z = 0; z < k; ++z) {
      for (std::size_t y = 0; y < k; ++y) {
        terms[y] = alpha.at(i - 1, y) + crf.transition(y, z);
      }
      alpha.at(i, z) = f.at(i, z) + log_sum_exp(terms);
    }
  }
  return alpha;
}

// beta[i][y]: log-sum of suffix paths after position i given z_i = y,
// excluding the emission at i, including the end transition.
Tensor backward_scores(const Tensor& f, const CrfLayer& crf) {
  const std::size_t n = f.rows(), k = crf.num_tags();
  Tensor beta = Tensor::matrix(n, k);
  for (std::size_t y = 0; y < k; ++y) beta.at(n - 1, y) = crf.transition(y, crf.end());
  std::vector<double> terms(k);
  for (std::size_t i = n - 1; i-- > 0;) {
    for (std::size_t y = 0; y < k; ++y) {
      for (std::size_t z = 0; z < k; ++z) {
        terms[z] = crf.transition(y, z) + f.at(i + 1, z) + beta.at(i + 1, z);
      }
      beta.at(i, y) = log_sum_exp(terms);
    }
  }
  return beta;
}

double partition_from_alpha(const Tensor& alpha, const CrfLayer& crf) {
  const std::size_t n = alpha.rows(), k = crf.num_tags();
  std::vector<double> terms(k);
  for (std::size_t z = 0; z < k; ++z) {
    terms[z] = alpha.at(n - 1, z) + crf.transition(z, crf.end());
  }
  return log_sum_exp(terms);
}

}  // namespace

TransitionMask::TransitionMask(std::size_t num_tags)
    : num_tags_(num_tags), allowed_((num_tags + 2) * (num_tags + 2), 1) {}

TransitionMask TransitionMask::bio(const TagSet& tags) {
  TransitionMask mask(tags.size());
  const std::size_t k = tags.size();
  for (std::size_t to = 0; to < k; ++to) {
    const int t = static_cast<int>(to);
    if (!tags.is_inside(t)) continue;
    const std::size_t label = tags.label_of(t);
    for (std::size_t from = 0; from < k + 2; ++from) {
      const int f = static_cast<int>(from);
      const bool continues = from < k && (tags.is_begin(f) || tags.is_inside(f)) &&
                             tags.label_of(f) == label;
      mask.set(from, to, continues);
    }
  }
  return mask;
}

CrfLayer::CrfLayer(std::size_t num_tags)
    : transitions_(Tensor::matrix(num_tags + 2, num_tags + 2)), mask_(num_tags) {}

CrfLayer::CrfLayer(Tensor transitions, TransitionMask mask)
    : transitions_(std::move(transitions)), mask_(std::move(mask)) {
  const std::size_t size = mask_.num_tags() + 2;
  if (transitions_.rank() != 2 || transitions_.rows() != size ||
      transitions_.cols() != size) {
    throw ShapeError("crf: transition matrix " + transitions_.shape_string() +
                     " must be square of size k+2 = " + std::to_string(size));
  }
}

double CrfLayer::transition(std::size_t from, std::size_t to) const {
  return mask_.allowed(from, to) ? transitions_.at(from, to) : kNegInf;
}

double sequence_score(const Tensor& emissions, const CrfLayer& crf,
                      std::span<const int> tags) {
  check_emissions(emissions, crf);
  check_path(emissions, crf, tags);
  double score = crf.transition(crf.start(), tags.front());
  for (std::size_t i = 0; i < tags.size(); ++i) {
    score += emissions.at(i, tags[i]);
    const std::size_t next = i + 1 < tags.size() ? tags[i + 1] : crf.end();
    score += crf.transition(tags[i], next);
  }
  return score;
}

double log_partition(const Tensor& emissions, const CrfLayer& crf) {
  check_emissions(emissions, crf);
  return partition_from_alpha(forward_scores(emissions, crf), crf);
}

CrfMarginals marginals(const Tensor& emissions, const CrfLayer& crf) {
  check_emissions(emissions, crf);
  const std::size_t n = emissions.rows(), k = crf.num_tags();
  const Tensor alpha = forward_scores(emissions, crf);
  const Tensor beta = backward_scores(emissions, crf);
  CrfMarginals m;
  m.log_partition = partition_from_alpha(alpha, crf);
  if (!std::isfinite(m.log_partition)) {
    throw CrfError("crf: no allowed tag path");
  }
  const double log_z = m.log_partition;
  m.unary = Tensor::matrix(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t z = 0; z < k; ++z) {
      m.unary.at(i, z) = std::exp(alpha.at(i, z) + beta.at(i, z) - log_z);
    }
  }
  m.pairwise = Tensor({n - 1, k, k});
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        m.pairwise[(i * k + a) * k + b] =
            std::exp(alpha.at(i, a) + crf.transition(a, b) + emissions.at(i + 1, b) +
                     beta.at(i + 1, b) - log_z);
      }
    }
  }
  m.start.assign(m.unary.row(0).begin(), m.unary.row(0).end());
  m.end.assign(m.unary.row(n - 1).begin(), m.unary.row(n - 1).end());
  return m;
}

ViterbiResult viterbi(const Tensor& emissions, const CrfLayer& crf) {
  check_emissions(emissions, crf);
  const std::size_t n = emissions.rows(), k = crf.num_tags();

  // best[i][y]: best suffix score after position i given z_i = y.
  Tensor best = Tensor::matrix(n, k);
  for (std::size_t y = 0; y < k; ++y) best.at(n - 1, y) = crf.transition(y, crf.end());
  auto extend = [&](std::size_t from, std::size_t i, std::size_t z) {
    return crf.transition(from, z) + emissions.at(i, z) + best.at(i, z);
  };
  for (std::size_t i = n - 1; i-- > 0;) {
    for (std::size_t y = 0; y < k; ++y) {
      double top = kNegInf;
      for (std::size_t z = 0; z < k; ++z) top = std::max(top, extend(y, i + 1, z));
      best.at(i, y) = top;
    }
  }
  double total = kNegInf;
  for (std::size_t z = 0; z < k; ++z) total = std::max(total, extend(crf.start(), 0, z));
  if (total == kNegInf) throw CrfError("crf: every tag path is masked");

  // Walk forward taking the smallest tag that still attains the optimum.
  ViterbiResult result;
  result.score = total;
  result.tags.reserve(n);
  std::size_t prev = crf.start();
  double target = total;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t choice = k;
    for (std::size_t z = 0; z < k; ++z) {
      if (extend(prev, i, z) == target) {
        choice = z;
        break;
      }
    }
    if (choice == k) throw CrfError("crf: viterbi backtrace lost the optimum");
    result.tags.push_back(static_cast<int>(choice));
    target = best.at(i, choice);
    prev = choice;
  }
  return result;
}

CrfLoss nll_and_grads(const Tensor& emissions, const CrfLayer& crf,
                      std::span<const int> gold) {
  check_emissions(emissions, crf);
  check_path(emissions, crf, gold);
  const double gold_score = sequence_score(emissions, crf, gold);
  if (!std::isfinite(gold_score)) {
    throw CrfError("crf: gold tag path uses a masked transition");
  }
  const CrfMarginals m = marginals(emissions, crf);
  const std::size_t n = emissions.rows(), k = crf.num_tags();

  CrfLoss out;
  out.loss = m.log_partition - gold_score;
  out.d_emissions = m.unary;
  for (std::size_t i = 0; i < n; ++i) out.d_emissions.at(i, gold[i]) -= 1.0;

  out.d_transitions = Tensor::matrix(k + 2, k + 2);
  Tensor& dt = out.d_transitions;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) dt.at(a, b) += m.pairwise[(i * k + a) * k + b];
    }
    dt.at(gold[i], gold[i + 1]) -= 1.0;
  }
  for (std::size_t z = 0; z < k; ++z) {
    dt.at(crf.start(), z) += m.start[z];
    dt.at(z, crf.end()) += m.end[z];
  }
  dt.at(crf.start(), gold.front()) -= 1.0;
  dt.at(gold.back(), crf.end()) -= 1.0;
  return out;
}

}  // namespace nestex
