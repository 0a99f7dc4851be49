#ifndef NESTEX_CRF_H_
#define NESTEX_CRF_H_

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "nestex/bio.h"
#include "nestex/tensor.h"

namespace nestex {

class CrfError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Allowed transitions over k tags plus the synthetic start (index k) and end
// (index k + 1) tags.
class TransitionMask {
 public:
  TransitionMask() = default;
  // Every transition allowed.
  explicit TransitionMask(std::size_t num_tags);

  // I-l is reachable only from B-l or I-l; start may not enter an I tag.
  static TransitionMask bio(const TagSet& tags);

  std::size_t num_tags() const { return num_tags_; }
  std::size_t start() const { return num_tags_; }
  std::size_t end() const { return num_tags_ + 1; }

  bool allowed(std::size_t from, std::size_t to) const {
    return allowed_[from * (num_tags_ + 2) + to] != 0;
  }
  void set(std::size_t from, std::size_t to, bool allowed) {
    allowed_[from * (num_tags_ + 2) + to] = allowed ? 1 : 0;
  }

 private:
  std::size_t num_tags_ = 0;
  std::vector<char> allowed_;
};

// Linear-chain CRF layer: a (k+2) x (k+2) transition score matrix and the
// mask that pins disallowed transitions to -inf.
class CrfLayer {
 public:
  CrfLayer() = default;
  explicit CrfLayer(std::size_t num_tags);
  CrfLayer(Tensor transitions, TransitionMask mask);

  std::size_t num_tags() const { return mask_.num_tags(); }
  std::size_t start() const { return mask_.start(); }
  std::size_t end() const { return mask_.end(); }
  const Tensor& transitions() const { return transitions_; }
  Tensor& transitions() { return transitions_; }
  const TransitionMask& mask() const { return mask_; }

  // Transition score, or -inf when masked.
  double transition(std::size_t from, std::size_t to) const;

 private:
  Tensor transitions_;
  TransitionMask mask_;
};

// Sum of emission scores F[i, z_i] and transitions start->z_0 ... z_{n-1}->end.
// -inf if the path uses a masked transition.
double sequence_score(const Tensor& emissions, const CrfLayer& crf,
                      std::span<const int> tags);

// log sum over all tag paths of exp(sequence_score); forward algorithm.
double log_partition(const Tensor& emissions, const CrfLayer& crf);

struct CrfMarginals {
  Tensor unary;     // [n x k]
  Tensor pairwise;  // [(n-1) x k x k], entry (i, a, b) = p(z_i = a, z_{i+1} = b)
  std::vector<double> start;  // p(z_0 = a), the start->a boundary marginal
  std::vector<double> end;    // p(z_{n-1} = a), the a->end boundary marginal
  double log_partition = 0.0;
};

// Forward-backward marginals. Throws CrfError if no path is allowed.
CrfMarginals marginals(const Tensor& emissions, const CrfLayer& crf);

struct ViterbiResult {
  std::vector<int> tags;
  double score = 0.0;
};

// Highest-scoring allowed path; among equal scores, the lexicographically
// smallest tag sequence. Throws CrfError if every path is masked.
ViterbiResult viterbi(const Tensor& emissions, const CrfLayer& crf);

struct CrfLoss {
  double loss = 0.0;
  Tensor d_emissions;    // [n x k]
  Tensor d_transitions;  // [(k+2) x (k+2)]
};

// -log p(gold | emissions) with gradients: unary marginals minus gold
// indicators for emissions, pairwise and boundary marginals minus gold
// transition counts for transitions. Throws CrfError for a masked gold path.
CrfLoss nll_and_grads(const Tensor& emissions, const CrfLayer& crf,
                      std::span<const int> gold);

}  // namespace nestex

#endif  // NESTEX_CRF_H_
