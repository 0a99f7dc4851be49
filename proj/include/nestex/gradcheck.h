#ifndef NESTEX_GRADCHECK_H_
#define NESTEX_GRADCHECK_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nestex/params.h"

namespace nestex {

// Computes the loss; when accumulate_grad is set it must also add the
// analytic gradient into params' gradient buffers. Must be deterministic.
using LossFn = std::function<double(ModelParams& params, bool accumulate_grad)>;

struct GradCheckOptions {
  double eps = 1e-5;
  double tol = 1e-4;
  // Coordinates sampled per parameter tensor; 0 checks every coordinate.
  std::size_t samples_per_param = 50;
  // Draw samples among coordinates with a nonzero analytic gradient when
  // enough of them exist (embedding rows of absent tokens are exactly zero).
  bool prefer_nonzero = true;
  // Lower bound on the relative-error denominator.
  double denominator_floor = 1e-6;
  // Only parameters whose name starts with one of these; empty means all.
  std::vector<std::string> prefixes;
  std::uint64_t seed = 1;
};

struct GradCheckEntry {
  std::string param;
  std::size_t index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  double rel_error = 0.0;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;
  std::vector<GradCheckEntry> failures;
  double max_rel_error = 0.0;
  double tol = 0.0;

  bool passed() const { return failures.empty() && !entries.empty(); }
  std::size_t checked(const std::string& prefix) const;
  std::string summary() const;
};

// |a - n| / max(|a|, |n|, floor)
double relative_error(double analytic, double numeric, double floor);

// Adds N(0, stddev) noise to every parameter value. Freshly initialized
// models have zero biases, which can put ReLU inputs exactly on the kink;
// checking at a jittered point avoids one-sided differences there.
void jitter_values(ModelParams& params, std::uint64_t seed, double stddev);

// Compares analytic gradients to central differences (f(x+eps)-f(x-eps))/2eps.
// Parameter values are restored afterwards; gradients hold the analytic values.
GradCheckReport grad_check(const LossFn& loss_fn, ModelParams& params,
                           const GradCheckOptions& options);

}  // namespace nestex

#endif  // NESTEX_GRADCHECK_H_
