#include "nestex/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "nestex/rng.h"

namespace nestex {

double relative_error(double analytic, double numeric, double floor) {
  const double denom = std::max({std::fabs(analytic), std::fabs(numeric), floor});
  return std::fabs(analytic - numeric) / denom;
}

std::size_t GradCheckReport::checked(const std::string& prefix) const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [&](const auto& e) {
        return e.param.rfind(prefix, 0) == 0;
      }));
}

std::string GradCheckReport::summary() const {
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "%zu coordinates checked, %zu failures, max rel. error %.3e (tol %.1e)",
                entries.size(), failures.size(), max_rel_error, tol);
  std::string out = buf;
  out += '\n';
  for (std::size_t i = 0; i < failures.size() && i < 20; ++i) {
    const auto& f = failures[i];
    std::snprintf(buf, sizeof(buf), "  %s[%zu] analytic %.10g numeric %.10g rel %.3e\n",
                  f.param.c_str(), f.index, f.analytic, f.numeric, f.rel_error);
    out += buf;
  }
  return out;
}

namespace {

bool selected(const std::string& name, const std::vector<std::string>& prefixes) {
  if (prefixes.empty()) return true;
  return std::any_of(prefixes.begin(), prefixes.end(), [&](const std::string& p) {
    return name.rfind(p, 0) == 0;
  });
}

std::vector<std::size_t> sample_indices(const Tensor& grad, std::size_t count,
                                        bool prefer_nonzero, Rng& rng) {
  std::vector<std::size_t> pool;
  if (prefer_nonzero) {
    for (std::size_t i = 0; i < grad.size(); ++i) {
      if (grad[i] != 0.0) pool.push_back(i);
    }
    if (count != 0 && pool.size() < count) pool.clear();
  }
  if (pool.empty()) {
    pool.resize(grad.size());
    std::iota(pool.begin(), pool.end(), std::size_t{0});
  }
  if (count == 0 || pool.size() <= count) return pool;
  rng.shuffle(pool);
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

void jitter_values(ModelParams& params, std::uint64_t seed, double stddev) {
  Rng rng(Rng::derive(seed, "jitter"));
  for (auto& [name, p] : params.entries()) {
    for (double& v : p.value.values()) v += rng.normal(0.0, stddev);
  }
}

GradCheckReport grad_check(const LossFn& loss_fn, ModelParams& params,
                           const GradCheckOptions& options) {
  GradCheckReport report;
  report.tol = options.tol;
  params.zero_grad();
  loss_fn(params, true);

  Rng rng(options.seed);
  for (auto& [name, p] : params.entries()) {
    if (!selected(name, options.prefixes)) continue;
    const auto indices =
        sample_indices(p.grad, options.samples_per_param, options.prefer_nonzero, rng);
    for (std::size_t i : indices) {
      const double original = p.value[i];
      p.value[i] = original + options.eps;
      const double plus = loss_fn(params, false);
      p.value[i] = original - options.eps;
      const double minus = loss_fn(params, false);
      p.value[i] = original;

      GradCheckEntry entry;
      entry.param = name;
      entry.index = i;
      entry.analytic = p.grad[i];
      entry.numeric = (plus - minus) / (2.0 * options.eps);
      entry.rel_error =
          relative_error(entry.analytic, entry.numeric, options.denominator_floor);
      if (!std::isfinite(entry.rel_error)) entry.rel_error = INFINITY;
      report.max_rel_error = std::max(report.max_rel_error, entry.rel_error);
      if (!(entry.rel_error <= options.tol)) report.failures.push_back(entry);
      report.entries.push_back(std::move(entry));
    }
  }
  return report;
}

}  // namespace nestex
