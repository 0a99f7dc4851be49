#include "nestex/optim.h"

#include <cmath>

namespace nestex {

void adam_step(ModelParams& params, const AdamOptions& options) {
  double clip = 1.0;
  if (options.max_grad_norm > 0.0) {
    const double norm = params.grad_norm();
    if (norm > options.max_grad_norm) clip = options.max_grad_norm / norm;
  }

  const std::int64_t t = params.step() + 1;
  const double correction1 = 1.0 - std::pow(options.beta1, static_cast<double>(t));
  const double correction2 = 1.0 - std::pow(options.beta2, static_cast<double>(t));

  for (auto& [name, p] : params.entries()) {
    auto& theta = p.value.values();
    auto& grad = p.grad.values();
    auto& m = p.first_moment.values();
    auto& v = p.second_moment.values();
    for (std::size_t i = 0; i < theta.size(); ++i) {
      const double g = grad[i] * clip;
      m[i] = options.beta1 * m[i] + (1.0 - options.beta1) * g;
      v[i] = options.beta2 * v[i] + (1.0 - options.beta2) * g * g;
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      theta[i] -= options.lr * (m_hat / (std::sqrt(v_hat) + options.epsilon) +
                                options.weight_decay * theta[i]);
      grad[i] = 0.0;
    }
  }
  params.set_step(t);
}

}  // namespace nestex
