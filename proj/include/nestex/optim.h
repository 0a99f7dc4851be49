#ifndef NESTEX_OPTIM_H_
#define NESTEX_OPTIM_H_

#include "nestex/params.h"

namespace nestex {

struct AdamOptions {
  double lr = 1e-3;
  double weight_decay = 1e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  // Rescale gradients whose global L2 norm exceeds this; 0 disables.
  double max_grad_norm = 0.0;
};

// Bias-corrected Adam with decoupled weight decay:
//   theta -= lr * (m_hat / (sqrt(v_hat) + eps) + weight_decay * theta)
// Increments the step counter and zeroes all gradients.
void adam_step(ModelParams& params, const AdamOptions& options);

}  // namespace nestex

#endif  // NESTEX_OPTIM_H_
