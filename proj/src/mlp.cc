#include "nestex/mlp.h"

#include <cmath>

namespace nestex {

Mlp::Mlp(std::string name, std::vector<std::size_t> widths, double dropout)
    : name_(std::move(name)), widths_(std::move(widths)), dropout_(dropout) {
  if (widths_.size() < 2) throw std::invalid_argument("mlp needs at least one layer");
  if (dropout_ < 0.0 || dropout_ >= 1.0) {
    throw std::invalid_argument("dropout must be in [0, 1)");
  }
}

Mlp Mlp::uniform(std::string name, std::size_t in, std::size_t hidden,
                 std::size_t out, std::size_t layers, double dropout) {
  if (layers < 1) throw std::invalid_argument("mlp layer count must be >= 1");
  std::vector<std::size_t> widths{in};
  for (std::size_t l = 1; l < layers; ++l) widths.push_back(hidden);
  widths.push_back(out);
  return Mlp(std::move(name), std::move(widths), dropout);
}

std::string Mlp::weight_name(std::size_t layer) const {
  return name_ + ".w" + std::to_string(layer);
}
std::string Mlp::bias_name(std::size_t layer) const {
  return name_ + ".b" + std::to_string(layer);
}

void Mlp::init(ModelParams& params, std::uint64_t seed) const {
  for (std::size_t l = 0; l < num_layers(); ++l) {
    const std::size_t in = widths_[l], out = widths_[l + 1];
    Tensor& w = params.add(weight_name(l), {in, out});
    params.add(bias_name(l), {out});
    Rng rng(Rng::derive(seed, weight_name(l)));
    const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    for (double& v : w.values()) v = rng.uniform(-limit, limit);
  }
}

Tensor Mlp::forward(const ModelParams& params, const Tensor& x, bool train,
                    Rng* rng, Cache* cache) const {
  if (x.cols() != input_width()) {
    throw ShapeError(name_ + ": input has " + std::to_string(x.cols()) +
                     " columns, expected " + std::to_string(input_width()));
  }
  const std::size_t n = x.rows();
  const bool use_dropout = train && dropout_ > 0.0;
  if (use_dropout && rng == nullptr) {
    throw std::invalid_argument(name_ + ": dropout requires a generator");
  }
  if (cache) *cache = Cache{};

  Tensor current = x;
  for (std::size_t l = 0; l < num_layers(); ++l) {
    const Tensor& w = params.value(weight_name(l));
    const Tensor& b = params.value(bias_name(l));
    const std::size_t in = widths_[l], out = widths_[l + 1];
    Tensor y = Tensor::matrix(n, out);
    for (std::size_t r = 0; r < n; ++r) {
      double* yr = &y.at(r, 0);
      for (std::size_t o = 0; o < out; ++o) yr[o] = b[o];
      for (std::size_t i = 0; i < in; ++i) {
        const double xi = current.at(r, i);
        if (xi == 0.0) continue;
        const double* wi = w.row(i).data();
        for (std::size_t o = 0; o < out; ++o) yr[o] += xi * wi[o];
      }
    }
    if (cache) cache->inputs.push_back(std::move(current));

    if (l + 1 == num_layers()) return y;

    if (cache) cache->pre_activations.push_back(y);
    std::vector<double> scale;
    if (use_dropout) {
      scale.resize(y.size());
      const double keep = 1.0 - dropout_;
      for (double& s : scale) s = rng->bernoulli(keep) ? 1.0 / keep : 0.0;
    }
    for (std::size_t i = 0; i < y.size(); ++i) {
      double v = y[i] > 0.0 ? y[i] : 0.0;
      if (use_dropout) v *= scale[i];
      y[i] = v;
    }
    if (cache) cache->dropout_scale.push_back(std::move(scale));
    current = std::move(y);
  }
  return current;
}

Tensor Mlp::backward(ModelParams& params, const Cache& cache, const Tensor& dy) const {
  if (cache.inputs.size() != num_layers()) {
    throw std::logic_error(name_ + ": backward without a forward cache");
  }
  Tensor upstream = dy;
  for (std::size_t l = num_layers(); l-- > 0;) {
    const Tensor& input = cache.inputs[l];
    const Tensor& w = params.value(weight_name(l));
    Tensor& dw = params.grad(weight_name(l));
    Tensor& db = params.grad(bias_name(l));
    const std::size_t n = input.rows(), in = widths_[l], out = widths_[l + 1];
    Tensor dx = Tensor::matrix(n, in);
    for (std::size_t r = 0; r < n; ++r) {
      const double* ur = upstream.row(r).data();
      for (std::size_t o = 0; o < out; ++o) db[o] += ur[o];
      for (std::size_t i = 0; i < in; ++i) {
        const double xi = input.at(r, i);
        double* dwi = &dw.at(i, 0);
        const double* wi = w.row(i).data();
        double acc = 0.0;
        for (std::size_t o = 0; o < out; ++o) {
          dwi[o] += xi * ur[o];
          acc += ur[o] * wi[o];
        }
        dx.at(r, i) = acc;
      }
    }
    if (l > 0) {
      const Tensor& pre = cache.pre_activations[l - 1];
      const auto& scale = cache.dropout_scale[l - 1];
      for (std::size_t i = 0; i < dx.size(); ++i) {
        double g = pre[i] > 0.0 ? dx[i] : 0.0;
        if (!scale.empty()) g *= scale[i];
        dx[i] = g;
      }
    }
    upstream = std::move(dx);
  }
  return upstream;
}

CrossEntropy softmax_cross_entropy(std::span<const double> logits, std::size_t gold) {
  if (logits.empty() || gold >= logits.size()) {
    throw std::invalid_argument("softmax_cross_entropy: gold index out of range");
  }
  const std::vector<double> logp = log_softmax(logits);
  CrossEntropy ce;
  ce.loss = -logp[gold];
  ce.grad.resize(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) ce.grad[i] = std::exp(logp[i]);
  ce.grad[gold] -= 1.0;
  return ce;
}

}  // namespace nestex
