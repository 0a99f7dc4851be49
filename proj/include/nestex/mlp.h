#ifndef NESTEX_MLP_H_
#define NESTEX_MLP_H_

#include <cstdint>
#include <string>
#include <vector>

#include "nestex/params.h"
#include "nestex/rng.h"
#include "nestex/tensor.h"

namespace nestex {

// Feedforward network: Linear (ReLU, dropout, Linear)*. Weights of layer l
// are stored as "<name>.w<l>" with shape [in x out] and "<name>.b<l>" [out].
class Mlp {
 public:
  Mlp() = default;
  // widths = {in, hidden..., out}; layer count is widths.size() - 1.
  Mlp(std::string name, std::vector<std::size_t> widths, double dropout);

  // Hidden width repeated so that the network has `layers` linear layers.
  static Mlp uniform(std::string name, std::size_t in, std::size_t hidden,
                     std::size_t out, std::size_t layers, double dropout);

  const std::string& name() const { return name_; }
  std::size_t input_width() const { return widths_.front(); }
  std::size_t output_width() const { return widths_.back(); }
  std::size_t num_layers() const { return widths_.size() - 1; }
  double dropout() const { return dropout_; }

  std::string weight_name(std::size_t layer) const;
  std::string bias_name(std::size_t layer) const;

  // Registers parameters and fills weights with Glorot-uniform draws from a
  // stream derived from (seed, parameter name). Biases start at zero.
  void init(ModelParams& params, std::uint64_t seed) const;

  struct Cache {
    std::vector<Tensor> inputs;        // input of each linear layer
    std::vector<Tensor> pre_activations;  // hidden layers only
    std::vector<std::vector<double>> dropout_scale;  // hidden layers only
  };

  // x is [n x in]. With train = false dropout is disabled and rng may be null.
  Tensor forward(const ModelParams& params, const Tensor& x, bool train,
                 Rng* rng, Cache* cache = nullptr) const;

  // Accumulates parameter gradients for upstream gradient dy [n x out] and
  // returns dx [n x in].
  Tensor backward(ModelParams& params, const Cache& cache, const Tensor& dy) const;

 private:
  std::string name_;
  std::vector<std::size_t> widths_;
  double dropout_ = 0.0;
};

struct CrossEntropy {
  double loss = 0.0;
  std::vector<double> grad;  // d loss / d logits
};

// -log softmax(logits)[gold] and its gradient softmax - onehot(gold).
CrossEntropy softmax_cross_entropy(std::span<const double> logits, std::size_t gold);

}  // namespace nestex

#endif  // NESTEX_MLP_H_
