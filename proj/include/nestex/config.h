#ifndef NESTEX_CONFIG_H_
#define NESTEX_CONFIG_H_

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace nestex {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every hyperparameter of a run.
struct RunConfig {
  std::size_t embed_dim = 32;
  std::size_t window = 2;
  std::size_t hidden_dim = 64;
  std::size_t repr_dim = 64;
  std::size_t hash_buckets = 64;
  std::size_t fnn_layers = 2;
  double dropout = 0.4;
  double lr = 1e-3;
  double weight_decay = 1e-5;
  double max_grad_norm = 0.0;
  std::size_t epochs = 100;
  std::size_t beam_theta = 20;
  std::size_t beta_t = 2;
  std::size_t beta_e = 2;
  std::uint64_t seed = 1;
  bool use_prompt = true;
  bool ablate_per = false;
  bool entity_typed = false;

  // Applies one key=value assignment; unknown keys and malformed values throw.
  void set(const std::string& key, const std::string& value);
  // Parses flat key=value text; blank lines and '#' comments are skipped.
  void apply_text(const std::string& text);
  void load(const std::string& path);
  void check() const;

  // Canonical key=value listing, one per line, in declaration order.
  std::string to_text() const;
  std::map<std::string, std::string> to_map() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

}  // namespace nestex

#endif  // NESTEX_CONFIG_H_
