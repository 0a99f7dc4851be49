#ifndef NESTEX_ENCODER_H_
#define NESTEX_ENCODER_H_

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "nestex/corpus.h"
#include "nestex/mlp.h"
#include "nestex/params.h"
#include "nestex/rng.h"

namespace nestex {

// Known tokens in rank order followed by hash buckets for unknown tokens.
class TokenVocab {
 public:
  TokenVocab() = default;
  TokenVocab(std::vector<std::string> tokens, std::size_t hash_buckets);

  // Ranked by descending frequency, ties in byte order.
  static TokenVocab build(const std::vector<Sentence>& corpus, std::size_t hash_buckets);

  // One token per line; line order is the embedding row.
  static TokenVocab load(const std::string& path, std::size_t hash_buckets);
  void save(const std::string& path) const;

  const std::vector<std::string>& tokens() const { return tokens_; }
  std::size_t hash_buckets() const { return hash_buckets_; }
  std::size_t rows() const { return tokens_.size() + hash_buckets_; }
  bool contains(const std::string& token) const { return index_.count(token) > 0; }
  // Embedding row; unknown tokens map to a fixed bucket by FNV-1a hash.
  std::size_t row(const std::string& token) const;

  friend bool operator==(const TokenVocab& a, const TokenVocab& b) {
    return a.tokens_ == b.tokens_ && a.hash_buckets_ == b.hash_buckets_;
  }

 private:
  std::vector<std::string> tokens_;
  std::size_t hash_buckets_ = 1;
  std::unordered_map<std::string, std::size_t> index_;
};

struct EncoderConfig {
  std::size_t embed_dim = 32;
  std::size_t window = 2;
  std::size_t hidden_dim = 64;
  std::size_t output_dim = 64;
  std::size_t layers = 2;
  double dropout = 0.4;
  bool use_prompt = true;
};

// Token representations from a window of embeddings around each position,
// the position parity, and the pooled label-prompt vector, mixed by an MLP.
// Parameters: "enc.embed" [rows x d_e], "enc.prompt" [labels x d_e] (only
// with use_prompt), and the "enc.mlp" network.
class Encoder {
 public:
  Encoder() = default;
  Encoder(EncoderConfig config, TokenVocab vocab, std::size_t num_prompt_labels);

  const EncoderConfig& config() const { return config_; }
  const TokenVocab& vocab() const { return vocab_; }
  const Mlp& mlp() const { return mlp_; }
  std::size_t input_width() const;

  void init(ModelParams& params, std::uint64_t seed) const;

  struct Cache {
    std::vector<std::size_t> rows;
    Mlp::Cache mlp;
  };

  // [n x output_dim]
  Tensor encode(const std::vector<std::string>& tokens, const ModelParams& params,
                bool train, Rng* rng, Cache* cache = nullptr) const;

  // Accumulates gradients of embeddings, prompt labels and the MLP.
  void backward(ModelParams& params, const Cache& cache, const Tensor& d_repr) const;

  // Mean of the label-prompt embeddings (event types, then roles).
  std::vector<double> prompt_summary(const ModelParams& params) const;

 private:
  EncoderConfig config_;
  TokenVocab vocab_;
  std::size_t num_prompt_labels_ = 0;
  Mlp mlp_;
};

}  // namespace nestex

#endif  // NESTEX_ENCODER_H_
