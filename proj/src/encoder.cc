#include "nestex/encoder.h"

#include <algorithm>
#include <fstream>
#include <map>

namespace nestex {

namespace {

constexpr const char* kEmbed = "enc.embed";
constexpr const char* kPrompt = "enc.prompt";
constexpr double kEmbedInitStddev = 0.3;

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

TokenVocab::TokenVocab(std::vector<std::string> tokens, std::size_t hash_buckets)
    : tokens_(std::move(tokens)), hash_buckets_(hash_buckets) {
  if (hash_buckets_ == 0) throw std::invalid_argument("token vocab needs >= 1 hash bucket");
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], i).second) {
      throw std::invalid_argument("duplicate vocabulary token: " + tokens_[i]);
    }
  }
}

TokenVocab TokenVocab::build(const std::vector<Sentence>& corpus,
                             std::size_t hash_buckets) {
  std::map<std::string, std::size_t> counts;
  for (const auto& s : corpus) {
    for (const auto& t : s.tokens) ++counts[t];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> tokens;
  tokens.reserve(ranked.size());
  for (auto& [token, count] : ranked) tokens.push_back(token);
  return TokenVocab(std::move(tokens), hash_buckets);
}

TokenVocab TokenVocab::load(const std::string& path, std::size_t hash_buckets) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open vocabulary file: " + path);
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    tokens.push_back(line);
  }
  return TokenVocab(std::move(tokens), hash_buckets);
}

void TokenVocab::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write vocabulary file: " + path);
  for (const auto& t : tokens_) out << t << '\n';
}

std::size_t TokenVocab::row(const std::string& token) const {
  auto it = index_.find(token);
  if (it != index_.end()) return it->second;
  return tokens_.size() + static_cast<std::size_t>(fnv1a(token) % hash_buckets_);
}

Encoder::Encoder(EncoderConfig config, TokenVocab vocab, std::size_t num_prompt_labels)
    : config_(config), vocab_(std::move(vocab)), num_prompt_labels_(num_prompt_labels) {
  mlp_ = Mlp::uniform("enc.mlp", input_width(), config_.hidden_dim, config_.output_dim,
                      config_.layers, config_.dropout);
}

std::size_t Encoder::input_width() const {
  // Window embeddings, parity, prompt slot (zero when prompts are off).
  return (2 * config_.window + 1) * config_.embed_dim + 1 + config_.embed_dim;
}

void Encoder::init(ModelParams& params, std::uint64_t seed) const {
  Tensor& embed = params.add(kEmbed, {vocab_.rows(), config_.embed_dim});
  Rng rng(Rng::derive(seed, kEmbed));
  for (double& v : embed.values()) v = rng.normal(0.0, kEmbedInitStddev);
  if (config_.use_prompt) {
    Tensor& prompt = params.add(kPrompt, {num_prompt_labels_, config_.embed_dim});
    Rng prompt_rng(Rng::derive(seed, kPrompt));
    for (double& v : prompt.values()) v = prompt_rng.normal(0.0, kEmbedInitStddev);
  }
  mlp_.init(params, seed);
}

std::vector<double> Encoder::prompt_summary(const ModelParams& params) const {
  if (!config_.use_prompt) throw std::logic_error("prompt summary with prompts disabled");
  if (num_prompt_labels_ == 0) throw std::invalid_argument("prompt summary over empty label vocabulary");
  const Tensor& prompt = params.value(kPrompt);
  std::vector<double> mean(config_.embed_dim, 0.0);
  for (std::size_t l = 0; l < num_prompt_labels_; ++l) {
    for (std::size_t d = 0; d < config_.embed_dim; ++d) mean[d] += prompt.at(l, d);
  }
  for (double& v : mean) v /= static_cast<double>(num_prompt_labels_);
  return mean;
}

Tensor Encoder::encode(const std::vector<std::string>& tokens, const ModelParams& params,
                       bool train, Rng* rng, Cache* cache) const {
  const std::size_t n = tokens.size();
  const std::size_t de = config_.embed_dim;
  const std::size_t w = config_.window;
  const Tensor& embed = params.value(kEmbed);

  std::vector<std::size_t> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = vocab_.row(tokens[i]);

  std::vector<double> prompt;
  if (config_.use_prompt) prompt = prompt_summary(params);

  Tensor input = Tensor::matrix(n, input_width());
  for (std::size_t i = 0; i < n; ++i) {
    double* dst = &input.at(i, 0);
    for (std::size_t slot = 0; slot < 2 * w + 1; ++slot) {
      const long j = static_cast<long>(i + slot) - static_cast<long>(w);
      if (j < 0 || j >= static_cast<long>(n)) continue;
      const auto src = embed.row(rows[j]);
      std::copy(src.begin(), src.end(), dst + slot * de);
    }
    dst[(2 * w + 1) * de] = static_cast<double>(i % 2);
    if (config_.use_prompt) std::copy(prompt.begin(), prompt.end(), dst + (2 * w + 1) * de + 1);
  }

  Mlp::Cache* mlp_cache = cache ? &cache->mlp : nullptr;
  Tensor out = mlp_.forward(params, input, train, rng, mlp_cache);
  if (cache) cache->rows = std::move(rows);
  return out;
}

void Encoder::backward(ModelParams& params, const Cache& cache, const Tensor& d_repr) const {
  const Tensor d_input = mlp_.backward(params, cache.mlp, d_repr);
  const std::size_t n = cache.rows.size();
  const std::size_t de = config_.embed_dim;
  const std::size_t w = config_.window;

  Tensor& d_embed = params.grad(kEmbed);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t slot = 0; slot < 2 * w + 1; ++slot) {
      const long j = static_cast<long>(i + slot) - static_cast<long>(w);
      if (j < 0 || j >= static_cast<long>(n)) continue;
      auto dst = d_embed.row(cache.rows[j]);
      for (std::size_t d = 0; d < de; ++d) dst[d] += d_input.at(i, slot * de + d);
    }
  }

  if (!config_.use_prompt) return;
  std::vector<double> d_summary(de, 0.0);
  const std::size_t offset = (2 * w + 1) * de + 1;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < de; ++d) d_summary[d] += d_input.at(i, offset + d);
  }
  Tensor& d_prompt = params.grad(kPrompt);
  const double share = 1.0 / static_cast<double>(num_prompt_labels_);
  for (std::size_t l = 0; l < num_prompt_labels_; ++l) {
    for (std::size_t d = 0; d < de; ++d) d_prompt.at(l, d) += d_summary[d] * share;
  }
}

}  // namespace nestex
