#include <cmath>

#include "doctest.h"
#include "nestex/encoder.h"
#include "nestex/gradcheck.h"

using namespace nestex;

namespace {

EncoderConfig small(bool use_prompt) {
  EncoderConfig c;
  c.embed_dim = 5;
  c.window = 1;
  c.hidden_dim = 7;
  c.output_dim = 8;
  c.dropout = 0.0;
  c.use_prompt = use_prompt;
  return c;
}

TokenVocab vocab() { return TokenVocab({"he", "wants", "to", "pay"}, 4); }

const std::vector<std::string> kTokens = {"he", "wants", "to", "pay", "now"};

bool differs(const Tensor& a, const Tensor& b, std::size_t row) {
  for (std::size_t c = 0; c < a.cols(); ++c) {
    if (a.at(row, c) != b.at(row, c)) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("output shape") {
  const Encoder enc(small(true), vocab(), 3);
  ModelParams params;
  enc.init(params, 1);
  CHECK(enc.encode({"he", "wants", "to"}, params, false, nullptr).shape() ==
        std::vector<std::size_t>{3, 8});
}

TEST_CASE("prompts off equals prompts on with zero prompt embeddings") {
  const Encoder on(small(true), vocab(), 3), off(small(false), vocab(), 3);
  ModelParams p_on, p_off;
  on.init(p_on, 7);
  off.init(p_off, 7);
  CHECK_FALSE(p_off.contains("enc.prompt"));
  p_on.value("enc.prompt").fill(0.0);
  CHECK(on.encode(kTokens, p_on, false, nullptr) == off.encode(kTokens, p_off, false, nullptr));
}

TEST_CASE("with prompts disabled the output ignores prompt parameters") {
  const Encoder off(small(false), vocab(), 3);
  ModelParams params;
  off.init(params, 7);
  const Tensor before = off.encode(kTokens, params, false, nullptr);
  params.add("enc.prompt", {3, 5}).fill(9.0);
  CHECK(off.encode(kTokens, params, false, nullptr) == before);
  CHECK_THROWS(off.prompt_summary(params));
}

TEST_CASE("one label's prompt embedding reaches every position") {
  const Encoder enc(small(true), vocab(), 3);
  ModelParams params;
  enc.init(params, 2);
  jitter_values(params, 4, 0.1);
  const Tensor base = enc.encode(kTokens, params, false, nullptr);
  params.value("enc.prompt").at(1, 2) += 1e-3;
  const Tensor moved = enc.encode(kTokens, params, false, nullptr);
  for (std::size_t i = 0; i < kTokens.size(); ++i) CHECK(differs(base, moved, i));

  // Finite-difference sensitivity agrees with the backward pass.
  params.value("enc.prompt").at(1, 2) -= 1e-3;
  LossFn loss = [&](ModelParams& p, bool acc) {
    Encoder::Cache cache;
    const Tensor h = enc.encode(kTokens, p, false, nullptr, &cache);
    double l = 0.0;
    Tensor d = Tensor::matrix(h.rows(), h.cols());
    for (std::size_t i = 0; i < h.size(); ++i) {
      l += std::sin(static_cast<double>(i)) * h[i];
      d[i] = std::sin(static_cast<double>(i));
    }
    if (acc) enc.backward(p, cache, d);
    return l;
  };
  GradCheckOptions options;
  options.samples_per_param = 0;
  options.tol = 1e-6;
  options.denominator_floor = 1e-4;
  const GradCheckReport report = grad_check(loss, params, options);
  INFO(report.summary());
  CHECK(report.passed());
  CHECK(report.checked("enc.prompt") == 15);
}

TEST_CASE("prompt summary") {
  ModelParams params;
  const Encoder enc(small(true), vocab(), 3);
  enc.init(params, 3);
  Tensor& prompt = params.value("enc.prompt");
  const auto summary = enc.prompt_summary(params);
  for (std::size_t d = 0; d < 5; ++d) {
    const double mean = (prompt.at(0, d) + prompt.at(1, d) + prompt.at(2, d)) / 3.0;
    CHECK(summary[d] == doctest::Approx(mean).epsilon(1e-14));
  }
  prompt.fill(0.0);
  for (double v : enc.prompt_summary(params)) CHECK(v == 0.0);

  const Encoder single(small(true), vocab(), 1);
  ModelParams one;
  single.init(one, 3);
  const auto row = one.value("enc.prompt").row(0);
  CHECK(single.prompt_summary(one) == std::vector<double>(row.begin(), row.end()));

  const Encoder empty(small(true), vocab(), 0);
  ModelParams none;
  empty.init(none, 3);
  CHECK_THROWS(empty.prompt_summary(none));
}

TEST_CASE("unknown tokens hash to stable buckets") {
  const TokenVocab v = vocab();
  CHECK(v.row("he") == 0);
  CHECK(v.row("pay") == 3);
  const std::size_t r = v.row("zanzibar");
  CHECK(r >= 4);
  CHECK(r < v.rows());
  CHECK(TokenVocab({"he", "wants", "to", "pay"}, 4).row("zanzibar") == r);
  CHECK_THROWS(TokenVocab({"a", "a"}, 1));
  CHECK_THROWS(TokenVocab({"a"}, 0));
}

TEST_CASE("vocabulary ranks by frequency, ties in byte order") {
  Sentence a, b;
  a.tokens = {"b", "a", "c", "c"};
  b.tokens = {"a", "d"};
  const TokenVocab v = TokenVocab::build({a, b}, 2);
  CHECK(v.tokens() == std::vector<std::string>{"a", "c", "b", "d"});
}

TEST_CASE("shuffling tokens changes the output") {
  const Encoder enc(small(true), vocab(), 3);
  ModelParams params;
  enc.init(params, 5);
  const Tensor h = enc.encode(kTokens, params, false, nullptr);
  const Tensor swapped = enc.encode({"wants", "he", "to", "pay", "now"}, params, false, nullptr);
  CHECK(differs(h, swapped, 0));
  CHECK(differs(h, swapped, 1));
  // Outside the window of both swapped positions nothing moves.
  CHECK_FALSE(differs(h, swapped, 3));
}
