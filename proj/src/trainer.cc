#include "nestex/trainer.h"

#include <cmath>
#include <cstdio>
#include <exception>
#include <numeric>
#include <thread>

#include "nestex/optim.h"
#include "nestex/rng.h"

namespace nestex {

std::string format_epoch(const EpochLog& log) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%zu\t%.6f", log.epoch, log.train_loss);
  std::string line = buf;
  for (Metric m : kAllMetrics) {
    if (log.dev) {
      std::snprintf(buf, sizeof(buf), "\t%.4f", (*log.dev)[m].f1);
      line += buf;
    } else {
      line += "\t-";
    }
  }
  return line;
}

namespace {

double f1_sum(const Report& r) {
  double s = 0.0;
  for (Metric m : kAllMetrics) s += r[m].f1;
  return s;
}

}  // namespace

TrainResult train(const std::vector<Sentence>& corpus, const std::vector<Sentence>& dev,
                  const LabelVocab& labels, const RunConfig& config,
                  const std::function<void(const EpochLog&)>& on_epoch) {
  if (corpus.empty()) throw std::invalid_argument("train: empty training corpus");
  config.check();

  TrainResult result{EventModel(config, labels, TokenVocab::build(corpus, config.hash_buckets)),
                     {}, 0};
  EventModel& model = result.model;
  AdamOptions adam;
  adam.lr = config.lr;
  adam.weight_decay = config.weight_decay;
  adam.max_grad_norm = config.max_grad_norm;

  Rng shuffle_rng(Rng::derive(config.seed, "shuffle"));
  Rng dropout_rng(Rng::derive(config.seed, "dropout"));
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  std::optional<ModelParams> best;
  double best_score = -1.0;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double total = 0.0;
    for (std::size_t idx : order) {
      const double loss = model.joint_loss(corpus[idx], true, &dropout_rng, true).total();
      if (!std::isfinite(loss)) {
        throw NumericError("non-finite loss at epoch " + std::to_string(epoch) +
                           " on sentence '" + corpus[idx].id + "'");
      }
      total += loss;
      adam_step(model.params(), adam);
    }
    if (!model.params().all_finite()) {
      throw NumericError("non-finite parameter after epoch " + std::to_string(epoch));
    }

    EpochLog log{epoch, total, std::nullopt};
    if (!dev.empty()) {
      log.dev = evaluate(dev, predict_all(model, dev));
      const double score = f1_sum(*log.dev);
      if (score > best_score) {
        best_score = score;
        best = model.params();
        result.best_epoch = epoch;
      }
    } else {
      result.best_epoch = epoch;
    }
    if (on_epoch) on_epoch(log);
    result.epochs.push_back(std::move(log));
  }
  if (best) model.params() = std::move(*best);
  return result;
}

LossFn joint_loss_fn(EventModel& model, std::vector<Sentence> sentences, std::uint64_t seed) {
  return [&model, sentences = std::move(sentences), seed](ModelParams&, bool accumulate_grad) {
    Rng rng(seed);
    double total = 0.0;
    for (const auto& s : sentences) total += model.joint_loss(s, true, &rng, accumulate_grad).total();
    return total;
  };
}

std::vector<Sentence> predict_all(const EventModel& model, const std::vector<Sentence>& input,
                                  std::size_t workers) {
  std::vector<Sentence> out(input.size());
  workers = std::max<std::size_t>(1, std::min(workers, input.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < input.size(); ++i) out[i] = model.predict(input[i]);
    return out;
  }
  // Strided split; each thread writes disjoint slots of a presized vector.
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < input.size(); i += workers) out[i] = model.predict(input[i]);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace nestex
