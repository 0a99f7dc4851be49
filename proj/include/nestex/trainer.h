#ifndef NESTEX_TRAINER_H_
#define NESTEX_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nestex/config.h"
#include "nestex/corpus.h"
#include "nestex/gradcheck.h"
#include "nestex/metrics.h"
#include "nestex/model.h"

namespace nestex {

// Non-finite loss or parameters during training.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EpochLog {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;  // summed over the epoch
  std::optional<Report> dev;
};

// "epoch<TAB>loss<TAB>TI ... PEC" with dev F1 values, or "-" without dev.
std::string format_epoch(const EpochLog& log);

struct TrainResult {
  EventModel model;
  std::vector<EpochLog> epochs;
  std::size_t best_epoch = 0;
};

// One Adam step per sentence, sentences shuffled every epoch. With a dev set
// the returned model holds the parameters of the epoch with the best sum of
// dev F1 scores; otherwise those of the last epoch.
TrainResult train(const std::vector<Sentence>& corpus, const std::vector<Sentence>& dev,
                  const LabelVocab& labels, const RunConfig& config,
                  const std::function<void(const EpochLog&)>& on_epoch = {});

// Summed joint loss over `sentences` for gradient checking. Dropout masks are
// redrawn from the same seed on every call, so the function is deterministic.
LossFn joint_loss_fn(EventModel& model, std::vector<Sentence> sentences, std::uint64_t seed);

// Predictions in input order. workers > 1 decodes on that many threads.
std::vector<Sentence> predict_all(const EventModel& model, const std::vector<Sentence>& input,
                                  std::size_t workers = 1);

}  // namespace nestex

#endif  // NESTEX_TRAINER_H_
