#ifndef NESTEX_CHECKPOINT_H_
#define NESTEX_CHECKPOINT_H_

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "nestex/model.h"

namespace nestex {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Text format:
//   nestex-checkpoint 1
//   {"config":{...},"labels":{...},"tokens":[...],"hash_buckets":N}
//   param <name> <rank> <dims...>
//   <values>
//   ...
// Parameters appear in name order with values printed at full precision, so
// equal models serialize to identical bytes.
void save_checkpoint(const EventModel& model, std::ostream& out);
void save_checkpoint(const EventModel& model, const std::string& path);

// Rebuilds the model from the header and loads values; a parameter set that
// does not match the rebuilt model (names or shapes) is rejected.
EventModel load_checkpoint(std::istream& in);
EventModel load_checkpoint(const std::string& path);

}  // namespace nestex

#endif  // NESTEX_CHECKPOINT_H_
