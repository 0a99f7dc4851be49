#ifndef NESTEX_PARAMS_H_
#define NESTEX_PARAMS_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "nestex/tensor.h"

namespace nestex {

// A learned tensor with its gradient and Adam moment estimates.
struct Parameter {
  Tensor value;
  Tensor grad;
  Tensor first_moment;
  Tensor second_moment;
};

// Named parameters, iterated in name order.
class ModelParams {
 public:
  // Registers a zero-initialized parameter; throws if the name is taken.
  Tensor& add(const std::string& name, std::vector<std::size_t> shape);

  bool contains(const std::string& name) const { return entries_.count(name) > 0; }
  Tensor& value(const std::string& name);
  const Tensor& value(const std::string& name) const;
  Tensor& grad(const std::string& name);
  const Tensor& grad(const std::string& name) const;

  std::map<std::string, Parameter>& entries() { return entries_; }
  const std::map<std::string, Parameter>& entries() const { return entries_; }

  void zero_grad();
  double grad_norm() const;
  bool all_finite() const;
  std::size_t num_values() const;

  std::int64_t step() const { return step_; }
  void set_step(std::int64_t step) { step_ = step; }

  // Values only, in name order: "param <name> <rank> <dims...>" followed by
  // one line of %.17g values.
  void write_values(std::ostream& out) const;
  // Reads a block written by write_values into parameters that must already
  // be registered with identical names and shapes.
  void read_values(std::istream& in);

 private:
  Parameter& entry(const std::string& name);
  const Parameter& entry(const std::string& name) const;

  std::map<std::string, Parameter> entries_;
  std::int64_t step_ = 0;
};

}  // namespace nestex

#endif  // NESTEX_PARAMS_H_
