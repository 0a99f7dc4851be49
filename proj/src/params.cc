#include "nestex/params.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace nestex {

Tensor& ModelParams::add(const std::string& name, std::vector<std::size_t> shape) {
  if (contains(name)) throw std::invalid_argument("duplicate parameter: " + name);
  Parameter p;
  p.value = Tensor(shape);
  p.grad = Tensor(shape);
  p.first_moment = Tensor(shape);
  p.second_moment = Tensor(std::move(shape));
  return entries_.emplace(name, std::move(p)).first->second.value;
}

Parameter& ModelParams::entry(const std::string& name) {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw std::out_of_range("unknown parameter: " + name);
  return it->second;
}

const Parameter& ModelParams::entry(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw std::out_of_range("unknown parameter: " + name);
  return it->second;
}

Tensor& ModelParams::value(const std::string& name) { return entry(name).value; }
const Tensor& ModelParams::value(const std::string& name) const {
  return entry(name).value;
}
Tensor& ModelParams::grad(const std::string& name) { return entry(name).grad; }
const Tensor& ModelParams::grad(const std::string& name) const {
  return entry(name).grad;
}

void ModelParams::zero_grad() {
  for (auto& [name, p] : entries_) p.grad.fill(0.0);
}

double ModelParams::grad_norm() const {
  double sq = 0.0;
  for (const auto& [name, p] : entries_) {
    for (double g : p.grad.values()) sq += g * g;
  }
  return std::sqrt(sq);
}

bool ModelParams::all_finite() const {
  for (const auto& [name, p] : entries_) {
    if (!p.value.all_finite()) return false;
  }
  return true;
}

std::size_t ModelParams::num_values() const {
  std::size_t n = 0;
  for (const auto& [name, p] : entries_) n += p.value.size();
  return n;
}

void ModelParams::write_values(std::ostream& out) const {
  char buf[32];
  for (const auto& [name, p] : entries_) {
    out << "param " << name << ' ' << p.value.rank();
    for (std::size_t d : p.value.shape()) out << ' ' << d;
    out << '\n';
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", p.value[i]);
      if (i) out << ' ';
      out << buf;
    }
    out << '\n';
  }
}

void ModelParams::read_values(std::istream& in) {
  std::set<std::string> seen;
  std::string line;
  while (seen.size() < entries_.size() && std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream header(line);
    std::string tag, name;
    std::size_t rank = 0;
    header >> tag >> name >> rank;
    if (tag != "param" || !header) {
      throw std::runtime_error("checkpoint: expected parameter header, got '" +
                               line + "'");
    }
    std::vector<std::size_t> shape(rank);
    for (auto& d : shape) header >> d;
    auto it = entries_.find(name);
    if (it == entries_.end() || !seen.insert(name).second) {
      throw std::runtime_error("checkpoint: unexpected parameter " + name);
    }
    Tensor& value = it->second.value;
    if (shape != value.shape()) {
      throw std::runtime_error("checkpoint: shape mismatch for " + name +
                               ": file " + Tensor(shape).shape_string() +
                               ", model " + value.shape_string());
    }
    if (!std::getline(in, line)) {
      throw std::runtime_error("checkpoint: missing values for " + name);
    }
    std::istringstream values(line);
    for (std::size_t i = 0; i < value.size(); ++i) {
      std::string token;
      if (!(values >> token)) {
        throw std::runtime_error("checkpoint: too few values for " + name);
      }
      value[i] = std::strtod(token.c_str(), nullptr);
    }
  }
  if (seen.size() != entries_.size()) {
    throw std::runtime_error("checkpoint: expected " +
                             std::to_string(entries_.size()) +
                             " parameters, found " + std::to_string(seen.size()));
  }
}

}  // namespace nestex
