#include "nestex/config.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace nestex {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::size_t parse_size(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  unsigned long long out = 0;
  try {
    if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
    out = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) {
    throw ConfigError("config: " + key + " expects a non-negative integer, got '" + v + "'");
  }
  return static_cast<std::size_t>(out);
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) {
    throw ConfigError("config: " + key + " expects a number, got '" + v + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("config: " + key + " expects true/false, got '" + v + "'");
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "embed_dim") embed_dim = parse_size(key, v);
  else if (key == "window") window = parse_size(key, v);
  else if (key == "hidden_dim") hidden_dim = parse_size(key, v);
  else if (key == "repr_dim") repr_dim = parse_size(key, v);
  else if (key == "hash_buckets") hash_buckets = parse_size(key, v);
  else if (key == "fnn_layers") fnn_layers = parse_size(key, v);
  else if (key == "dropout") dropout = parse_double(key, v);
  else if (key == "lr") lr = parse_double(key, v);
  else if (key == "weight_decay") weight_decay = parse_double(key, v);
  else if (key == "max_grad_norm") max_grad_norm = parse_double(key, v);
  else if (key == "epochs") epochs = parse_size(key, v);
  else if (key == "beam_theta") beam_theta = parse_size(key, v);
  else if (key == "beta_t") beta_t = parse_size(key, v);
  else if (key == "beta_e") beta_e = parse_size(key, v);
  else if (key == "seed") seed = parse_size(key, v);
  else if (key == "use_prompt") use_prompt = parse_bool(key, v);
  else if (key == "ablate_per") ablate_per = parse_bool(key, v);
  else if (key == "entity_typed") entity_typed = parse_bool(key, v);
  else throw ConfigError("config: unknown key '" + key + "'");
}

void RunConfig::apply_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_number) +
                        ": expected key=value, got '" + line + "'");
    }
    set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  check();
}

void RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  apply_text(buffer.str());
}

void RunConfig::check() const {
  if (embed_dim == 0 || hidden_dim == 0 || repr_dim == 0) {
    throw ConfigError("config: dimensions must be positive");
  }
  if (hash_buckets == 0) throw ConfigError("config: hash_buckets must be positive");
  if (fnn_layers == 0) throw ConfigError("config: fnn_layers must be >= 1");
  if (dropout < 0.0 || dropout >= 1.0) throw ConfigError("config: dropout must be in [0, 1)");
  if (lr < 0.0 || weight_decay < 0.0 || max_grad_norm < 0.0) {
    throw ConfigError("config: lr, weight_decay and max_grad_norm must be >= 0");
  }
  if (beam_theta == 0 || beta_t == 0 || beta_e == 0) {
    throw ConfigError("config: beam_theta, beta_t and beta_e must be >= 1");
  }
}

std::map<std::string, std::string> RunConfig::to_map() const {
  std::map<std::string, std::string> m;
  std::istringstream in(to_text());
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    m[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return m;
}

std::string RunConfig::to_text() const {
  const std::vector<std::pair<std::string, std::string>> items = {
      {"embed_dim", std::to_string(embed_dim)},
      {"window", std::to_string(window)},
      {"hidden_dim", std::to_string(hidden_dim)},
      {"repr_dim", std::to_string(repr_dim)},
      {"hash_buckets", std::to_string(hash_buckets)},
      {"fnn_layers", std::to_string(fnn_layers)},
      {"dropout", format_double(dropout)},
      {"lr", format_double(lr)},
      {"weight_decay", format_double(weight_decay)},
      {"max_grad_norm", format_double(max_grad_norm)},
      {"epochs", std::to_string(epochs)},
      {"beam_theta", std::to_string(beam_theta)},
      {"beta_t", std::to_string(beta_t)},
      {"beta_e", std::to_string(beta_e)},
      {"seed", std::to_string(seed)},
      {"use_prompt", use_prompt ? "true" : "false"},
      {"ablate_per", ablate_per ? "true" : "false"},
      {"entity_typed", entity_typed ? "true" : "false"},
  };
  std::string out;
  for (const auto& [k, v] : items) out += k + "=" + v + "\n";
  return out;
}

}  // namespace nestex
