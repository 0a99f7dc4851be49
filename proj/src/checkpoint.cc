#include "nestex/checkpoint.h"

#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"

namespace nestex {

namespace {

constexpr const char* kMagic = "nestex-checkpoint 1";

}  // namespace

void save_checkpoint(const EventModel& model, std::ostream& out) {
  const TokenVocab& vocab = model.encoder().vocab();
  nlohmann::ordered_json header;
  nlohmann::ordered_json config;
  for (const auto& [key, value] : model.config().to_map()) config[key] = value;
  header["config"] = config;
  header["labels"] = nlohmann::ordered_json::parse(model.labels().to_json_text());
  header["tokens"] = vocab.tokens();
  header["hash_buckets"] = vocab.hash_buckets();
  out << kMagic << '\n' << header.dump() << '\n';
  model.params().write_values(out);
}

void save_checkpoint(const EventModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError("cannot write checkpoint " + path);
  save_checkpoint(model, out);
  if (!out) throw CheckpointError("failed writing checkpoint " + path);
}

EventModel load_checkpoint(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kMagic) {
    throw CheckpointError("not a nestex checkpoint (bad first line)");
  }
  if (!std::getline(in, line)) throw CheckpointError("checkpoint: missing header");

  RunConfig config;
  LabelVocab labels;
  TokenVocab tokens;
  try {
    const auto header = nlohmann::json::parse(line);
    for (const auto& [key, value] : header.at("config").items()) {
      config.set(key, value.get<std::string>());
    }
    config.check();
    labels = LabelVocab::from_json_text(header.at("labels").dump());
    tokens = TokenVocab(header.at("tokens").get<std::vector<std::string>>(),
                        header.at("hash_buckets").get<std::size_t>());
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(std::string("checkpoint: malformed header: ") + e.what());
  }

  EventModel model(config, labels, tokens);
  try {
    model.params().read_values(in);
  } catch (const std::runtime_error& e) {
    throw CheckpointError(e.what());
  }
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) {
      throw CheckpointError("checkpoint: unexpected trailing content '" + line.substr(0, 40) + "'");
    }
  }
  return model;
}

EventModel load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + path);
  return load_checkpoint(in);
}

}  // namespace nestex
