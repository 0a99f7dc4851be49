#include "nestex/cli.h"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>

#include "CLI11.hpp"
#include "nestex/checkpoint.h"
#include "nestex/config.h"
#include "nestex/corpus.h"
#include "nestex/gradcheck.h"
#include "nestex/metrics.h"
#include "nestex/synth.h"
#include "nestex/trainer.h"

namespace nestex {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

LabelVocab load_labels(const std::string& schema_path) {
  if (schema_path.empty()) return SchemaSpec::builtin().labels();
  return LabelVocab::load(schema_path);
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides,
                      RunConfig base = {}) {
  if (!path.empty()) base.load(path);
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    base.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  base.check();
  return base;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
}

// Writes to the file when a path is given, to `out` otherwise.
template <typename Fn>
void with_output(const std::string& path, std::ostream& out, Fn&& fn) {
  if (path.empty()) {
    fn(out);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  fn(f);
}

int run_synth(const GenConfig& config, const std::string& out_path,
              const std::string& schema_out, std::ostream& out) {
  const SchemaSpec schema = SchemaSpec::builtin();
  const auto corpus = generate(config, schema);
  with_output(out_path, out, [&](std::ostream& o) { write_jsonl(corpus, o); });
  if (!schema_out.empty()) write_text(schema_out, schema.to_json_text());
  return kExitOk;
}

int run_validate(const std::string& input, const std::string& schema_path, std::ostream& out,
                 std::ostream& err) {
  const LabelVocab labels = load_labels(schema_path);
  std::ifstream in(input);
  if (!in) throw UsageError("cannot open corpus file: " + input);
  std::string line;
  std::size_t line_number = 0, sentences = 0, errors = 0, warnings = 0;
  std::set<std::string> ids;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const Sentence s = parse_record(line, line_number, labels);
      ++sentences;
      if (!ids.insert(s.id).second) {
        throw ValidationError(s.id, "id", "duplicate sentence id");
      }
      for (const auto& w : validate(s, labels)) {
        ++warnings;
        err << "warning: line " << line_number << ": " << w << '\n';
      }
    } catch (const ParseError& e) {
      ++errors;
      err << "error: " << e.what() << '\n';
    } catch (const ValidationError& e) {
      ++errors;
      err << "error: line " << line_number << ": " << e.what() << '\n';
    }
  }
  if (errors > 0) {
    err << errors << " error(s) in " << input << '\n';
    return kExitValidation;
  }
  out << "ok: " << sentences << " sentences, " << warnings << " warning(s)\n";
  return kExitOk;
}

int run_train(const std::string& train_path, const std::string& dev_path,
              const std::string& schema_path, const RunConfig& config,
              const std::string& out_path, const std::string& log_path, std::ostream& out,
              std::ostream& err) {
  const LabelVocab labels = load_labels(schema_path);
  const auto corpus = parse_jsonl(train_path, labels);
  const auto dev = dev_path.empty() ? std::vector<Sentence>{} : parse_jsonl(dev_path, labels);

  std::ofstream log;
  if (!log_path.empty()) {
    log.open(log_path, std::ios::binary);
    if (!log) throw UsageError("cannot write " + log_path);
    log << "epoch\tloss\tTI\tTC\tAI\tAC\tPEI\tPEC\n";
  }
  const TrainResult result = train(corpus, dev, labels, config, [&](const EpochLog& e) {
    const std::string line = format_epoch(e);
    err << line << '\n';
    if (log) log << line << '\n';
  });
  save_checkpoint(result.model, out_path);
  out << "saved " << out_path << " (epoch " << result.best_epoch << " of "
      << result.epochs.size() << ")\n";
  return kExitOk;
}

int run_predict(const std::string& model_path, const std::string& input,
                const std::string& out_path, std::size_t workers, std::ostream& out) {
  const EventModel model = load_checkpoint(model_path);
  const auto corpus = parse_jsonl(input, model.labels());
  const auto predictions = predict_all(model, corpus, workers);
  with_output(out_path, out, [&](std::ostream& o) { write_jsonl(predictions, o); });
  return kExitOk;
}

int run_eval(const std::string& gold_path, const std::string& pred_path,
             const std::string& schema_path, bool as_json, std::ostream& out) {
  const LabelVocab labels = load_labels(schema_path);
  const auto gold = parse_jsonl(gold_path, labels);
  const auto pred = parse_jsonl(pred_path, labels);
  const Report report = evaluate(gold, pred);
  out << (as_json ? report.to_json() + "\n" : report.to_table());
  return kExitOk;
}

int run_gradcheck(const RunConfig& config, std::ostream& out) {
  const SchemaSpec schema = SchemaSpec::builtin();
  GenConfig gen;
  gen.count = 4;
  gen.seed = config.seed;
  gen.nested_fraction = 1.0;
  gen.distractor_fraction = 0.0;
  const auto sentences = generate(gen, schema);

  EventModel model(config, schema.labels(), TokenVocab::build(sentences, config.hash_buckets));
  jitter_values(model.params(), config.seed, 0.1);
  GradCheckOptions options;
  options.seed = config.seed;
  const GradCheckReport report =
      grad_check(joint_loss_fn(model, sentences, config.seed), model.params(), options);
  out << report.summary();
  return report.passed() ? kExitOk : kExitNumeric;
}

// Small model defaults for gradcheck; the config file and --set still apply.
RunConfig tiny_config() {
  RunConfig c;
  c.embed_dim = 6;
  c.hidden_dim = 8;
  c.repr_dim = 8;
  c.hash_buckets = 8;
  c.window = 1;
  return c;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nested event extraction: tagging, pair classification and graph decoding",
               "nestex"};
  app.require_subcommand(1);

  GenConfig gen;
  std::string synth_out, schema_out;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  synth->add_option("--n", gen.count, "Number of sentences")->capture_default_str();
  synth->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  synth->add_option("--nested-fraction", gen.nested_fraction)->capture_default_str();
  synth->add_option("--distractor-fraction", gen.distractor_fraction)->capture_default_str();
  synth->add_option("--max-depth", gen.max_depth, "Longest event chain")->capture_default_str();
  synth->add_option("--out", synth_out, "Corpus JSONL (default stdout)");
  synth->add_option("--schema-out", schema_out, "Write the schema sidecar JSON here");

  std::string input, schema_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a corpus against a schema");
  validate_cmd->add_option("--input", input, "Corpus JSONL")->required();
  validate_cmd->add_option("--schema", schema_path, "Label schema JSON (default: synthetic)");

  std::string train_path, dev_path, config_path, model_out, log_path;
  std::vector<std::string> overrides;
  auto* train_cmd = app.add_subcommand("train", "Train a model");
  train_cmd->add_option("--train", train_path, "Training corpus JSONL")->required();
  train_cmd->add_option("--dev", dev_path, "Development corpus JSONL");
  train_cmd->add_option("--schema", schema_path, "Label schema JSON (default: synthetic)");
  train_cmd->add_option("--config", config_path, "key=value config file");
  train_cmd->add_option("--set", overrides, "Config override key=value (repeatable)");
  train_cmd->add_option("--out", model_out, "Checkpoint path")->required();
  train_cmd->add_option("--log", log_path, "Per-epoch TSV log");

  std::string model_path, pred_out;
  std::size_t workers = 1;
  auto* predict_cmd = app.add_subcommand("predict", "Predict events with a trained model");
  predict_cmd->add_option("--model", model_path, "Checkpoint")->required();
  predict_cmd->add_option("--input", input, "Corpus JSONL")->required();
  predict_cmd->add_option("--out", pred_out, "Predictions JSONL (default stdout)");
  predict_cmd->add_option("--workers", workers, "Decoding threads")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  std::string gold_path, pred_path;
  bool as_json = false;
  auto* eval_cmd = app.add_subcommand("eval", "Score predictions against gold");
  eval_cmd->add_option("--gold", gold_path, "Gold JSONL")->required();
  eval_cmd->add_option("--pred", pred_path, "Predicted JSONL")->required();
  eval_cmd->add_option("--schema", schema_path, "Label schema JSON (default: synthetic)");
  eval_cmd->add_flag("--json", as_json, "Print a JSON report");

  auto* gradcheck_cmd = app.add_subcommand("gradcheck", "Finite-difference check of a tiny model");
  gradcheck_cmd->add_option("--config", config_path, "key=value config file");
  gradcheck_cmd->add_option("--set", overrides, "Config override key=value (repeatable)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (synth->parsed()) return run_synth(gen, synth_out, schema_out, out);
    if (validate_cmd->parsed()) return run_validate(input, schema_path, out, err);
    if (train_cmd->parsed()) {
      return run_train(train_path, dev_path, schema_path, load_config(config_path, overrides),
                       model_out, log_path, out, err);
    }
    if (predict_cmd->parsed()) return run_predict(model_path, input, pred_out, workers, out);
    if (eval_cmd->parsed()) return run_eval(gold_path, pred_path, schema_path, as_json, out);
    if (gradcheck_cmd->parsed()) {
      return run_gradcheck(load_config(config_path, overrides, tiny_config()), out);
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace nestex
