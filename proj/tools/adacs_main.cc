// Copyright 2026 The AdaCS-Norm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// adacs: data generation, training, evaluation and inference.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error. Reports go to
// stdout (or --out) as JSON; progress and summaries go to stderr.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "adacs/eval/experiment.h"
#include "adacs/model/normalizer.h"
#include "adacs/model/train.h"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr int kUsageError = 2;
constexpr int kRuntimeError = 1;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

// Optional JSON config with sections "data", "model", "train".
json load_config(const std::string& path) { return path.empty() ? json::object() : read_json_file(path); }

void emit(const ordered_json& report, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << report.dump(2) << '\n';
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << report.dump(2) << '\n';
}

adacs::model::BiasMode mode_from_flag(const std::string& s) {
  return adacs::model::parse_bias_mode(s);
}

// --- gen-data ---------------------------------------------------------------

struct GenDataArgs {
  std::string config;
  std::string out_dir = "data";
  std::optional<uint64_t> seed;
};

int run_gen_data(const GenDataArgs& a) {
  auto config = load_config(a.config);
  auto split_config = adacs::data::SplitConfig::from_json(config.value("data", json::object()));
  const uint64_t seed = a.seed.value_or(config.value("seed", uint64_t{1}));
  auto splits = adacs::data::build_splits(split_config, seed);

  fs::create_directories(a.out_dir);
  auto path = [&](const char* name) { return (fs::path(a.out_dir) / name).string(); };
  adacs::data::write_jsonl(path("train.jsonl"), splits.train);
  adacs::data::write_jsonl(path("test_general.jsonl"), splits.test_general);
  adacs::data::write_jsonl(path("test_medical.jsonl"), splits.test_medical);
  {
    std::ofstream lex(path("lexicon.json"));
    lex << splits.lexicon.to_json().dump(1) << '\n';
  }

  std::vector<adacs::data::SpokenReferencePair> tests = splits.test_general;
  tests.insert(tests.end(), splits.test_medical.begin(), splits.test_medical.end());
  ordered_json report = {
      {"seed", seed},
      {"config", split_config.to_json()},
      {"train_pairs", splits.train.size()},
      {"test_general_pairs", splits.test_general.size()},
      {"test_medical_pairs", splits.test_medical.size()},
      {"cs_word_fraction", adacs::data::cs_token_fraction(splits.train)},
      {"unseen_phrase_rate", adacs::data::unseen_phrase_rate(tests, splits.train)}};
  std::cerr << "wrote " << splits.train.size() << " train and " << tests.size()
            << " test pairs to " << a.out_dir << '\n';
  std::cout << report.dump(2) << '\n';
  return 0;
}

// --- train ------------------------------------------------------------------

struct TrainArgs {
  std::string config;
  std::string train_path = "data/train.jsonl";
  std::string ckpt = "model.ckpt";
  std::string out;
  std::optional<uint64_t> seed;
  std::optional<double> time_limit;
  std::optional<int> epochs;
};

int run_train(const TrainArgs& a) {
  auto config = load_config(a.config);
  auto model_config = adacs::model::ModelConfig::from_json(config.value("model", json::object()));
  auto train_config = adacs::model::TrainConfig::from_json(config.value("train", json::object()));
  if (a.seed) model_config.seed = train_config.seed = *a.seed;
  if (a.time_limit) train_config.time_limit_s = *a.time_limit;
  if (a.epochs) train_config.epochs = *a.epochs;

  auto train = adacs::data::read_jsonl(a.train_path);
  if (train.empty()) throw std::runtime_error(a.train_path + " has no pairs");
  auto vocab = adacs::data::build_vocabulary(train);
  model_config.vocab_size = vocab.size();
  auto pool = adacs::data::distinct_phrases(train);

  adacs::model::AdacsModel<float> model(model_config);
  adacs::model::Trainer<float> trainer(model, vocab, train, pool, train_config);
  std::cerr << "training " << model.parameters().count() << " parameters on "
            << train.size() << " pairs, " << trainer.total_steps() << " steps\n";
  ordered_json epochs = ordered_json::array();
  const auto start = std::chrono::steady_clock::now();
  trainer.fit([&](const adacs::model::EpochLog& log) {
    std::fprintf(stderr, "epoch %3d  %6.1fs  loss %.4f (tag %.4f enc %.4f dec %.4f gen %.4f)\n",
                 log.epoch, log.seconds, log.mean.total, log.mean.tagger, log.mean.enc_rank,
                 log.mean.dec_rank, log.mean.gen);
    epochs.push_back({{"epoch", log.epoch},
                      {"steps", log.steps},
                      {"seconds", log.seconds},
                      {"loss", log.mean.to_json()}});
  });

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json extra = {{"train", train_config.to_json()},
                {"train_pairs", train.size()},
                {"train_seconds", seconds}};
  adacs::model::save_model(a.ckpt, model, vocab, extra);
  ordered_json report = {{"checkpoint", a.ckpt},
                         {"model", model_config.to_json()},
                         {"train", train_config.to_json()},
                         {"steps", trainer.history().size()},
                         {"seconds", seconds},
                         {"epochs", epochs}};
  emit(report, a.out);
  return 0;
}

// --- eval / sweep -----------------------------------------------------------

struct EvalArgs {
  std::string ckpt = "model.ckpt";
  std::string test_path = "data/test_general.jsonl";
  std::string pool_path;
  std::string mode = "words";
  std::string difficulty;
  std::string predictions;
  std::string out;
  int bank_size = 200;
  uint64_t seed = 1;
};

std::vector<adacs::data::SpokenReferencePair> filter_difficulty(
    std::vector<adacs::data::SpokenReferencePair> pairs, const std::string& difficulty) {
  if (difficulty.empty()) return pairs;
  auto d = adacs::data::parse_difficulty(difficulty);
  std::erase_if(pairs, [&](const auto& p) { return p.difficulty != d; });
  return pairs;
}

int run_eval(const EvalArgs& a) {
  auto loaded = adacs::model::load_model<float>(a.ckpt);
  auto all = adacs::data::read_jsonl(a.test_path);
  auto pool = a.pool_path.empty() ? all : adacs::data::read_jsonl(a.pool_path);
  auto test = filter_difficulty(all, a.difficulty);
  adacs::eval::ExperimentConfig cfg{mode_from_flag(a.mode), a.bank_size, a.seed};
  std::vector<std::string> hyps;
  auto report = adacs::eval::run_experiment(*loaded.model, loaded.vocab, test, cfg, pool, &hyps);
  if (!a.predictions.empty()) {
    std::ofstream out(a.predictions);
    if (!out) throw std::runtime_error("cannot write " + a.predictions);
    for (const auto& h : hyps) out << h << '\n';
  }
  auto j = report.to_json();
  j["checkpoint"] = a.ckpt;
  j["test"] = a.test_path;
  if (!a.difficulty.empty()) j["difficulty"] = a.difficulty;
  std::fprintf(stderr, "%s bias, %ld pairs: WER %.4f  N-WER %.4f  CS-WER %.4f  span F1 %.4f  %.1f ex/s\n",
               a.mode.c_str(), report.examples, report.wer(), report.n_wer(), report.cs_wer(),
               report.spans.f1(), report.examples_per_second());
  emit(j, a.out);
  return 0;
}

struct SweepArgs {
  EvalArgs eval;
  std::string sizes = "10,100,500";
};

int run_sweep(const SweepArgs& a) {
  std::vector<int> sizes;
  std::stringstream ss(a.sizes);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      sizes.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad size '" + item + "' in --sizes");
    }
  }
  auto loaded = adacs::model::load_model<float>(a.eval.ckpt);
  auto all = adacs::data::read_jsonl(a.eval.test_path);
  auto pool = a.eval.pool_path.empty() ? all : adacs::data::read_jsonl(a.eval.pool_path);
  auto test = filter_difficulty(all, a.eval.difficulty);
  auto rows = adacs::eval::bias_size_sweep(*loaded.model, loaded.vocab, test, sizes,
                                           mode_from_flag(a.eval.mode), a.eval.seed, pool);
  for (const auto& r : rows) {
    std::fprintf(stderr, "size %5d: CS-WER %.4f  N-WER %.4f  WER %.4f  %.1f ex/s\n", r.size,
                 r.cs_wer, r.n_wer, r.wer, r.examples_per_s);
  }
  if (a.eval.out.empty()) {
    adacs::eval::write_sweep_csv(std::cout, rows);
  } else {
    std::ofstream out(a.eval.out);
    if (!out) throw std::runtime_error("cannot write " + a.eval.out);
    adacs::eval::write_sweep_csv(out, rows);
  }
  return 0;
}

// --- normalize --------------------------------------------------------------

struct NormalizeArgs {
  std::string ckpt = "model.ckpt";
  std::string bias;
  std::string input;
};

int run_normalize(const NormalizeArgs& a) {
  auto loaded = adacs::model::load_model<float>(a.ckpt);
  std::vector<std::string> entries;
  if (!a.bias.empty()) {
    auto j = read_json_file(a.bias);
    if (!j.is_array()) throw std::runtime_error(a.bias + ": expected a JSON array of strings");
    entries = j.get<std::vector<std::string>>();
  }
  adacs::model::Normalizer<float> normalizer(*loaded.model, loaded.vocab);
  normalizer.set_bias_list(entries);

  std::ifstream file;
  if (!a.input.empty()) {
    file.open(a.input);
    if (!file) throw std::runtime_error("cannot open " + a.input);
  }
  std::istream& in = a.input.empty() ? std::cin : file;
  for (std::string line; std::getline(in, line);) std::cout << normalizer.normalize(line) << '\n';
  return 0;
}

void add_eval_flags(CLI::App* cmd, EvalArgs& a) {
  cmd->add_option("--ckpt", a.ckpt, "Model checkpoint")->capture_default_str();
  cmd->add_option("--test", a.test_path, "Test pairs (JSONL)")->capture_default_str();
  cmd->add_option("--pool", a.pool_path, "Pairs supplying distractors (default: --test)");
  cmd->add_option("--mode", a.mode, "Bias mode")
      ->check(CLI::IsMember({"none", "words", "phrases"}))
      ->capture_default_str();
  cmd->add_option("--difficulty", a.difficulty, "Only evaluate easy or hard pairs")
      ->check(CLI::IsMember({"easy", "hard"}));
  cmd->add_option("--seed", a.seed, "Distractor seed")->capture_default_str();
  cmd->add_option("--out", a.out, "Write the report here instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Code-switching text normalization with runtime bias lists"};
  app.require_subcommand(1);

  GenDataArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "Generate the synthetic lexicon and splits");
  gen_cmd->add_option("--config", gen.config, "JSON config (section \"data\")");
  gen_cmd->add_option("--seed", gen.seed, "Base seed");
  gen_cmd->add_option("--out-dir", gen.out_dir, "Output directory")->capture_default_str();

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train a model");
  train_cmd->add_option("--config", train.config, "JSON config (sections \"model\", \"train\")");
  train_cmd->add_option("--train", train.train_path, "Training pairs (JSONL)")->capture_default_str();
  train_cmd->add_option("--ckpt", train.ckpt, "Checkpoint to write")->capture_default_str();
  train_cmd->add_option("--seed", train.seed, "Seed for initialization and sampling");
  train_cmd->add_option("--epochs", train.epochs, "Override the epoch count");
  train_cmd->add_option("--time-limit", train.time_limit, "Stop after this many seconds");
  train_cmd->add_option("--out", train.out, "Write the report here instead of stdout");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Score a checkpoint on a test set");
  add_eval_flags(eval_cmd, eval);
  eval_cmd->add_option("--bank-size", eval.bank_size, "Bias list size per sentence")
      ->capture_default_str();
  eval_cmd->add_option("--predictions", eval.predictions, "Write one output line per pair");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Score a checkpoint across bias list sizes (CSV)");
  add_eval_flags(sweep_cmd, sweep.eval);
  sweep_cmd->add_option("--sizes", sweep.sizes, "Ascending comma-separated sizes")
      ->capture_default_str();

  NormalizeArgs norm;
  auto* norm_cmd = app.add_subcommand("normalize", "Normalize lines from stdin or a file");
  norm_cmd->add_option("--ckpt", norm.ckpt, "Model checkpoint")->capture_default_str();
  norm_cmd->add_option("--bias", norm.bias, "Bias list (JSON array of strings)");
  norm_cmd->add_option("--input", norm.input, "Input file (default: stdin)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*gen_cmd) return run_gen_data(gen);
    if (*train_cmd) return run_train(train);
    if (*eval_cmd) return run_eval(eval);
    if (*sweep_cmd) return run_sweep(sweep);
    if (*norm_cmd) return run_normalize(norm);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsageError;
}
