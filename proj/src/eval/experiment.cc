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

#include "adacs/eval/experiment.h"

#include <chrono>
#include <stdexcept>

namespace adacs::eval {

namespace {

constexpr uint64_t kDistractorStream = 20;

}  // namespace

nlohmann::ordered_json MetricsReport::to_json(bool include_timing) const {
  nlohmann::ordered_json j;
  j["bias_mode"] = model::bias_mode_name(config.mode);
  j["bank_size"] = config.mode == model::BiasMode::kNone ? 0 : config.bank_size;
  j["seed"] = config.seed;
  j["examples"] = examples;
  j["wer"] = wer();
  j["n_wer"] = n_wer();
  j["cs_wer"] = cs_wer();
  j["no_cs_words"] = no_cs_words();
  j["counts"] = {{"overall", counts.overall.to_json()},
                 {"cs", counts.cs.to_json()},
                 {"non_cs", counts.non_cs.to_json()}};
  j["spans"] = spans.to_json();
  j["regions"] = regions;
  j["truncated_regions"] = truncated_regions;
  if (include_timing) {
    j["speed"] = {{"seconds", seconds},
                  {"examples_per_s", examples_per_second()},
                  {"threads", threads}};
  }
  return j;
}

template <typename T>
MetricsReport run_experiment(const model::AdacsModel<T>& model, const text::Vocabulary& vocab,
                             std::span<const data::SpokenReferencePair> test,
                             const ExperimentConfig& config,
                             std::span<const data::SpokenReferencePair> pool,
                             std::vector<std::string>* hypotheses) {
  using Clock = std::chrono::steady_clock;
  if (pool.empty()) pool = test;
  std::vector<std::string> distractors;
  if (config.mode != model::BiasMode::kNone) {
    if (config.bank_size < 0) throw std::invalid_argument("run_experiment: negative bank size");
    auto phrases = data::distinct_phrases(pool);
    distractors = config.mode == model::BiasMode::kWords ? data::distinct_words(phrases) : phrases;
  }

  model::Normalizer<T> normalizer(model, vocab);
  MetricsReport report;
  report.config = config;
  if (hypotheses) hypotheses->clear();
  Clock::duration busy{};
  for (size_t i = 0; i < test.size(); ++i) {
    const auto& pair = test[i];
    std::vector<std::string> list;
    if (config.mode != model::BiasMode::kNone) {
      auto own = model::bias_items(std::span(&pair, 1), config.mode);
      if (static_cast<size_t>(config.bank_size) < own.size()) {
        throw std::invalid_argument("run_experiment: bank size " +
                                    std::to_string(config.bank_size) + " is below the " +
                                    std::to_string(own.size()) + " items of test pair " +
                                    std::to_string(i));
      }
      std::mt19937_64 rng(data::derive_seed(config.seed, kDistractorStream, i));
      list = data::sample_bias_list(own, distractors, config.bank_size, rng);
    }
    normalizer.set_bias_list(list);

    const auto start = Clock::now();
    auto result = normalizer.run(pair.spoken);
    busy += Clock::now() - start;

    report.counts += split_wer(pair, result.text);
    auto gold = model::make_example(pair, vocab, model::make_bank_index(list)).regions;
    report.spans += match_spans<model::Region>(result.regions, gold);
    report.regions += static_cast<long>(result.regions.size());
    for (bool t : result.truncated) report.truncated_regions += t;
    ++report.examples;
    if (hypotheses) hypotheses->push_back(std::move(result.text));
  }
  report.seconds = std::chrono::duration<double>(busy).count();
  return report;
}

template <typename T>
std::vector<SweepRow> bias_size_sweep(const model::AdacsModel<T>& model,
                                      const text::Vocabulary& vocab,
                                      std::span<const data::SpokenReferencePair> test,
                                      std::span<const int> sizes, model::BiasMode mode,
                                      uint64_t seed,
                                      std::span<const data::SpokenReferencePair> pool) {
  for (size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) {
      throw std::invalid_argument("bias_size_sweep: sizes must be strictly ascending");
    }
  }
  std::vector<SweepRow> rows;
  for (int size : sizes) {
    auto r = run_experiment(model, vocab, test, {mode, size, seed}, pool);
    rows.push_back({size, r.cs_wer(), r.n_wer(), r.wer(), r.examples_per_second()});
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "size,cs_wer,n_wer,wer,examples_per_s\n";
  for (const auto& r : rows) {
    out << r.size << ',' << r.cs_wer << ',' << r.n_wer << ',' << r.wer << ',' << r.examples_per_s
        << '\n';
  }
}

#define ADACS_INSTANTIATE_EVAL(T)                                                              \
  template MetricsReport run_experiment(const model::AdacsModel<T>&, const text::Vocabulary&,  \
                                        std::span<const data::SpokenReferencePair>,            \
                                        const ExperimentConfig&,                               \
                                        std::span<const data::SpokenReferencePair>,            \
                                        std::vector<std::string>*);                            \
  template std::vector<SweepRow> bias_size_sweep(                                              \
      const model::AdacsModel<T>&, const text::Vocabulary&,                                    \
      std::span<const data::SpokenReferencePair>, std::span<const int>, model::BiasMode,       \
      uint64_t, std::span<const data::SpokenReferencePair>);

ADACS_INSTANTIATE_EVAL(float)
ADACS_INSTANTIATE_EVAL(double)

}  // namespace adacs::eval
