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

#ifndef ADACS_EVAL_EXPERIMENT_H_
#define ADACS_EVAL_EXPERIMENT_H_

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "adacs/eval/metrics.h"
#include "adacs/model/normalizer.h"

namespace adacs::eval {

struct ExperimentConfig {
  model::BiasMode mode = model::BiasMode::kWords;
  int bank_size = 200;  // ignored in kNone
  uint64_t seed = 1;    // distractor sampling
};

struct MetricsReport {
  ExperimentConfig config;
  WerCounts counts;
  SpanCounts spans;  // predicted vs gold regions for the mode
  long examples = 0;
  long regions = 0;
  long truncated_regions = 0;
  double seconds = 0.0;  // inside normalization calls only
  int threads = 1;

  double wer() const { return counts.overall.rate(); }
  double n_wer() const { return counts.non_cs.rate(); }
  // 0 with no_cs_words() set when the test set has no CS words.
  double cs_wer() const { return counts.cs.rate(); }
  bool no_cs_words() const { return counts.cs.words == 0; }
  double examples_per_second() const { return seconds > 0.0 ? examples / seconds : 0.0; }

  // Everything but timing is a pure function of model, data and config.
  nlohmann::ordered_json to_json(bool include_timing = true) const;
};

// Normalizes every pair with a per-pair bias list: the pair's own items for
// the mode (phrases split into words in kWords), padded with distractors
// drawn from the items of `pool` (all of `test` if empty) to bank_size.
// kNone uses only the dummy entry. Throws std::invalid_argument if
// bank_size is below a pair's own item count. `hypotheses`, if set,
// receives one output line per pair.
template <typename T>
MetricsReport run_experiment(const model::AdacsModel<T>& model, const text::Vocabulary& vocab,
                             std::span<const data::SpokenReferencePair> test,
                             const ExperimentConfig& config,
                             std::span<const data::SpokenReferencePair> pool = {},
                             std::vector<std::string>* hypotheses = nullptr);

struct SweepRow {
  int size = 0;
  double cs_wer = 0.0;
  double n_wer = 0.0;
  double wer = 0.0;
  double examples_per_s = 0.0;
};

// One experiment per size with the same distractor seed. Throws
// std::invalid_argument unless sizes are strictly ascending.
template <typename T>
std::vector<SweepRow> bias_size_sweep(const model::AdacsModel<T>& model,
                                      const text::Vocabulary& vocab,
                                      std::span<const data::SpokenReferencePair> test,
                                      std::span<const int> sizes, model::BiasMode mode,
                                      uint64_t seed,
                                      std::span<const data::SpokenReferencePair> pool = {});

// Header `size,cs_wer,n_wer,wer,examples_per_s`, then one line per row.
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

}  // namespace adacs::eval

#endif  // ADACS_EVAL_EXPERIMENT_H_
