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

#ifndef ADACS_MODEL_TRAIN_H_
#define ADACS_MODEL_TRAIN_H_

#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "adacs/data/synth.h"
#include "adacs/model/adacs.h"
#include "adacs/nn/optim.h"
#include "json.hpp"

namespace adacs::model {

// Four mean cross-entropies and their unweighted sum.
struct LossBreakdown {
  double tagger = 0.0;
  double enc_rank = 0.0;
  double dec_rank = 0.0;
  double gen = 0.0;
  double total = 0.0;

  double component_sum() const { return tagger + enc_rank + dec_rank + gen; }
  nlohmann::json to_json() const;
  bool operator==(const LossBreakdown&) const = default;
};

template <typename T>
struct LossGraph {
  LossBreakdown breakdown;
  nn::Var<T> total;
};

// Tagger and encoder ranking losses average over all tokens of the batch;
// decoder ranking and generation losses over all decoder steps (EOS
// included). Components with nothing to average are 0. Throws
// std::invalid_argument for examples with missing or inconsistent labels.
template <typename T>
LossGraph<T> compute_loss(nn::Graph<T>& g, const AdacsModel<T>& model,
                          std::span<const TrainingExample> batch, const bam::BiasBank<T>& bank);

// One forward/backward/update. Throws std::runtime_error if the loss is not
// finite. `grad_norm`, if set, receives the pre-clip gradient norm.
template <typename T>
LossBreakdown train_step(AdacsModel<T>& model, std::span<const TrainingExample> batch,
                         std::span<const bam::BiasEntry> bias_entries, nn::Adam<T>& optimizer,
                         double lr, double* grad_norm = nullptr);

struct TrainConfig {
  int epochs = 40;
  int batch_size = 16;
  int bank_size = 200;
  double lr = 1e-3;
  double min_lr_ratio = 0.05;  // cosine decay floor
  int warmup_steps = 200;
  double clip_norm = 1.0;
  double words_mode_prob = 0.5;  // else phrases
  double drop_prob = 0.1;        // per in-batch bias item
  double time_limit_s = 0.0;     // 0: no limit
  uint64_t seed = 1;

  nlohmann::json to_json() const;
  static TrainConfig from_json(const nlohmann::json& j);
};

struct EpochLog {
  int epoch = 0;
  int steps = 0;
  double seconds = 0.0;
  LossBreakdown mean;
};

// Mini-batch training with a freshly sampled bias list per step.
template <typename T>
class Trainer {
 public:
  // `phrase_pool` supplies distractors; words-mode distractors are its
  // distinct words.
  Trainer(AdacsModel<T>& model, const text::Vocabulary& vocab,
          std::span<const data::SpokenReferencePair> train, std::span<const std::string> phrase_pool,
          const TrainConfig& config);

  // Trains on the given pairs. Bias mode, dropped items and distractors
  // come from the trainer's generator.
  LossBreakdown step(std::span<const size_t> indices);

  // Runs all epochs (or until the time limit). Returns per-epoch logs.
  std::vector<EpochLog> fit(const std::function<void(const EpochLog&)>& on_epoch = {});

  double learning_rate(long step) const;
  long total_steps() const;
  const std::vector<LossBreakdown>& history() const { return history_; }
  double last_grad_norm() const { return last_grad_norm_; }

 private:
  AdacsModel<T>& model_;
  const text::Vocabulary& vocab_;
  std::span<const data::SpokenReferencePair> train_;
  std::vector<std::string> phrase_pool_;
  std::vector<std::string> word_pool_;
  TrainConfig config_;
  nn::Adam<T> optimizer_;
  std::mt19937_64 rng_;
  std::vector<LossBreakdown> history_;
  double last_grad_norm_ = 0.0;
};

}  // namespace adacs::model

#endif  // ADACS_MODEL_TRAIN_H_
