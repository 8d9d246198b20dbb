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

#include "adacs/model/train.h"

#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace adacs::model {

nlohmann::json LossBreakdown::to_json() const {
  return {{"tagger", tagger},
          {"enc_rank", enc_rank},
          {"dec_rank", dec_rank},
          {"gen", gen},
          {"total", total}};
}

template <typename T>
LossGraph<T> compute_loss(nn::Graph<T>& g, const AdacsModel<T>& model,
                          std::span<const TrainingExample> batch, const bam::BiasBank<T>& bank) {
  if (batch.empty()) throw std::invalid_argument("compute_loss: empty batch");
  std::vector<int> ids, tags, enc_rank;
  std::vector<nn::Range> segments;
  std::vector<int> memory_rows, dec_inputs, dec_targets, dec_labels;
  std::vector<nn::Range> memory_segments, dec_segments;
  for (const auto& ex : batch) {
    const int n = static_cast<int>(ex.tokens.size());
    if (n == 0) throw std::invalid_argument("compute_loss: empty example");
    if (static_cast<int>(ex.tags.size()) != n || static_cast<int>(ex.enc_rank.size()) != n) {
      throw std::invalid_argument("compute_loss: tag and bias-rank labels must cover every token");
    }
    const int offset = static_cast<int>(ids.size());
    segments.push_back({offset, n});
    ids.insert(ids.end(), ex.tokens.begin(), ex.tokens.end());
    tags.insert(tags.end(), ex.tags.begin(), ex.tags.end());
    enc_rank.insert(enc_rank.end(), ex.enc_rank.begin(), ex.enc_rank.end());
    for (const auto& r : ex.regions) {
      if (r.start < 0 || r.end < r.start || r.end >= n) {
        throw std::invalid_argument("compute_loss: region outside its sentence");
      }
      if (r.target_ids.empty()) throw std::invalid_argument("compute_loss: region without target");
      memory_segments.push_back({static_cast<int>(memory_rows.size()), r.length()});
      for (int t = r.start; t <= r.end; ++t) memory_rows.push_back(offset + t);
      const int steps = static_cast<int>(r.target_ids.size()) + 1;
      dec_segments.push_back({static_cast<int>(dec_inputs.size()), steps});
      dec_inputs.push_back(text::kBos);
      dec_inputs.insert(dec_inputs.end(), r.target_ids.begin(), r.target_ids.end());
      dec_targets.insert(dec_targets.end(), r.target_ids.begin(), r.target_ids.end());
      dec_targets.push_back(text::kEos);
      dec_labels.insert(dec_labels.end(), steps, r.bias_label);
    }
  }

  auto states = model.encode(g, ids, segments);
  auto tagged = model.tag(g, states, bank, std::span<const int>(enc_rank));
  nn::Var<T> l_tagger = nn::cross_entropy(tagged.logits, tags);
  nn::Var<T> l_enc = nn::cross_entropy(tagged.bias.scores, enc_rank);
  nn::Var<T> l_dec, l_gen;
  if (dec_segments.empty()) {
    l_dec = g.constant(nn::Tensor<T>(1, 1));
    l_gen = g.constant(nn::Tensor<T>(1, 1));
  } else {
    auto memory = nn::gather_rows(states, memory_rows);
    auto decoded = model.decode_teacher(g, memory, memory_segments, dec_inputs, dec_segments, bank,
                                        std::span<const int>(dec_labels));
    l_dec = nn::cross_entropy(decoded.bias.scores, dec_labels);
    l_gen = nn::cross_entropy(decoded.logits, dec_targets);
  }
  std::vector<nn::Var<T>> parts = {l_tagger, l_enc, l_dec, l_gen};
  static constexpr double kWeights[] = {1.0, 1.0, 1.0, 1.0};
  LossGraph<T> out;
  out.total = nn::weighted_sum<T>(parts, kWeights);
  out.breakdown = {static_cast<double>(l_tagger.value()[0]), static_cast<double>(l_enc.value()[0]),
                   static_cast<double>(l_dec.value()[0]), static_cast<double>(l_gen.value()[0]),
                   static_cast<double>(out.total.value()[0])};
  return out;
}

template <typename T>
LossBreakdown train_step(AdacsModel<T>& model, std::span<const TrainingExample> batch,
                         std::span<const bam::BiasEntry> bias_entries, nn::Adam<T>& optimizer,
                         double lr, double* grad_norm) {
  LossBreakdown breakdown;
  {
    nn::Graph<T> g(true);
    auto bank = model.encode_bank(g, bias_entries);
    auto loss = compute_loss(g, model, batch, bank);
    breakdown = loss.breakdown;
    if (!std::isfinite(breakdown.total)) {
      throw std::runtime_error("training diverged: loss " + breakdown.to_json().dump());
    }
    g.backward(loss.total);
  }
  double norm = optimizer.step(model.parameters(), lr);
  if (grad_norm) *grad_norm = norm;
  return breakdown;
}

nlohmann::json TrainConfig::to_json() const {
  return {{"epochs", epochs},
          {"batch_size", batch_size},
          {"bank_size", bank_size},
          {"lr", lr},
          {"min_lr_ratio", min_lr_ratio},
          {"warmup_steps", warmup_steps},
          {"clip_norm", clip_norm},
          {"words_mode_prob", words_mode_prob},
          {"drop_prob", drop_prob},
          {"time_limit_s", time_limit_s},
          {"seed", seed}};
}

TrainConfig TrainConfig::from_json(const nlohmann::json& j) {
  TrainConfig c;
  c.epochs = j.value("epochs", c.epochs);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.bank_size = j.value("bank_size", c.bank_size);
  c.lr = j.value("lr", c.lr);
  c.min_lr_ratio = j.value("min_lr_ratio", c.min_lr_ratio);
  c.warmup_steps = j.value("warmup_steps", c.warmup_steps);
  c.clip_norm = j.value("clip_norm", c.clip_norm);
  c.words_mode_prob = j.value("words_mode_prob", c.words_mode_prob);
  c.drop_prob = j.value("drop_prob", c.drop_prob);
  c.time_limit_s = j.value("time_limit_s", c.time_limit_s);
  c.seed = j.value("seed", c.seed);
  return c;
}

template <typename T>
Trainer<T>::Trainer(AdacsModel<T>& model, const text::Vocabulary& vocab,
                    std::span<const data::SpokenReferencePair> train,
                    std::span<const std::string> phrase_pool, const TrainConfig& config)
    : model_(model),
      vocab_(vocab),
      train_(train),
      phrase_pool_(phrase_pool.begin(), phrase_pool.end()),
      word_pool_(data::distinct_words(phrase_pool)),
      config_(config),
      optimizer_(nn::AdamOptions{.lr = config.lr, .clip_norm = config.clip_norm}),
      rng_(config.seed) {
  if (config_.batch_size < 1) throw std::invalid_argument("trainer: batch_size must be >= 1");
  if (train_.empty()) throw std::invalid_argument("trainer: no training pairs");
}

template <typename T>
long Trainer<T>::total_steps() const {
  long per_epoch = (static_cast<long>(train_.size()) + config_.batch_size - 1) / config_.batch_size;
  return per_epoch * config_.epochs;
}

template <typename T>
double Trainer<T>::learning_rate(long step) const {
  if (config_.warmup_steps > 0 && step < config_.warmup_steps) {
    return config_.lr * static_cast<double>(step + 1) / config_.warmup_steps;
  }
  long span = std::max(1L, total_steps() - config_.warmup_steps);
  double progress = std::min(1.0, static_cast<double>(step - config_.warmup_steps) / span);
  double floor = config_.min_lr_ratio;
  return config_.lr * (floor + (1.0 - floor) * 0.5 * (1.0 + std::cos(M_PI * progress)));
}

template <typename T>
LossBreakdown Trainer<T>::step(std::span<const size_t> indices) {
  std::vector<data::SpokenReferencePair> pairs;
  pairs.reserve(indices.size());
  for (size_t i : indices) pairs.push_back(train_[i]);

  std::uniform_real_distribution<double> u(0.0, 1.0);
  const BiasMode mode = u(rng_) < config_.words_mode_prob ? BiasMode::kWords : BiasMode::kPhrases;
  std::vector<std::string> kept;
  for (auto& item : bias_items(pairs, mode))
    if (u(rng_) >= config_.drop_prob) kept.push_back(std::move(item));
  const auto& pool = mode == BiasMode::kWords ? word_pool_ : phrase_pool_;
  auto list = data::sample_bias_list(kept, pool, config_.bank_size, rng_, true);
  auto index = make_bank_index(list);
  std::vector<TrainingExample> examples;
  examples.reserve(pairs.size());
  for (const auto& p : pairs) examples.push_back(make_example(p, vocab_, index));
  auto entries = bam::make_entries(list, vocab_);

  double lr = learning_rate(optimizer_.steps());
  auto breakdown = train_step(model_, examples, entries, optimizer_, lr, &last_grad_norm_);
  history_.push_back(breakdown);
  return breakdown;
}

template <typename T>
std::vector<EpochLog> Trainer<T>::fit(const std::function<void(const EpochLog&)>& on_epoch) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };
  std::vector<size_t> order(train_.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::vector<EpochLog> logs;
  bool out_of_time = false;
  for (int epoch = 1; epoch <= config_.epochs && !out_of_time; ++epoch) {
    const double epoch_start = elapsed();
    std::shuffle(order.begin(), order.end(), rng_);
    EpochLog log;
    log.epoch = epoch;
    for (size_t b = 0; b < order.size(); b += config_.batch_size) {
      size_t e = std::min(order.size(), b + config_.batch_size);
      auto bd = step(std::span<const size_t>(order).subspan(b, e - b));
      log.mean.tagger += bd.tagger;
      log.mean.enc_rank += bd.enc_rank;
      log.mean.dec_rank += bd.dec_rank;
      log.mean.gen += bd.gen;
      log.mean.total += bd.total;
      ++log.steps;
      if (config_.time_limit_s > 0 && elapsed() >= config_.time_limit_s) {
        out_of_time = true;
        break;
      }
    }
    for (double* v : {&log.mean.tagger, &log.mean.enc_rank, &log.mean.dec_rank, &log.mean.gen,
                      &log.mean.total}) {
      *v /= std::max(1, log.steps);
    }
    log.seconds = elapsed() - epoch_start;
    logs.push_back(log);
    if (on_epoch) on_epoch(log);
  }
  return logs;
}

#define ADACS_INSTANTIATE_TRAIN(T)                                                            \
  template LossGraph<T> compute_loss(nn::Graph<T>&, const AdacsModel<T>&,                     \
                                     std::span<const TrainingExample>, const bam::BiasBank<T>&); \
  template LossBreakdown train_step(AdacsModel<T>&, std::span<const TrainingExample>,         \
                                    std::span<const bam::BiasEntry>, nn::Adam<T>&, double,    \
                                    double*);                                                 \
  template class Trainer<T>;

ADACS_INSTANTIATE_TRAIN(float)
ADACS_INSTANTIATE_TRAIN(double)

}  // namespace adacs::model
