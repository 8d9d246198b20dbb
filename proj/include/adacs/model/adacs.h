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

// Bias-aware tagger/decoder network. A shared transformer encoder produces
// contextual states for sentences and bias entries alike; an encoder-side
// bias attention feeds a BIO tagger; each tagged region is rewritten by a
// transformer decoder that cross-attends to the region's states and passes
// every step through a decoder-side bias attention.

#ifndef ADACS_MODEL_ADACS_H_
#define ADACS_MODEL_ADACS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "adacs/bam/bias.h"
#include "adacs/model/labels.h"
#include "adacs/nn/layers.h"
#include "json.hpp"

namespace adacs::model {

struct ModelConfig {
  int d_model = 32;
  int heads = 4;
  int d_ff = 128;
  int encoder_layers = 2;
  int decoder_layers = 1;
  int vocab_size = 0;
  int max_positions = 512;   // longest encoder input
  int max_decode_len = 96;   // decoder steps including EOS
  double init_std = 0.02;    // embeddings and output heads
  uint64_t seed = 1;

  // Throws std::invalid_argument on inconsistent values.
  void validate() const;
  nlohmann::json to_json() const;
  static ModelConfig from_json(const nlohmann::json& j);
};

template <typename T>
struct TagOutput {
  nn::Var<T> logits;  // n x 3
  bam::BamOutput<T> bias;
};

template <typename T>
struct DecoderOutput {
  nn::Var<T> logits;  // steps x V
  bam::BamOutput<T> bias;
};

// Greedy decode of one region.
struct DecodedRegion {
  text::TokenSeq ids;  // without EOS
  bool truncated = false;
  int bias_index = 0;  // decoder-side selection at the first step
};

template <typename T>
class AdacsModel {
 public:
  explicit AdacsModel(const ModelConfig& config);
  AdacsModel(const AdacsModel&) = delete;
  AdacsModel& operator=(const AdacsModel&) = delete;

  const ModelConfig& config() const { return config_; }
  nn::ParameterStore<T>& parameters() { return store_; }
  const nn::ParameterStore<T>& parameters() const { return store_; }

  // Contextual states for packed sequences (segments index into ids).
  // Throws std::out_of_range for a sequence longer than max_positions.
  nn::Var<T> encode(nn::Graph<T>& g, std::span<const int> ids,
                    std::span<const nn::Range> segments) const;

  bam::BiasBank<T> encode_bank(nn::Graph<T>& g, std::span<const bam::BiasEntry> entries) const;

  TagOutput<T> tag(nn::Graph<T>& g, nn::Var<T> states, const bam::BiasBank<T>& bank,
                   std::optional<std::span<const int>> teacher = std::nullopt) const;

  // Teacher-forced decoding of packed regions. `memory` rows are grouped
  // by memory_segments (one per region); dec_inputs are BOS + target per
  // region, grouped by dec_segments.
  DecoderOutput<T> decode_teacher(nn::Graph<T>& g, nn::Var<T> memory,
                                  std::span<const nn::Range> memory_segments,
                                  std::span<const int> dec_inputs,
                                  std::span<const nn::Range> dec_segments,
                                  const bam::BiasBank<T>& bank,
                                  std::optional<std::span<const int>> teacher_bias) const;

  // Greedy decoding of every region, lowest id on ties, until EOS or
  // max_lens[r] steps.
  std::vector<DecodedRegion> decode_greedy(nn::Graph<T>& g, nn::Var<T> memory,
                                           std::span<const nn::Range> memory_segments,
                                           const bam::BiasBank<T>& bank,
                                           std::span<const int> max_lens) const;

  // Decode step budget for a region of `region_tokens` input tokens.
  int decode_budget(int region_tokens) const;

  nn::Parameter<T>* token_embedding = nullptr;
  nn::Parameter<T>* encoder_positions = nullptr;
  nn::Parameter<T>* decoder_positions = nullptr;
  nn::Parameter<T>* dummy_entry = nullptr;
  std::vector<nn::EncoderLayer<T>> encoder_layers;
  nn::LayerNorm<T> encoder_norm;
  bam::BiasAttention<T> encoder_bias;
  nn::Linear<T> tagger;
  std::vector<nn::DecoderLayer<T>> decoder_layers;
  nn::LayerNorm<T> decoder_norm;
  bam::BiasAttention<T> decoder_bias;
  nn::Linear<T> output;

 private:
  nn::Var<T> embed(nn::Graph<T>& g, std::span<const int> ids, std::span<const nn::Range> segments,
                   nn::Parameter<T>& positions) const;
  // Decoder features o_t for packed inputs.
  nn::Var<T> decoder_states(nn::Graph<T>& g, nn::Var<T> memory,
                            std::span<const nn::Range> memory_segments,
                            std::span<const int> dec_inputs,
                            std::span<const nn::Range> dec_segments) const;

  ModelConfig config_;
  nn::ParameterStore<T> store_;
};

}  // namespace adacs::model

#endif  // ADACS_MODEL_ADACS_H_
