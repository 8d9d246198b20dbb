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

#include "adacs/model/adacs.h"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace adacs::model {

void ModelConfig::validate() const {
  if (d_model <= 0 || heads <= 0 || d_model % heads != 0) {
    throw std::invalid_argument("model config: d_model " + std::to_string(d_model) +
                                " must be a positive multiple of heads " + std::to_string(heads));
  }
  if (d_ff <= 0) throw std::invalid_argument("model config: d_ff must be positive");
  if (encoder_layers < 1 || decoder_layers < 1) {
    throw std::invalid_argument("model config: need at least one encoder and decoder layer");
  }
  if (vocab_size <= text::kNumSpecials) {
    throw std::invalid_argument("model config: vocab_size must exceed the special tokens");
  }
  if (max_decode_len < 2) throw std::invalid_argument("model config: max_decode_len must be >= 2");
  if (max_positions < 1) throw std::invalid_argument("model config: max_positions must be >= 1");
}

nlohmann::json ModelConfig::to_json() const {
  return {{"d_model", d_model},
          {"heads", heads},
          {"d_ff", d_ff},
          {"encoder_layers", encoder_layers},
          {"decoder_layers", decoder_layers},
          {"vocab_size", vocab_size},
          {"max_positions", max_positions},
          {"max_decode_len", max_decode_len},
          {"init_std", init_std},
          {"seed", seed}};
}

ModelConfig ModelConfig::from_json(const nlohmann::json& j) {
  ModelConfig c;
  c.d_model = j.value("d_model", c.d_model);
  c.heads = j.value("heads", c.heads);
  c.d_ff = j.value("d_ff", c.d_ff);
  c.encoder_layers = j.value("encoder_layers", c.encoder_layers);
  c.decoder_layers = j.value("decoder_layers", c.decoder_layers);
  c.vocab_size = j.value("vocab_size", c.vocab_size);
  c.max_positions = j.value("max_positions", c.max_positions);
  c.max_decode_len = j.value("max_decode_len", c.max_decode_len);
  c.init_std = j.value("init_std", c.init_std);
  c.seed = j.value("seed", c.seed);
  return c;
}

template <typename T>
AdacsModel<T>::AdacsModel(const ModelConfig& config) : config_(config) {
  config_.validate();
  const int d = config_.d_model;
  std::mt19937_64 rng(config_.seed);

  token_embedding = &store_.add("embed.tokens", config_.vocab_size, d);
  encoder_positions = &store_.add("encoder.positions", config_.max_positions, d);
  decoder_positions = &store_.add("decoder.positions", config_.max_decode_len, d);
  dummy_entry = &store_.add("bias.dummy", 1, d);
  for (auto* p : {token_embedding, encoder_positions, decoder_positions, dummy_entry}) {
    nn::init_normal(*p, config_.init_std, rng);
  }
  for (int l = 0; l < config_.encoder_layers; ++l) {
    encoder_layers.emplace_back(store_, "encoder.layer" + std::to_string(l), d, config_.heads,
                                config_.d_ff, rng);
  }
  encoder_norm = nn::LayerNorm<T>(store_, "encoder.norm", d);
  encoder_bias = bam::BiasAttention<T>(store_, "encoder.bias", d, config_.heads, rng);
  tagger = nn::Linear<T>(store_, "tagger", d, kNumTags, rng);
  nn::init_normal(*tagger.weight, config_.init_std, rng);

  for (int l = 0; l < config_.decoder_layers; ++l) {
    decoder_layers.emplace_back(store_, "decoder.layer" + std::to_string(l), d, config_.heads,
                                config_.d_ff, rng);
  }
  decoder_norm = nn::LayerNorm<T>(store_, "decoder.norm", d);
  decoder_bias = bam::BiasAttention<T>(store_, "decoder.bias", d, config_.heads, rng);
  output = nn::Linear<T>(store_, "output", d, config_.vocab_size, rng);
  nn::init_normal(*output.weight, config_.init_std, rng);
}

template <typename T>
nn::Var<T> AdacsModel<T>::embed(nn::Graph<T>& g, std::span<const int> ids,
                                std::span<const nn::Range> segments,
                                nn::Parameter<T>& positions) const {
  std::vector<int> pos(ids.size());
  for (const auto& s : segments) {
    if (s.start < 0 || s.end() > static_cast<int>(ids.size())) {
      throw std::invalid_argument("embed: segment outside the packed ids");
    }
    if (s.length > positions.value.rows()) {
      throw std::out_of_range("sequence of " + std::to_string(s.length) +
                              " tokens exceeds the positional table of " +
                              std::to_string(positions.value.rows()));
    }
    for (int i = 0; i < s.length; ++i) pos[s.start + i] = i;
  }
  for (int id : ids) {
    if (id < 0 || id >= config_.vocab_size) {
      throw std::out_of_range("token id " + std::to_string(id) + " outside vocabulary");
    }
  }
  return nn::add(nn::gather_rows(g.parameter(*token_embedding), ids),
                 nn::gather_rows(g.parameter(positions), pos));
}

template <typename T>
nn::Var<T> AdacsModel<T>::encode(nn::Graph<T>& g, std::span<const int> ids,
                                 std::span<const nn::Range> segments) const {
  auto x = embed(g, ids, segments, *encoder_positions);
  auto keys = nn::self_ranges(segments);
  for (const auto& layer : encoder_layers) x = layer(g, x, keys);
  return encoder_norm(g, x);
}

template <typename T>
bam::BiasBank<T> AdacsModel<T>::encode_bank(nn::Graph<T>& g,
                                            std::span<const bam::BiasEntry> entries) const {
  bam::SequenceEncoder<T> encoder = [this](nn::Graph<T>& gg, std::span<const int> ids,
                                           std::span<const nn::Range> segments) {
    return encode(gg, ids, segments);
  };
  return bam::encode_bias_list<T>(g, entries, encoder, *dummy_entry);
}

template <typename T>
TagOutput<T> AdacsModel<T>::tag(nn::Graph<T>& g, nn::Var<T> states, const bam::BiasBank<T>& bank,
                                std::optional<std::span<const int>> teacher) const {
  TagOutput<T> out;
  out.bias = encoder_bias.forward(g, states, bank, teacher);
  out.logits = tagger(g, out.bias.augmented);
  return out;
}

template <typename T>
nn::Var<T> AdacsModel<T>::decoder_states(nn::Graph<T>& g, nn::Var<T> memory,
                                         std::span<const nn::Range> memory_segments,
                                         std::span<const int> dec_inputs,
                                         std::span<const nn::Range> dec_segments) const {
  auto x = embed(g, dec_inputs, dec_segments, *decoder_positions);
  auto self_keys = nn::causal_ranges(dec_segments);
  auto memory_keys = nn::cross_ranges(dec_segments, memory_segments);
  for (const auto& layer : decoder_layers) x = layer(g, x, self_keys, memory, memory_keys);
  return decoder_norm(g, x);
}

template <typename T>
DecoderOutput<T> AdacsModel<T>::decode_teacher(
    nn::Graph<T>& g, nn::Var<T> memory, std::span<const nn::Range> memory_segments,
    std::span<const int> dec_inputs, std::span<const nn::Range> dec_segments,
    const bam::BiasBank<T>& bank, std::optional<std::span<const int>> teacher_bias) const {
  auto states = decoder_states(g, memory, memory_segments, dec_inputs, dec_segments);
  DecoderOutput<T> out;
  out.bias = decoder_bias.forward(g, states, bank, teacher_bias);
  out.logits = output(g, out.bias.augmented);
  return out;
}

template <typename T>
int AdacsModel<T>::decode_budget(int region_tokens) const {
  return std::min(4 * region_tokens + 8, config_.max_decode_len);
}

template <typename T>
std::vector<DecodedRegion> AdacsModel<T>::decode_greedy(
    nn::Graph<T>& g, nn::Var<T> memory, std::span<const nn::Range> memory_segments,
    const bam::BiasBank<T>& bank, std::span<const int> max_lens) const {
  const size_t m = memory_segments.size();
  if (max_lens.size() != m) throw std::invalid_argument("decode_greedy: one budget per region");
  std::vector<DecodedRegion> out(m);
  std::vector<text::TokenSeq> prefix(m, text::TokenSeq{text::kBos});
  std::vector<size_t> active;
  for (size_t r = 0; r < m; ++r) {
    if (max_lens[r] < 1 || max_lens[r] > config_.max_decode_len) {
      throw std::invalid_argument("decode_greedy: budget outside [1, max_decode_len]");
    }
    active.push_back(r);
  }
  for (int step = 0; !active.empty(); ++step) {
    std::vector<int> inputs, last_rows;
    std::vector<nn::Range> segs, mem;
    for (size_t r : active) {
      segs.push_back({static_cast<int>(inputs.size()), static_cast<int>(prefix[r].size())});
      inputs.insert(inputs.end(), prefix[r].begin(), prefix[r].end());
      last_rows.push_back(static_cast<int>(inputs.size()) - 1);
      mem.push_back(memory_segments[r]);
    }
    auto states = decoder_states(g, memory, mem, inputs, segs);
    auto last = nn::gather_rows(states, last_rows);
    auto biased = decoder_bias.forward(g, last, bank);
    const auto& logits = output(g, biased.augmented).value();

    std::vector<size_t> still;
    for (size_t a = 0; a < active.size(); ++a) {
      size_t r = active[a];
      if (step == 0) out[r].bias_index = biased.indices[a];
      auto row = logits.row(static_cast<int>(a));
      int best = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
      if (best == text::kEos) continue;
      out[r].ids.push_back(best);
      prefix[r].push_back(best);
      if (step + 1 >= max_lens[r]) {
        out[r].truncated = true;
      } else {
        still.push_back(r);
      }
    }
    active = std::move(still);
  }
  return out;
}

template class AdacsModel<float>;
template class AdacsModel<double>;

}  // namespace adacs::model
