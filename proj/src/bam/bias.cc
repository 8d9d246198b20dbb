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

#include "adacs/bam/bias.h"

#include <stdexcept>

#include "adacs/data/synth.h"

namespace adacs::bam {

std::vector<BiasEntry> make_entries(std::span<const std::string> texts,
                                    const text::Vocabulary& vocab) {
  std::vector<BiasEntry> out;
  out.reserve(texts.size());
  for (const auto& t : texts) {
    BiasEntry e{t, vocab.encode(t), {}};
    if (e.ids.empty()) throw std::invalid_argument("bias entry '" + t + "' has no tokens");
    try {
      e.spoken_form = data::spoken_form(t);
    } catch (const std::invalid_argument&) {
      // Entries outside a..z keep an empty spoken form.
    }
    out.push_back(std::move(e));
  }
  return out;
}

template <typename T>
FrozenBank<T> FrozenBank<T>::freeze(const BiasBank<T>& bank) {
  return {bank.encodings.value(), bank.segments, bank.pooled.value()};
}

template <typename T>
BiasBank<T> FrozenBank<T>::bind(nn::Graph<T>& g) const {
  return {g.constant(encodings), segments, g.constant(pooled)};
}

template <typename T>
BiasBank<T> encode_bias_list(nn::Graph<T>& g, std::span<const BiasEntry> entries,
                             const SequenceEncoder<T>& encoder, nn::Parameter<T>& dummy) {
  if (dummy.value.rows() != 1) throw std::invalid_argument("dummy bias entry must be 1 x d");
  BiasBank<T> bank;
  bank.segments.push_back({0, 1});
  auto dummy_row = g.parameter(dummy);
  if (entries.empty()) {
    bank.encodings = dummy_row;
  } else {
    std::vector<int> ids;
    std::vector<nn::Range> segments;
    for (const auto& e : entries) {
      if (e.ids.empty()) throw std::invalid_argument("bias entry '" + e.text + "' has no tokens");
      segments.push_back({static_cast<int>(ids.size()), static_cast<int>(e.ids.size())});
      bank.segments.push_back({1 + segments.back().start, segments.back().length});
      ids.insert(ids.end(), e.ids.begin(), e.ids.end());
    }
    auto encoded = encoder(g, ids, segments);
    if (encoded.rows() != static_cast<int>(ids.size()) ||
        encoded.cols() != dummy.value.cols()) {
      throw std::invalid_argument("bias encoder returned " + nn::shape_string(encoded.rows(), encoded.cols()));
    }
    std::vector<nn::Var<T>> parts = {dummy_row, encoded};
    bank.encodings = nn::concat_rows<T>(parts);
  }
  bank.pooled = nn::segment_mean(bank.encodings, bank.segments);
  return bank;
}

template <typename T>
int select(std::span<const T> scores) {
  if (scores.empty()) throw std::invalid_argument("select: empty scores");
  int best = 0;
  for (size_t i = 1; i < scores.size(); ++i)
    if (scores[i] > scores[best]) best = static_cast<int>(i);
  return best;
}

template <typename T>
std::vector<int> select_rows(const nn::Tensor<T>& scores) {
  std::vector<int> out(scores.rows());
  for (int r = 0; r < scores.rows(); ++r) out[r] = select<T>(scores.row(r));
  return out;
}

template <typename T>
BiasAttention<T>::BiasAttention(nn::ParameterStore<T>& store, const std::string& prefix, int d,
                                int heads, std::mt19937_64& rng)
    : attn(store, prefix + ".attn", d, heads, rng) {}

template <typename T>
nn::Var<T> BiasAttention<T>::score(nn::Graph<T>& /*g*/, nn::Var<T> states,
                                   const BiasBank<T>& bank) const {
  return nn::matmul_nt(states, bank.pooled);
}

template <typename T>
nn::Var<T> BiasAttention<T>::augment(nn::Graph<T>& g, nn::Var<T> states, const BiasBank<T>& bank,
                                     std::span<const int> indices) const {
  if (static_cast<int>(indices.size()) != states.rows()) {
    throw std::invalid_argument("augment: one bias index per state row required");
  }
  std::vector<nn::Range> ranges;
  ranges.reserve(indices.size());
  for (int idx : indices) {
    if (idx < 0 || idx >= bank.size()) {
      throw std::out_of_range("augment: bias index " + std::to_string(idx) + " outside bank of " +
                              std::to_string(bank.size()));
    }
    ranges.push_back(bank.segments[idx]);
  }
  auto attended = attn(g, states, bank.encodings, bank.encodings, ranges);
  return nn::add(states, attended);
}

template <typename T>
BamOutput<T> BiasAttention<T>::forward(nn::Graph<T>& g, nn::Var<T> states, const BiasBank<T>& bank,
                                       std::optional<std::span<const int>> teacher) const {
  BamOutput<T> out;
  out.scores = score(g, states, bank);
  if (teacher) {
    out.indices.assign(teacher->begin(), teacher->end());
  } else {
    out.indices = select_rows(out.scores.value());
  }
  out.augmented = augment(g, states, bank, out.indices);
  return out;
}

#define ADACS_INSTANTIATE_BAM(T)                                                             \
  template struct FrozenBank<T>;                                                             \
  template BiasBank<T> encode_bias_list(nn::Graph<T>&, std::span<const BiasEntry>,           \
                                        const SequenceEncoder<T>&, nn::Parameter<T>&);       \
  template int select(std::span<const T>);                                                   \
  template std::vector<int> select_rows(const nn::Tensor<T>&);                               \
  template class BiasAttention<T>;

ADACS_INSTANTIATE_BAM(float)
ADACS_INSTANTIATE_BAM(double)

}  // namespace adacs::bam
