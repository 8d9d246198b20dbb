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

// Bias attention: a bank of encoded bias entries, inner-product scoring of
// hidden states against pooled entries, hard selection of one entry per
// state, and residual attention over the selected entry's encodings.

#ifndef ADACS_BAM_BIAS_H_
#define ADACS_BAM_BIAS_H_

#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "adacs/nn/layers.h"
#include "adacs/text/vocab.h"

namespace adacs::bam {

struct BiasEntry {
  std::string text;
  text::TokenSeq ids;
  std::string spoken_form;  // empty when the text has no letter-name rendering
};

// Entries in list order; index i here is bank index i + 1. Throws
// std::invalid_argument for an entry that encodes to no tokens.
std::vector<BiasEntry> make_entries(std::span<const std::string> texts,
                                    const text::Vocabulary& vocab);

// Encodes packed token ids (segments index into `ids`) to one row per token.
template <typename T>
using SequenceEncoder = std::function<nn::Var<T>(nn::Graph<T>&, std::span<const int> ids,
                                                 std::span<const nn::Range> segments)>;

// Bank of L + 1 entries bound to a graph. Row block segments[i] of
// `encodings` holds entry i; entry 0 is the dummy with a single row.
template <typename T>
struct BiasBank {
  nn::Var<T> encodings;
  std::vector<nn::Range> segments;
  nn::Var<T> pooled;  // (L+1) x d, row i = mean of segments[i]

  int size() const { return static_cast<int>(segments.size()); }
  int num_entries() const { return size() - 1; }
};

// Bank values detached from any graph, for reuse across inference calls.
template <typename T>
struct FrozenBank {
  nn::Tensor<T> encodings;
  std::vector<nn::Range> segments;
  nn::Tensor<T> pooled;

  static FrozenBank freeze(const BiasBank<T>& bank);
  BiasBank<T> bind(nn::Graph<T>& g) const;
};

template <typename T>
BiasBank<T> encode_bias_list(nn::Graph<T>& g, std::span<const BiasEntry> entries,
                             const SequenceEncoder<T>& encoder, nn::Parameter<T>& dummy);

// Index of the largest score; ties go to the lowest index. Throws
// std::invalid_argument on empty input.
template <typename T>
int select(std::span<const T> scores);

// select() applied to each row.
template <typename T>
std::vector<int> select_rows(const nn::Tensor<T>& scores);

template <typename T>
struct BamOutput {
  nn::Var<T> augmented;
  nn::Var<T> scores;
  std::vector<int> indices;  // entry used for each row
};

template <typename T>
class BiasAttention {
 public:
  BiasAttention() = default;
  BiasAttention(nn::ParameterStore<T>& store, const std::string& prefix, int d, int heads,
                std::mt19937_64& rng);

  // states: n x d. Returns n x (L+1) inner products with the pooled rows.
  nn::Var<T> score(nn::Graph<T>& g, nn::Var<T> states, const BiasBank<T>& bank) const;

  // states + Attention(states, E_index) row by row.
  nn::Var<T> augment(nn::Graph<T>& g, nn::Var<T> states, const BiasBank<T>& bank,
                     std::span<const int> indices) const;

  // Scores every row; attends to `teacher` indices when given, else to the
  // argmax of each row.
  BamOutput<T> forward(nn::Graph<T>& g, nn::Var<T> states, const BiasBank<T>& bank,
                       std::optional<std::span<const int>> teacher = std::nullopt) const;

  nn::MultiHeadAttention<T> attn;
};

}  // namespace adacs::bam

#endif  // ADACS_BAM_BIAS_H_
