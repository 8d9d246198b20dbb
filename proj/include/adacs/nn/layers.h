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

#ifndef ADACS_NN_LAYERS_H_
#define ADACS_NN_LAYERS_H_

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "adacs/nn/graph.h"
#include "adacs/nn/ops.h"

namespace adacs::nn {

// Parameter initializers.
template <typename T>
void init_xavier_uniform(Parameter<T>& p, std::mt19937_64& rng);
template <typename T>
void init_normal(Parameter<T>& p, double stddev, std::mt19937_64& rng);
template <typename T>
void init_constant(Parameter<T>& p, T value);

// Key ranges for packed sequences.
std::vector<Range> self_ranges(std::span<const Range> segments);
std::vector<Range> causal_ranges(std::span<const Range> segments);
// Query segment i attends to the whole of key segment i.
std::vector<Range> cross_ranges(std::span<const Range> query_segments,
                                std::span<const Range> key_segments);

template <typename T>
class Linear {
 public:
  Linear() = default;
  Linear(ParameterStore<T>& store, const std::string& prefix, int in, int out,
         std::mt19937_64& rng);
  Var<T> operator()(Graph<T>& g, Var<T> x) const;

  Parameter<T>* weight = nullptr;  // out x in
  Parameter<T>* bias = nullptr;    // 1 x out
};

template <typename T>
class LayerNorm {
 public:
  LayerNorm() = default;
  LayerNorm(ParameterStore<T>& store, const std::string& prefix, int d);
  Var<T> operator()(Graph<T>& g, Var<T> x) const;

  Parameter<T>* gain = nullptr;
  Parameter<T>* shift = nullptr;
};

template <typename T>
class MultiHeadAttention {
 public:
  MultiHeadAttention() = default;
  MultiHeadAttention(ParameterStore<T>& store, const std::string& prefix, int d, int heads,
                     std::mt19937_64& rng);

  // Projects query/keys/values, attends per head within key_ranges and
  // applies the output projection.
  Var<T> operator()(Graph<T>& g, Var<T> query, Var<T> keys, Var<T> values,
                    std::span<const Range> key_ranges) const;

  // Same as above with keys and values already projected (reused when many
  // queries share a projected memory).
  Var<T> attend_projected(Graph<T>& g, Var<T> query, Var<T> proj_keys, Var<T> proj_values,
                          std::span<const Range> key_ranges) const;

  int heads() const { return heads_; }

  Linear<T> q_proj, k_proj, v_proj, out_proj;

 private:
  int heads_ = 1;
};

template <typename T>
class FeedForward {
 public:
  FeedForward() = default;
  FeedForward(ParameterStore<T>& store, const std::string& prefix, int d, int d_ff,
              std::mt19937_64& rng);
  Var<T> operator()(Graph<T>& g, Var<T> x) const;

  Linear<T> up, down;
};

// Pre-norm transformer encoder layer:
//   x = x + SelfAttn(LN(x)); x = x + FFN(LN(x))
template <typename T>
class EncoderLayer {
 public:
  EncoderLayer() = default;
  EncoderLayer(ParameterStore<T>& store, const std::string& prefix, int d, int heads, int d_ff,
               std::mt19937_64& rng);
  Var<T> operator()(Graph<T>& g, Var<T> x, std::span<const Range> self_keys) const;

  LayerNorm<T> norm1, norm2;
  MultiHeadAttention<T> self_attn;
  FeedForward<T> ffn;
};

// Pre-norm decoder layer with causal self-attention and cross-attention:
//   x = x + SelfAttn(LN(x)); x = x + CrossAttn(LN(x), memory); x = x + FFN(LN(x))
template <typename T>
class DecoderLayer {
 public:
  DecoderLayer() = default;
  DecoderLayer(ParameterStore<T>& store, const std::string& prefix, int d, int heads, int d_ff,
               std::mt19937_64& rng);
  Var<T> operator()(Graph<T>& g, Var<T> x, std::span<const Range> self_keys, Var<T> memory,
                    std::span<const Range> memory_keys) const;

  LayerNorm<T> norm1, norm2, norm3;
  MultiHeadAttention<T> self_attn, cross_attn;
  FeedForward<T> ffn;
};

}  // namespace adacs::nn

#endif  // ADACS_NN_LAYERS_H_
