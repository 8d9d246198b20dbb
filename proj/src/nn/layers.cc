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

#include "adacs/nn/layers.h"

#include <cmath>
#include <stdexcept>

namespace adacs::nn {

template <typename T>
void init_xavier_uniform(Parameter<T>& p, std::mt19937_64& rng) {
  double limit = std::sqrt(6.0 / (p.value.rows() + p.value.cols()));
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (T& v : p.value.values()) v = static_cast<T>(dist(rng));
}

template <typename T>
void init_normal(Parameter<T>& p, double stddev, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, stddev);
  for (T& v : p.value.values()) v = static_cast<T>(dist(rng));
}

template <typename T>
void init_constant(Parameter<T>& p, T value) {
  p.value.fill(value);
}

std::vector<Range> self_ranges(std::span<const Range> segments) {
  std::vector<Range> out;
  for (const Range& s : segments) out.insert(out.end(), s.length, s);
  return out;
}

std::vector<Range> causal_ranges(std::span<const Range> segments) {
  std::vector<Range> out;
  for (const Range& s : segments) {
    for (int i = 0; i < s.length; ++i) out.push_back({s.start, i + 1});
  }
  return out;
}

std::vector<Range> cross_ranges(std::span<const Range> query_segments,
                                std::span<const Range> key_segments) {
  if (query_segments.size() != key_segments.size()) {
    throw std::invalid_argument("cross_ranges: segment counts differ");
  }
  std::vector<Range> out;
  for (size_t i = 0; i < query_segments.size(); ++i) {
    out.insert(out.end(), query_segments[i].length, key_segments[i]);
  }
  return out;
}

template <typename T>
Linear<T>::Linear(ParameterStore<T>& store, const std::string& prefix, int in, int out,
                  std::mt19937_64& rng)
    : weight(&store.add(prefix + ".weight", out, in)),
      bias(&store.add(prefix + ".bias", 1, out)) {
  init_xavier_uniform(*weight, rng);
}

template <typename T>
Var<T> Linear<T>::operator()(Graph<T>& g, Var<T> x) const {
  return linear(x, g.parameter(*weight), g.parameter(*bias));
}

template <typename T>
LayerNorm<T>::LayerNorm(ParameterStore<T>& store, const std::string& prefix, int d)
    : gain(&store.add(prefix + ".gain", 1, d)), shift(&store.add(prefix + ".shift", 1, d)) {
  init_constant(*gain, T(1));
}

template <typename T>
Var<T> LayerNorm<T>::operator()(Graph<T>& g, Var<T> x) const {
  return layer_norm(x, g.parameter(*gain), g.parameter(*shift));
}

template <typename T>
MultiHeadAttention<T>::MultiHeadAttention(ParameterStore<T>& store, const std::string& prefix,
                                          int d, int heads, std::mt19937_64& rng)
    : q_proj(store, prefix + ".q", d, d, rng),
      k_proj(store, prefix + ".k", d, d, rng),
      v_proj(store, prefix + ".v", d, d, rng),
      out_proj(store, prefix + ".out", d, d, rng),
      heads_(heads) {
  if (heads <= 0 || d % heads != 0) {
    throw std::invalid_argument("attention: d_model " + std::to_string(d) +
                                " not divisible by " + std::to_string(heads) + " heads");
  }
}

template <typename T>
Var<T> MultiHeadAttention<T>::operator()(Graph<T>& g, Var<T> query, Var<T> keys, Var<T> values,
                                         std::span<const Range> key_ranges) const {
  return attend_projected(g, query, k_proj(g, keys), v_proj(g, values), key_ranges);
}

template <typename T>
Var<T> MultiHeadAttention<T>::attend_projected(Graph<T>& g, Var<T> query, Var<T> proj_keys,
                                               Var<T> proj_values,
                                               std::span<const Range> key_ranges) const {
  Var<T> q = q_proj(g, query);
  return out_proj(g, range_attention(q, proj_keys, proj_values, key_ranges, heads_));
}

template <typename T>
FeedForward<T>::FeedForward(ParameterStore<T>& store, const std::string& prefix, int d,
                            int d_ff, std::mt19937_64& rng)
    : up(store, prefix + ".up", d, d_ff, rng), down(store, prefix + ".down", d_ff, d, rng) {}

template <typename T>
Var<T> FeedForward<T>::operator()(Graph<T>& g, Var<T> x) const {
  return down(g, gelu(up(g, x)));
}

template <typename T>
EncoderLayer<T>::EncoderLayer(ParameterStore<T>& store, const std::string& prefix, int d,
                              int heads, int d_ff, std::mt19937_64& rng)
    : norm1(store, prefix + ".norm1", d),
      norm2(store, prefix + ".norm2", d),
      self_attn(store, prefix + ".self_attn", d, heads, rng),
      ffn(store, prefix + ".ffn", d, d_ff, rng) {}

template <typename T>
Var<T> EncoderLayer<T>::operator()(Graph<T>& g, Var<T> x,
                                   std::span<const Range> self_keys) const {
  Var<T> h = norm1(g, x);
  x = add(x, self_attn(g, h, h, h, self_keys));
  return add(x, ffn(g, norm2(g, x)));
}

template <typename T>
DecoderLayer<T>::DecoderLayer(ParameterStore<T>& store, const std::string& prefix, int d,
                              int heads, int d_ff, std::mt19937_64& rng)
    : norm1(store, prefix + ".norm1", d),
      norm2(store, prefix + ".norm2", d),
      norm3(store, prefix + ".norm3", d),
      self_attn(store, prefix + ".self_attn", d, heads, rng),
      cross_attn(store, prefix + ".cross_attn", d, heads, rng),
      ffn(store, prefix + ".ffn", d, d_ff, rng) {}

template <typename T>
Var<T> DecoderLayer<T>::operator()(Graph<T>& g, Var<T> x, std::span<const Range> self_keys,
                                   Var<T> memory, std::span<const Range> memory_keys) const {
  Var<T> h = norm1(g, x);
  x = add(x, self_attn(g, h, h, h, self_keys));
  x = add(x, cross_attn(g, norm2(g, x), memory, memory, memory_keys));
  return add(x, ffn(g, norm3(g, x)));
}

#define ADACS_INSTANTIATE_LAYERS(T)                                          \
  template void init_xavier_uniform(Parameter<T>&, std::mt19937_64&);        \
  template void init_normal(Parameter<T>&, double, std::mt19937_64&);        \
  template void init_constant(Parameter<T>&, T);                             \
  template class Linear<T>;                                                  \
  template class LayerNorm<T>;                                               \
  template class MultiHeadAttention<T>;                                      \
  template class FeedForward<T>;                                             \
  template class EncoderLayer<T>;                                            \
  template class DecoderLayer<T>;

ADACS_INSTANTIATE_LAYERS(float)
ADACS_INSTANTIATE_LAYERS(double)

}  // namespace adacs::nn
