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

// Differentiable operators over Graph nodes. All shapes are checked and
// mismatches throw std::invalid_argument.

#ifndef ADACS_NN_OPS_H_
#define ADACS_NN_OPS_H_

#include <span>
#include <vector>

#include "adacs/nn/graph.h"

namespace adacs::nn {

// a[n x k] * b[k x m]
template <typename T>
Var<T> matmul(Var<T> a, Var<T> b);

// a[n x k] * b[m x k]^T
template <typename T>
Var<T> matmul_nt(Var<T> a, Var<T> b);

// Row i of the result is w * x_i + b. `b` may be an invalid Var (no bias).
template <typename T>
Var<T> linear(Var<T> x, Var<T> w, Var<T> b);

template <typename T>
Var<T> add(Var<T> a, Var<T> b);

template <typename T>
Var<T> scale(Var<T> x, T factor);

template <typename T>
Var<T> gelu(Var<T> x);

template <typename T>
Var<T> layer_norm(Var<T> x, Var<T> gamma, Var<T> beta, T eps = T(1e-5));

// Softmax along each row.
template <typename T>
Var<T> softmax_rows(Var<T> x);

// Row gather; used for token and position embeddings.
template <typename T>
Var<T> gather_rows(Var<T> table, std::span<const int> rows);

template <typename T>
Var<T> concat_rows(std::span<const Var<T>> parts);

// One output row per segment: the mean of that segment's rows.
template <typename T>
Var<T> segment_mean(Var<T> x, std::span<const Range> segments);

// Multi-head scaled dot-product attention where query row i may only attend
// to key rows key_ranges[i]. Self, causal, cross and gathered attention are
// all expressed through the ranges. q, k and v must share the column count,
// which must be divisible by `heads`.
template <typename T>
Var<T> range_attention(Var<T> q, Var<T> k, Var<T> v,
                       std::span<const Range> key_ranges, int heads);

// Dense per-head attention weights (nq x nk, zero outside each query's range).
template <typename T>
std::vector<Tensor<T>> range_attention_weights(const Tensor<T>& q, const Tensor<T>& k,
                                               std::span<const Range> key_ranges,
                                               int heads);

// Mean over rows of -log softmax(logits_i)[targets_i]. Zero rows give 0.
template <typename T>
Var<T> cross_entropy(Var<T> logits, std::span<const int> targets);

template <typename T>
Var<T> sum(Var<T> x);

// sum_i weights[i] * scalars[i], accumulated in double in index order.
template <typename T>
Var<T> weighted_sum(std::span<const Var<T>> scalars, std::span<const double> weights);

}  // namespace adacs::nn

#endif  // ADACS_NN_OPS_H_
