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

#include "adacs/nn/graph.h"

#include <cmath>
#include <stdexcept>

namespace adacs::nn {

template <typename T>
Parameter<T>& ParameterStore<T>::add(const std::string& path, int rows, int cols) {
  auto [it, inserted] = params_.try_emplace(path);
  if (!inserted) throw std::invalid_argument("duplicate parameter: " + path);
  it->second.value = Tensor<T>(rows, cols);
  it->second.grad = Tensor<T>(rows, cols);
  return it->second;
}

template <typename T>
Parameter<T>& ParameterStore<T>::get(const std::string& path) {
  auto it = params_.find(path);
  if (it == params_.end()) throw std::out_of_range("unknown parameter: " + path);
  return it->second;
}

template <typename T>
const Parameter<T>& ParameterStore<T>::get(const std::string& path) const {
  auto it = params_.find(path);
  if (it == params_.end()) throw std::out_of_range("unknown parameter: " + path);
  return it->second;
}

template <typename T>
size_t ParameterStore<T>::count() const {
  size_t n = 0;
  for (const auto& [_, p] : params_) n += p.value.size();
  return n;
}

template <typename T>
void ParameterStore<T>::zero_grad() {
  for (auto& [_, p] : params_) p.grad.fill(T(0));
}

template <typename T>
double ParameterStore<T>::grad_norm() const {
  double sq = 0.0;
  for (const auto& [_, p] : params_) {
    for (T g : p.grad.values()) sq += static_cast<double>(g) * static_cast<double>(g);
  }
  return std::sqrt(sq);
}

template <typename T>
double ParameterStore<T>::clip_grad_norm(double max_norm) {
  double norm = grad_norm();
  if (norm > max_norm && norm > 0.0) {
    T scale = static_cast<T>(max_norm / (norm + 1e-12));
    for (auto& [_, p] : params_) {
      for (T& g : p.grad.values()) g *= scale;
    }
  }
  return norm;
}

template <typename T>
Var<T> Graph<T>::constant(Tensor<T> value) {
  Node n;
  n.value = std::move(value);
  nodes_.push_back(std::move(n));
  return Var<T>(this, static_cast<int>(nodes_.size()) - 1);
}

template <typename T>
Var<T> Graph<T>::parameter(Parameter<T>& p) {
  auto it = param_nodes_.find(&p);
  if (it != param_nodes_.end()) return Var<T>(this, it->second);
  Node n;
  n.value = p.value;
  n.param = &p;
  n.needs_grad = record_;
  nodes_.push_back(std::move(n));
  int id = static_cast<int>(nodes_.size()) - 1;
  param_nodes_.emplace(&p, id);
  return Var<T>(this, id);
}

template <typename T>
Var<T> Graph<T>::make(Tensor<T> value, std::initializer_list<int> inputs, BackwardFn fn) {
  return make(std::move(value), std::vector<int>(inputs), std::move(fn));
}

template <typename T>
Var<T> Graph<T>::make(Tensor<T> value, const std::vector<int>& inputs, BackwardFn fn) {
#ifndef NDEBUG
  for (T v : value.values()) {
    if (!std::isfinite(static_cast<double>(v))) {
      throw std::runtime_error("non-finite value produced by forward op");
    }
  }
#endif
  Node n;
  n.value = std::move(value);
  if (record_) {
    for (int id : inputs) n.needs_grad = n.needs_grad || nodes_[id].needs_grad;
    if (n.needs_grad) n.backward = std::move(fn);
  }
  nodes_.push_back(std::move(n));
  return Var<T>(this, static_cast<int>(nodes_.size()) - 1);
}

template <typename T>
Tensor<T>& Graph<T>::grad(int id) {
  Node& n = nodes_[id];
  if (n.grad.size() != n.value.size() || n.grad.rows() != n.value.rows()) {
    n.grad = Tensor<T>(n.value.rows(), n.value.cols());
  }
  return n.grad;
}

template <typename T>
void Graph<T>::backward(Var<T> loss) {
  if (!record_) throw std::logic_error("backward on a graph that does not record");
  if (loss.rows() != 1 || loss.cols() != 1) {
    throw std::invalid_argument("backward requires a scalar loss, got " +
                                shape_string(loss.rows(), loss.cols()));
  }
  for (Node& n : nodes_) n.grad = Tensor<T>();
  grad(loss.id())[0] = T(1);
  for (int id = loss.id(); id >= 0; --id) {
    Node& n = nodes_[id];
    if (n.grad.empty() || !n.needs_grad) continue;
    if (n.backward) {
      n.backward(*this, id);
    } else if (n.param != nullptr) {
      auto dst = n.param->grad.values();
      auto src = nodes_[id].grad.values();
      for (size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    }
  }
}

template class ParameterStore<float>;
template class ParameterStore<double>;
template class Graph<float>;
template class Graph<double>;

}  // namespace adacs::nn
