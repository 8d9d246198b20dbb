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

#ifndef ADACS_NN_GRAPH_H_
#define ADACS_NN_GRAPH_H_

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "adacs/nn/tensor.h"

namespace adacs::nn {

template <typename T>
struct Parameter {
  Tensor<T> value;
  Tensor<T> grad;
};

// Named trainable tensors. std::map keeps iteration sorted by path and
// references stable across insertions.
template <typename T>
class ParameterStore {
 public:
  ParameterStore() = default;
  ParameterStore(const ParameterStore&) = delete;
  ParameterStore& operator=(const ParameterStore&) = delete;
  ParameterStore(ParameterStore&&) = default;
  ParameterStore& operator=(ParameterStore&&) = default;

  // Registers a zero-initialized parameter. Throws on duplicate path.
  Parameter<T>& add(const std::string& path, int rows, int cols);
  Parameter<T>& get(const std::string& path);
  const Parameter<T>& get(const std::string& path) const;
  bool contains(const std::string& path) const { return params_.count(path) > 0; }

  std::map<std::string, Parameter<T>>& items() { return params_; }
  const std::map<std::string, Parameter<T>>& items() const { return params_; }
  size_t count() const;  // total scalar count

  void zero_grad();
  double grad_norm() const;
  // Rescales gradients so their global L2 norm is at most max_norm.
  // Returns the norm before clipping.
  double clip_grad_norm(double max_norm);

 private:
  std::map<std::string, Parameter<T>> params_;
};

template <typename T>
class Graph;

// Handle to a node of a Graph.
template <typename T>
class Var {
 public:
  Var() = default;
  Var(Graph<T>* graph, int id) : graph_(graph), id_(id) {}

  bool valid() const { return graph_ != nullptr; }
  Graph<T>& graph() const { return *graph_; }
  int id() const { return id_; }
  const Tensor<T>& value() const;
  int rows() const { return value().rows(); }
  int cols() const { return value().cols(); }

 private:
  Graph<T>* graph_ = nullptr;
  int id_ = -1;
};

// Reverse-mode tape. Nodes are appended in evaluation order, so reverse
// insertion order is a valid topological order for the backward sweep.
// A graph constructed with record_grad = false keeps values only.
template <typename T>
class Graph {
 public:
  using BackwardFn = std::function<void(Graph&, int self)>;

  explicit Graph(bool record_grad = true) : record_(record_grad) {}
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  bool recording() const { return record_; }

  Var<T> constant(Tensor<T> value);
  // Leaf bound to a stored parameter; the same parameter maps to one node.
  Var<T> parameter(Parameter<T>& p);

  // Appends an op result. `fn` is kept only when recording and some input
  // requires a gradient.
  Var<T> make(Tensor<T> value, std::initializer_list<int> inputs, BackwardFn fn);
  Var<T> make(Tensor<T> value, const std::vector<int>& inputs, BackwardFn fn);

  const Tensor<T>& value(int id) const { return nodes_[id].value; }
  bool needs_grad(int id) const { return nodes_[id].needs_grad; }
  // Gradient buffer, allocated (zeroed) on first access.
  Tensor<T>& grad(int id);

  // Backpropagates from a 1x1 node and accumulates into parameter grads.
  void backward(Var<T> loss);

  size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor<T> value;
    Tensor<T> grad;
    BackwardFn backward;
    Parameter<T>* param = nullptr;
    bool needs_grad = false;
  };

  bool record_;
  std::vector<Node> nodes_;
  std::unordered_map<const Parameter<T>*, int> param_nodes_;
};

template <typename T>
const Tensor<T>& Var<T>::value() const {
  return graph_->value(id_);
}

}  // namespace adacs::nn

#endif  // ADACS_NN_GRAPH_H_
