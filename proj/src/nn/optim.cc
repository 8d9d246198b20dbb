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

#include "adacs/nn/optim.h"

#include <cmath>

namespace adacs::nn {

template <typename T>
double Adam<T>::step(ParameterStore<T>& store) {
  return step(store, options_.lr);
}

template <typename T>
double Adam<T>::step(ParameterStore<T>& store, double lr) {
  double norm = options_.clip_norm > 0 ? store.clip_grad_norm(options_.clip_norm)
                                       : store.grad_norm();
  ++steps_;
  const double b1 = options_.beta1, b2 = options_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
  for (auto& [path, p] : store.items()) {
    auto& mom = moments_[path];
    if (mom.m.size() != p.value.size()) {
      mom.m.assign(p.value.size(), 0.0);
      mom.v.assign(p.value.size(), 0.0);
    }
    auto val = p.value.values();
    auto grad = p.grad.values();
    for (size_t i = 0; i < val.size(); ++i) {
      double g = grad[i];
      mom.m[i] = b1 * mom.m[i] + (1.0 - b1) * g;
      mom.v[i] = b2 * mom.v[i] + (1.0 - b2) * g * g;
      double mhat = mom.m[i] / c1;
      double vhat = mom.v[i] / c2;
      val[i] = static_cast<T>(val[i] - lr * mhat / (std::sqrt(vhat) + options_.eps));
      grad[i] = T(0);
    }
  }
  return norm;
}

template class Adam<float>;
template class Adam<double>;

}  // namespace adacs::nn
