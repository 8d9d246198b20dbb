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

#ifndef ADACS_NN_OPTIM_H_
#define ADACS_NN_OPTIM_H_

#include <map>
#include <string>
#include <vector>

#include "adacs/nn/graph.h"

namespace adacs::nn {

struct AdamOptions {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double clip_norm = 1.0;  // <= 0 disables clipping
};

// Adam with global-norm gradient clipping. Moment buffers are keyed by
// parameter path and visited in sorted order, so updates are deterministic.
template <typename T>
class Adam {
 public:
  explicit Adam(AdamOptions options = {}) : options_(options) {}

  // Clips, applies one update and zeroes gradients. Returns the gradient
  // norm before clipping.
  double step(ParameterStore<T>& store);
  // Same with an explicit learning rate for this step (schedules).
  double step(ParameterStore<T>& store, double lr);

  long steps() const { return steps_; }
  const AdamOptions& options() const { return options_; }

 private:
  struct Moments {
    std::vector<double> m, v;
  };
  AdamOptions options_;
  long steps_ = 0;
  std::map<std::string, Moments> moments_;
};

}  // namespace adacs::nn

#endif  // ADACS_NN_OPTIM_H_
