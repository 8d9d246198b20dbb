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

// Checkpoint layout:
//
//   <header JSON on one line>\n<float32 little-endian payload>
//
// The header is {"version": 1, "config": {...}, "parameters": [{"name",
// "shape": [rows, cols], "offset": <byte offset into payload>}, ...]} with
// parameters in sorted path order; the payload holds them back to back.

#ifndef ADACS_NN_CHECKPOINT_H_
#define ADACS_NN_CHECKPOINT_H_

#include <string>

#include "adacs/nn/graph.h"
#include "json.hpp"

namespace adacs::nn {

inline constexpr int kCheckpointVersion = 1;

template <typename T>
void save_checkpoint(const std::string& path, const nlohmann::json& config,
                     const ParameterStore<T>& store);

// Reads only the header line.
nlohmann::json read_checkpoint_header(const std::string& path);

// Loads values into an already-constructed store. Every stored parameter
// must exist with the same shape and vice versa.
template <typename T>
void load_checkpoint_parameters(const std::string& path, ParameterStore<T>& store);

}  // namespace adacs::nn

#endif  // ADACS_NN_CHECKPOINT_H_
