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

#ifndef ADACS_MODEL_NORMALIZER_H_
#define ADACS_MODEL_NORMALIZER_H_

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adacs/model/adacs.h"
#include "json.hpp"

namespace adacs::model {

struct NormalizeResult {
  std::string text;
  TagSequence tags;
  std::vector<int> tag_bias;           // encoder-side selection per token
  std::vector<Region> regions;         // trimmed, as decoded
  std::vector<std::string> decoded;    // replacement per region
  std::vector<int> decoder_bias;       // decoder-side selection per region
  std::vector<bool> truncated;
};

// Inference over a frozen model. Bias entry encodings are cached by text;
// an entry's encoding depends only on its own tokens. The cache must be
// cleared after parameters change.
template <typename T>
class Normalizer {
 public:
  Normalizer(const AdacsModel<T>& model, const text::Vocabulary& vocab);

  // Replaces the bias list; entry i becomes bank index i + 1.
  void set_bias_list(std::span<const std::string> entries);
  const bam::FrozenBank<T>& bank() const { return bank_; }
  void clear_cache() { cache_.clear(); }

  // Tag, extract and trim regions, decode each and splice the results over
  // the region's characters. Text outside regions is copied unchanged.
  NormalizeResult run(std::string_view sentence) const;
  std::string normalize(std::string_view sentence) const { return run(sentence).text; }

 private:
  const AdacsModel<T>& model_;
  const text::Vocabulary& vocab_;
  bam::FrozenBank<T> bank_;
  std::map<std::string, nn::Tensor<T>> cache_;
};

// Writes parameters (as float32) with the model config and vocabulary in
// the checkpoint header. `extra` is stored under "extra".
template <typename T>
void save_model(const std::string& path, const AdacsModel<T>& model,
                const text::Vocabulary& vocab, const nlohmann::json& extra = {});

template <typename T>
struct LoadedModel {
  std::unique_ptr<AdacsModel<T>> model;
  text::Vocabulary vocab;
  nlohmann::json extra;
};

template <typename T>
LoadedModel<T> load_model(const std::string& path);

}  // namespace adacs::model

#endif  // ADACS_MODEL_NORMALIZER_H_
