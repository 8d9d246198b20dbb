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

#ifndef ADACS_TEXT_VOCAB_H_
#define ADACS_TEXT_VOCAB_H_

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace adacs::text {

// Special token ids. Fixed regardless of corpus.
inline constexpr int kPad = 0;
inline constexpr int kBos = 1;
inline constexpr int kEos = 2;
inline constexpr int kUnk = 3;
inline constexpr int kWordSep = 4;
inline constexpr int kNumSpecials = 5;

using TokenSeq = std::vector<int>;

// Splits UTF-8 text into code points. Invalid bytes are passed through as
// single-byte code points so offsets stay aligned with the input.
std::vector<char32_t> to_code_points(std::string_view text);
std::string to_utf8(char32_t cp);
std::string to_utf8(std::span<const char32_t> cps);

// Character-level vocabulary. Spaces are not ordinary tokens: they map to
// WORD_SEP so multi-word spans keep their word boundaries inside the model.
class Vocabulary {
 public:
  Vocabulary() = default;

  // Specials first, then every distinct non-space code point of the corpus
  // sorted by value. Throws std::invalid_argument on an empty corpus.
  static Vocabulary build(std::span<const std::string> corpus);

  static Vocabulary from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  int size() const { return static_cast<int>(id_to_token_.size()); }

  // Id of a single code point; UNK if absent, WORD_SEP for ' '.
  int id(char32_t cp) const;
  const std::string& token(int id) const;

  TokenSeq encode(std::string_view text) const;

  // Throws std::out_of_range for ids outside [0, size()).
  std::string decode(std::span<const int> ids) const;

  bool operator==(const Vocabulary& other) const {
    return id_to_token_ == other.id_to_token_;
  }

 private:
  void index();

  std::vector<std::string> id_to_token_;
  std::vector<char32_t> id_to_cp_;  // 0 for specials
  std::unordered_map<char32_t, int> cp_to_id_;
};

// Names used for the specials in serialized vocabularies.
const std::vector<std::string>& special_token_names();

}  // namespace adacs::text

#endif  // ADACS_TEXT_VOCAB_H_
