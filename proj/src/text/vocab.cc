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

#include "adacs/text/vocab.h"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace adacs::text {

const std::vector<std::string>& special_token_names() {
  static const std::vector<std::string> names = {"<pad>", "<bos>", "<eos>",
                                                 "<unk>", "<sep>"};
  return names;
}

std::vector<char32_t> to_code_points(std::string_view text) {
  std::vector<char32_t> out;
  out.reserve(text.size());
  size_t i = 0;
  while (i < text.size()) {
    auto c = static_cast<unsigned char>(text[i]);
    int extra = 0;
    char32_t cp = c;
    if (c >= 0xF0 && c < 0xF8) {
      extra = 3;
      cp = c & 0x07;
    } else if (c >= 0xE0) {
      extra = 2;
      cp = c & 0x0F;
    } else if (c >= 0xC0) {
      extra = 1;
      cp = c & 0x1F;
    }
    if (c >= 0xF8 || (c >= 0x80 && c < 0xC0) || i + extra >= text.size()) {
      out.push_back(c);
      ++i;
      continue;
    }
    bool ok = true;
    for (int k = 1; k <= extra; ++k) {
      auto cc = static_cast<unsigned char>(text[i + k]);
      if ((cc & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (!ok) {
      out.push_back(c);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

std::string to_utf8(char32_t cp) {
  std::string out;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
  return out;
}

std::string to_utf8(std::span<const char32_t> cps) {
  std::string out;
  for (char32_t cp : cps) out += to_utf8(cp);
  return out;
}

Vocabulary Vocabulary::build(std::span<const std::string> corpus) {
  if (corpus.empty()) throw std::invalid_argument("build_vocab: empty corpus");
  std::set<char32_t> chars;
  for (const auto& line : corpus) {
    for (char32_t cp : to_code_points(line)) {
      if (cp != U' ') chars.insert(cp);
    }
  }
  Vocabulary v;
  v.id_to_token_ = special_token_names();
  for (char32_t cp : chars) v.id_to_token_.push_back(to_utf8(cp));
  v.index();
  return v;
}

void Vocabulary::index() {
  cp_to_id_.clear();
  id_to_cp_.assign(id_to_token_.size(), 0);
  for (int i = kNumSpecials; i < size(); ++i) {
    auto cps = to_code_points(id_to_token_[i]);
    if (cps.size() != 1) {
      throw std::invalid_argument("vocabulary token is not a single character: " +
                                  id_to_token_[i]);
    }
    if (!cp_to_id_.emplace(cps[0], i).second) {
      throw std::invalid_argument("duplicate vocabulary token: " + id_to_token_[i]);
    }
    id_to_cp_[i] = cps[0];
  }
}

Vocabulary Vocabulary::from_json(const nlohmann::json& j) {
  auto specials = j.at("specials").get<std::vector<std::string>>();
  if (specials != special_token_names()) {
    throw std::invalid_argument("vocabulary: unexpected specials");
  }
  Vocabulary v;
  v.id_to_token_ = specials;
  for (const auto& t : j.at("tokens")) v.id_to_token_.push_back(t.get<std::string>());
  v.index();
  return v;
}

nlohmann::json Vocabulary::to_json() const {
  nlohmann::json j;
  j["specials"] = special_token_names();
  j["tokens"] = std::vector<std::string>(id_to_token_.begin() + kNumSpecials,
                                         id_to_token_.end());
  return j;
}

int Vocabulary::id(char32_t cp) const {
  if (cp == U' ') return kWordSep;
  auto it = cp_to_id_.find(cp);
  return it == cp_to_id_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::token(int id) const {
  if (id < 0 || id >= size()) throw std::out_of_range("token id out of range");
  return id_to_token_[id];
}

TokenSeq Vocabulary::encode(std::string_view text) const {
  TokenSeq out;
  for (char32_t cp : to_code_points(text)) out.push_back(id(cp));
  return out;
}

std::string Vocabulary::decode(std::span<const int> ids) const {
  std::string out;
  for (int id : ids) {
    if (id < 0 || id >= size()) {
      throw std::out_of_range("decode: id " + std::to_string(id) +
                              " outside vocabulary of size " +
                              std::to_string(size()));
    }
    if (id == kWordSep) {
      out.push_back(' ');
    } else if (id >= kNumSpecials) {
      out += id_to_token_[id];
    }
  }
  return out;
}

}  // namespace adacs::text
