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

#include "adacs/model/labels.h"

#include <stdexcept>
#include <unordered_set>

namespace adacs::model {

std::vector<Region> extract_regions(std::span<const int> tags) {
  std::vector<Region> out;
  bool open = false;
  for (int i = 0; i < static_cast<int>(tags.size()); ++i) {
    switch (tags[i]) {
      case kTagB:
        out.push_back({i, i, 0, {}});
        open = true;
        break;
      case kTagI:
        if (open) {
          out.back().end = i;
        } else {
          out.push_back({i, i, 0, {}});
          open = true;
        }
        break;
      case kTagO:
        open = false;
        break;
      default:
        throw std::invalid_argument("extract_regions: tag " + std::to_string(tags[i]) +
                                    " is not B, I or O");
    }
  }
  return out;
}

TagSequence tags_from_regions(std::span<const Region> regions, int n) {
  TagSequence tags(n, kTagO);
  for (const auto& r : regions) {
    if (r.start < 0 || r.end < r.start || r.end >= n) {
      throw std::out_of_range("tags_from_regions: region outside sequence");
    }
    tags[r.start] = kTagB;
    for (int i = r.start + 1; i <= r.end; ++i) tags[i] = kTagI;
  }
  return tags;
}

TagSequence parse_tags(std::string_view bio) {
  TagSequence out;
  for (char c : bio) {
    switch (c) {
      case 'B': out.push_back(kTagB); break;
      case 'I': out.push_back(kTagI); break;
      case 'O': out.push_back(kTagO); break;
      case ' ': break;
      default: throw std::invalid_argument(std::string("parse_tags: bad tag '") + c + "'");
    }
  }
  return out;
}

std::string tags_to_string(std::span<const int> tags) {
  static constexpr char kNames[] = {'B', 'I', 'O'};
  std::string out;
  for (int t : tags) {
    if (t < 0 || t >= kNumTags) throw std::invalid_argument("tags_to_string: bad tag");
    out.push_back(kNames[t]);
  }
  return out;
}

std::vector<Region> trim_regions(std::span<const Region> regions, std::span<const int> tokens) {
  std::vector<Region> out;
  for (Region r : regions) {
    while (r.start <= r.end && tokens[r.start] == text::kWordSep) ++r.start;
    while (r.end >= r.start && tokens[r.end] == text::kWordSep) --r.end;
    if (r.start <= r.end) out.push_back(std::move(r));
  }
  return out;
}

std::string_view bias_mode_name(BiasMode mode) {
  switch (mode) {
    case BiasMode::kNone: return "none";
    case BiasMode::kWords: return "words";
    case BiasMode::kPhrases: return "phrases";
  }
  return "none";
}

BiasMode parse_bias_mode(std::string_view name) {
  if (name == "none") return BiasMode::kNone;
  if (name == "words") return BiasMode::kWords;
  if (name == "phrases") return BiasMode::kPhrases;
  throw std::invalid_argument("unknown bias mode '" + std::string(name) + "'");
}

std::vector<std::string> bias_items(std::span<const data::SpokenReferencePair> pairs,
                                    BiasMode mode) {
  if (mode == BiasMode::kNone) return {};
  auto phrases = data::distinct_phrases(pairs);
  return mode == BiasMode::kWords ? data::distinct_words(phrases) : phrases;
}

BankIndex make_bank_index(std::span<const std::string> entries) {
  BankIndex index;
  for (size_t i = 0; i < entries.size(); ++i) index.emplace(entries[i], static_cast<int>(i) + 1);
  return index;
}

std::vector<LabelUnit> label_units(const data::SpokenReferencePair& pair, const BankIndex& bank) {
  std::vector<LabelUnit> units;
  const auto& spans = pair.spans;
  size_t i = 0;
  while (i < spans.size()) {
    // Chain of spans separated by exactly one character.
    size_t j = i + 1;
    while (j < spans.size() && spans[j].start == spans[j - 1].end + 1) ++j;

    bool pending = false;  // last unit is an open unmatched run
    for (size_t s = i; s < j; ++s) {
      auto words = pair.word_spans(spans[s]);
      size_t w = 0;
      while (w < words.size()) {
        size_t best_end = 0;
        int best_label = 0;
        std::string best_text;
        for (size_t e = words.size(); e > w; --e) {
          std::string candidate = words[w].word;
          for (size_t k = w + 1; k < e; ++k) candidate += " " + words[k].word;
          auto it = bank.find(candidate);
          if (it != bank.end()) {
            best_end = e;
            best_label = it->second;
            best_text = std::move(candidate);
            break;
          }
        }
        if (best_end > 0) {
          units.push_back({words[w].start, words[best_end - 1].end, best_text, best_label});
          pending = false;
          w = best_end;
        } else {
          if (pending) {
            units.back().end = words[w].end;
            units.back().text += " " + words[w].word;
          } else {
            units.push_back({words[w].start, words[w].end, words[w].word, 0});
            pending = true;
          }
          ++w;
        }
      }
    }
    i = j;
  }
  return units;
}

TrainingExample make_example(const data::SpokenReferencePair& pair, const text::Vocabulary& vocab,
                             const BankIndex& bank) {
  TrainingExample ex;
  ex.tokens = vocab.encode(pair.spoken);
  const int n = static_cast<int>(ex.tokens.size());
  ex.tags.assign(n, kTagO);
  ex.enc_rank.assign(n, 0);
  auto units = label_units(pair, bank);
  for (size_t u = 0; u < units.size(); ++u) {
    const auto& unit = units[u];
    if (unit.start < 0 || unit.end > n || unit.end <= unit.start) {
      throw std::invalid_argument("make_example: span outside the spoken text");
    }
    ex.tags[unit.start] = kTagB;
    for (int t = unit.start; t < unit.end; ++t) {
      if (t > unit.start) ex.tags[t] = kTagI;
      ex.enc_rank[t] = unit.bias_label;
    }
    if (u + 1 < units.size() && units[u + 1].start == unit.end + 1) {
      ex.tags[unit.end] = kTagI;
      ex.enc_rank[unit.end] = unit.bias_label;
    }
    ex.regions.push_back({unit.start, unit.end - 1, unit.bias_label, vocab.encode(unit.text)});
  }
  return ex;
}

}  // namespace adacs::model
