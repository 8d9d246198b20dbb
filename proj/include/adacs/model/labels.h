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

// BIO tags, tagged regions and the construction of supervised examples
// from a spoken/reference pair and a bias list.

#ifndef ADACS_MODEL_LABELS_H_
#define ADACS_MODEL_LABELS_H_

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "adacs/data/synth.h"
#include "adacs/text/vocab.h"

namespace adacs::model {

enum Tag : int { kTagB = 0, kTagI = 1, kTagO = 2 };
constexpr int kNumTags = 3;

using TagSequence = std::vector<int>;

// Inclusive token range [start, end].
struct Region {
  int start = 0;
  int end = 0;
  int bias_label = 0;
  text::TokenSeq target_ids;  // training only, without EOS

  int length() const { return end - start + 1; }
  bool operator==(const Region&) const = default;
};

// Maximal runs opened by B, or by an I that follows O or the start, and
// continued by I. Throws std::invalid_argument for values outside B/I/O.
std::vector<Region> extract_regions(std::span<const int> tags);
// Canonical tags for regions over n tokens: B then I within each region.
TagSequence tags_from_regions(std::span<const Region> regions, int n);
TagSequence parse_tags(std::string_view bio);
std::string tags_to_string(std::span<const int> tags);

// Shrinks each region past WORD_SEP tokens at its edges, dropping regions
// that become empty.
std::vector<Region> trim_regions(std::span<const Region> regions, std::span<const int> tokens);

enum class BiasMode { kNone, kWords, kPhrases };
std::string_view bias_mode_name(BiasMode mode);
BiasMode parse_bias_mode(std::string_view name);

// Bias items a pair contributes: nothing, its span phrases split into
// words, or its span phrases. Distinct, in order of appearance.
std::vector<std::string> bias_items(std::span<const data::SpokenReferencePair> pairs,
                                    BiasMode mode);

// Entry text -> bank index (1-based; the dummy is 0). First occurrence wins.
using BankIndex = std::unordered_map<std::string, int>;
BankIndex make_bank_index(std::span<const std::string> entries);

// A stretch of spoken text that should be rewritten as `text`. Offsets are
// code points, half-open.
struct LabelUnit {
  int start = 0;
  int end = 0;
  std::string text;
  int bias_label = 0;
};

// Splits every chain of adjacent spans (one space apart) into units: a
// greedy longest match of the span's words against the bank gives one unit
// per matched entry; unmatched words form units with label 0, merged with
// unmatched neighbours across the whole chain.
std::vector<LabelUnit> label_units(const data::SpokenReferencePair& pair, const BankIndex& bank);

struct TrainingExample {
  text::TokenSeq tokens;
  TagSequence tags;
  std::vector<int> enc_rank;    // per token
  std::vector<Region> regions;  // with bias_label and target_ids
};

// Tags: B/I over each unit, I on the single space joining two adjacent
// units, O elsewhere. Tokens inside a unit (and a joining space) carry the
// unit's bias label, all others 0.
TrainingExample make_example(const data::SpokenReferencePair& pair, const text::Vocabulary& vocab,
                             const BankIndex& bank);

}  // namespace adacs::model

#endif  // ADACS_MODEL_LABELS_H_
