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

#ifndef ADACS_EVAL_METRICS_H_
#define ADACS_EVAL_METRICS_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adacs/data/synth.h"
#include "json.hpp"

namespace adacs::eval {

enum class OpKind { kMatch, kSubstitute, kDelete, kInsert };

const char* op_name(OpKind kind);

// ref_index is -1 for insertions, hyp_index is -1 for deletions.
struct AlignmentOp {
  OpKind kind = OpKind::kMatch;
  int ref_index = -1;
  int hyp_index = -1;

  bool operator==(const AlignmentOp&) const = default;
};

// Minimal unit-cost alignment in reference order. Among optimal paths the
// backtrace prefers match, then substitution, deletion, insertion.
std::vector<AlignmentOp> levenshtein_align(std::span<const std::string> ref,
                                           std::span<const std::string> hyp);

// Whitespace tokenization.
std::vector<std::string> words_of(std::string_view text);

struct ErrorCounts {
  long substitutions = 0;
  long deletions = 0;
  long insertions = 0;
  long words = 0;  // reference words

  long errors() const { return substitutions + deletions + insertions; }
  // 0 when there are no reference words.
  double rate() const { return words == 0 ? 0.0 : static_cast<double>(errors()) / words; }
  ErrorCounts& operator+=(const ErrorCounts& o);
  bool operator==(const ErrorCounts&) const = default;
  nlohmann::ordered_json to_json() const;
};

// overall == cs + non_cs, component by component.
struct WerCounts {
  ErrorCounts overall;
  ErrorCounts cs;
  ErrorCounts non_cs;

  WerCounts& operator+=(const WerCounts& o);
  bool operator==(const WerCounts&) const = default;
};

// Scores `hyp` against the pair's reference. A reference word is CS if any
// of its characters lies in a span. Substitutions and deletions count for
// the reference word's category; an insertion counts for the following
// reference word, or the preceding one at the end. Throws
// std::invalid_argument for an empty reference.
WerCounts split_wer(const data::SpokenReferencePair& pair, std::string_view hyp);

// Exact-match span detection scores.
struct SpanCounts {
  long true_positives = 0;
  long false_positives = 0;
  long false_negatives = 0;

  double precision() const;
  double recall() const;
  double f1() const;
  SpanCounts& operator+=(const SpanCounts& o);
  nlohmann::ordered_json to_json() const;
};

template <typename Span>
SpanCounts match_spans(std::span<const Span> predicted, std::span<const Span> gold) {
  SpanCounts c;
  for (const auto& p : predicted) {
    bool hit = false;
    for (const auto& g : gold) hit |= p.start == g.start && p.end == g.end;
    hit ? ++c.true_positives : ++c.false_positives;
  }
  c.false_negatives = static_cast<long>(gold.size()) - c.true_positives;
  return c;
}

}  // namespace adacs::eval

#endif  // ADACS_EVAL_METRICS_H_
