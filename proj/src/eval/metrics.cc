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

#include "adacs/eval/metrics.h"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "adacs/text/vocab.h"

namespace adacs::eval {

const char* op_name(OpKind kind) {
  switch (kind) {
    case OpKind::kMatch: return "match";
    case OpKind::kSubstitute: return "substitute";
    case OpKind::kDelete: return "delete";
    case OpKind::kInsert: return "insert";
  }
  return "?";
}

std::vector<AlignmentOp> levenshtein_align(std::span<const std::string> ref,
                                           std::span<const std::string> hyp) {
  const size_t n = ref.size(), m = hyp.size();
  // dist[i][j]: edits turning ref[0, i) into hyp[0, j).
  std::vector<std::vector<int>> dist(n + 1, std::vector<int>(m + 1));
  for (size_t i = 0; i <= n; ++i) dist[i][0] = static_cast<int>(i);
  for (size_t j = 0; j <= m; ++j) dist[0][j] = static_cast<int>(j);
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      int diag = dist[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      dist[i][j] = std::min({diag, dist[i - 1][j] + 1, dist[i][j - 1] + 1});
    }
  }

  std::vector<AlignmentOp> ops;
  ops.reserve(std::max(n, m));
  size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const int here = dist[i][j];
    const int ri = static_cast<int>(i) - 1, hj = static_cast<int>(j) - 1;
    if (i > 0 && j > 0 && ref[i - 1] == hyp[j - 1] && dist[i - 1][j - 1] == here) {
      ops.push_back({OpKind::kMatch, ri, hj});
      --i, --j;
    } else if (i > 0 && j > 0 && dist[i - 1][j - 1] + 1 == here) {
      ops.push_back({OpKind::kSubstitute, ri, hj});
      --i, --j;
    } else if (i > 0 && dist[i - 1][j] + 1 == here) {
      ops.push_back({OpKind::kDelete, ri, -1});
      --i;
    } else {
      ops.push_back({OpKind::kInsert, -1, hj});
      --j;
    }
  }
  std::reverse(ops.begin(), ops.end());
  return ops;
}

std::vector<std::string> words_of(std::string_view text) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

ErrorCounts& ErrorCounts::operator+=(const ErrorCounts& o) {
  substitutions += o.substitutions;
  deletions += o.deletions;
  insertions += o.insertions;
  words += o.words;
  return *this;
}

nlohmann::ordered_json ErrorCounts::to_json() const {
  return {{"substitutions", substitutions},
          {"deletions", deletions},
          {"insertions", insertions},
          {"words", words},
          {"wer", rate()}};
}

WerCounts& WerCounts::operator+=(const WerCounts& o) {
  overall += o.overall;
  cs += o.cs;
  non_cs += o.non_cs;
  return *this;
}

WerCounts split_wer(const data::SpokenReferencePair& pair, std::string_view hyp) {
  // Reference words with their code-point extents.
  const auto cps = text::to_code_points(pair.reference);
  const auto spans = pair.reference_spans();
  std::vector<std::string> ref;
  std::vector<bool> is_cs;
  for (int i = 0, n = static_cast<int>(cps.size()); i < n;) {
    while (i < n && cps[i] == U' ') ++i;
    int j = i;
    while (j < n && cps[j] != U' ') ++j;
    if (j > i) {
      ref.push_back(text::to_utf8(std::span(cps).subspan(i, j - i)));
      bool cs = false;
      for (const auto& s : spans) cs |= s.start < j && i < s.end;
      is_cs.push_back(cs);
    }
    i = j;
  }
  if (ref.empty()) throw std::invalid_argument("split_wer: empty reference");

  WerCounts out;
  auto bucket = [&](int ref_index) -> ErrorCounts& {
    return is_cs[ref_index] ? out.cs : out.non_cs;
  };
  for (size_t k = 0; k < ref.size(); ++k) ++bucket(static_cast<int>(k)).words;

  const auto hyp_words = words_of(hyp);
  const auto ops = levenshtein_align(ref, hyp_words);
  for (size_t k = 0; k < ops.size(); ++k) {
    const auto& op = ops[k];
    switch (op.kind) {
      case OpKind::kMatch: break;
      case OpKind::kSubstitute: ++bucket(op.ref_index).substitutions; break;
      case OpKind::kDelete: ++bucket(op.ref_index).deletions; break;
      case OpKind::kInsert: {
        int owner = -1;
        for (size_t f = k + 1; f < ops.size() && owner < 0; ++f) owner = ops[f].ref_index;
        for (size_t b = k; b-- > 0 && owner < 0;) owner = ops[b].ref_index;
        ++bucket(owner).insertions;
        break;
      }
    }
  }
  out.overall = out.cs;
  out.overall += out.non_cs;
  return out;
}

double SpanCounts::precision() const {
  long p = true_positives + false_positives;
  return p == 0 ? 1.0 : static_cast<double>(true_positives) / p;
}

double SpanCounts::recall() const {
  long g = true_positives + false_negatives;
  return g == 0 ? 1.0 : static_cast<double>(true_positives) / g;
}

double SpanCounts::f1() const {
  double p = precision(), r = recall();
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

SpanCounts& SpanCounts::operator+=(const SpanCounts& o) {
  true_positives += o.true_positives;
  false_positives += o.false_positives;
  false_negatives += o.false_negatives;
  return *this;
}

nlohmann::ordered_json SpanCounts::to_json() const {
  return {{"true_positives", true_positives},
          {"false_positives", false_positives},
          {"false_negatives", false_negatives},
          {"precision", precision()},
          {"recall", recall()},
          {"f1", f1()}};
}

}  // namespace adacs::eval
