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

#include "adacs/model/normalizer.h"

#include <algorithm>
#include <stdexcept>

#include "adacs/nn/checkpoint.h"

namespace adacs::model {

template <typename T>
Normalizer<T>::Normalizer(const AdacsModel<T>& model, const text::Vocabulary& vocab)
    : model_(model), vocab_(vocab) {
  std::vector<std::string> none;
  set_bias_list(none);
}

template <typename T>
void Normalizer<T>::set_bias_list(std::span<const std::string> entries) {
  auto parsed = bam::make_entries(entries, vocab_);

  std::vector<int> ids;
  std::vector<nn::Range> segments;
  std::vector<const std::string*> pending;
  for (const auto& e : parsed) {
    if (cache_.count(e.text)) continue;
    if (std::find_if(pending.begin(), pending.end(),
                     [&](const std::string* p) { return *p == e.text; }) != pending.end()) {
      continue;
    }
    segments.push_back({static_cast<int>(ids.size()), static_cast<int>(e.ids.size())});
    ids.insert(ids.end(), e.ids.begin(), e.ids.end());
    pending.push_back(&e.text);
  }
  if (!pending.empty()) {
    nn::Graph<T> g(false);
    const auto& encoded = model_.encode(g, ids, segments).value();
    for (size_t i = 0; i < pending.size(); ++i) {
      nn::Tensor<T> rows(segments[i].length, encoded.cols());
      for (int r = 0; r < segments[i].length; ++r) {
        auto src = encoded.row(segments[i].start + r);
        std::copy(src.begin(), src.end(), rows.row(r).begin());
      }
      cache_.emplace(*pending[i], std::move(rows));
    }
  }

  const int d = model_.config().d_model;
  int total = 1;
  for (const auto& e : parsed) total += static_cast<int>(e.ids.size());
  bam::FrozenBank<T> bank;
  bank.encodings = nn::Tensor<T>(total, d);
  auto dummy = model_.dummy_entry->value.row(0);
  std::copy(dummy.begin(), dummy.end(), bank.encodings.row(0).begin());
  bank.segments.push_back({0, 1});
  int row = 1;
  for (const auto& e : parsed) {
    const auto& rows = cache_.at(e.text);
    bank.segments.push_back({row, rows.rows()});
    std::copy(rows.values().begin(), rows.values().end(), bank.encodings.row(row).begin());
    row += rows.rows();
  }
  nn::Graph<T> g(false);
  bank.pooled = nn::segment_mean(g.constant(bank.encodings), bank.segments).value();
  bank_ = std::move(bank);
}

template <typename T>
NormalizeResult Normalizer<T>::run(std::string_view sentence) const {
  NormalizeResult result;
  auto tokens = vocab_.encode(sentence);
  const int n = static_cast<int>(tokens.size());
  if (n == 0) return result;

  nn::Graph<T> g(false);
  auto bank = bank_.bind(g);
  std::vector<nn::Range> segments = {{0, n}};
  auto states = model_.encode(g, tokens, segments);
  auto tagged = model_.tag(g, states, bank);
  result.tags = bam::select_rows(tagged.logits.value());
  result.tag_bias = tagged.bias.indices;
  result.regions = trim_regions(extract_regions(result.tags), tokens);
  if (result.regions.empty()) {
    result.text = std::string(sentence);
    return result;
  }

  std::vector<int> memory_rows, budgets;
  std::vector<nn::Range> memory_segments;
  for (const auto& r : result.regions) {
    memory_segments.push_back({static_cast<int>(memory_rows.size()), r.length()});
    for (int t = r.start; t <= r.end; ++t) memory_rows.push_back(t);
    budgets.push_back(model_.decode_budget(r.length()));
  }
  auto memory = nn::gather_rows(states, memory_rows);
  auto decoded = model_.decode_greedy(g, memory, memory_segments, bank, budgets);

  auto cps = text::to_code_points(sentence);
  int pos = 0;
  for (size_t i = 0; i < result.regions.size(); ++i) {
    const auto& r = result.regions[i];
    std::string replacement = vocab_.decode(decoded[i].ids);
    auto first = replacement.find_first_not_of(' ');
    replacement = first == std::string::npos
                      ? std::string()
                      : replacement.substr(first, replacement.find_last_not_of(' ') - first + 1);
    result.text += text::to_utf8(std::span(cps).subspan(pos, r.start - pos));
    result.text += replacement;
    pos = r.end + 1;
    result.decoded.push_back(std::move(replacement));
    result.decoder_bias.push_back(decoded[i].bias_index);
    result.truncated.push_back(decoded[i].truncated);
  }
  result.text += text::to_utf8(std::span(cps).subspan(pos));
  return result;
}

template <typename T>
void save_model(const std::string& path, const AdacsModel<T>& model,
                const text::Vocabulary& vocab, const nlohmann::json& extra) {
  nlohmann::json config = {{"model", model.config().to_json()}, {"vocab", vocab.to_json()}};
  if (!extra.is_null()) config["extra"] = extra;
  nn::save_checkpoint(path, config, model.parameters());
}

template <typename T>
LoadedModel<T> load_model(const std::string& path) {
  auto header = nn::read_checkpoint_header(path);
  const auto& config = header.at("config");
  LoadedModel<T> out;
  out.vocab = text::Vocabulary::from_json(config.at("vocab"));
  out.model = std::make_unique<AdacsModel<T>>(ModelConfig::from_json(config.at("model")));
  if (out.model->config().vocab_size != out.vocab.size()) {
    throw std::runtime_error("checkpoint vocabulary size does not match its model config");
  }
  nn::load_checkpoint_parameters(path, out.model->parameters());
  out.extra = config.value("extra", nlohmann::json());
  return out;
}

#define ADACS_INSTANTIATE_NORMALIZER(T)                                                     \
  template class Normalizer<T>;                                                             \
  template void save_model(const std::string&, const AdacsModel<T>&, const text::Vocabulary&, \
                           const nlohmann::json&);                                          \
  template LoadedModel<T> load_model(const std::string&);

ADACS_INSTANTIATE_NORMALIZER(float)
ADACS_INSTANTIATE_NORMALIZER(double)

}  // namespace adacs::model
