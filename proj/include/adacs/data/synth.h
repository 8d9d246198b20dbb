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

// Synthetic code-switching corpus: a foreign-phrase lexicon, a letter-name
// spoken-form rule, carrier templates and spoken/reference pair generation.

#ifndef ADACS_DATA_SYNTH_H_
#define ADACS_DATA_SYNTH_H_

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adacs/text/vocab.h"
#include "json.hpp"

namespace adacs::data {

enum class Difficulty { kEasy, kHard };

std::string_view difficulty_name(Difficulty d);
Difficulty parse_difficulty(std::string_view name);

// Syllable for each letter a..z.
const std::array<std::string_view, 26>& letter_syllables();

// Letter-by-letter spoken rendering, syllables joined by single spaces.
// Word boundaries collapse into the same single space, so the spoken form
// does not say where words of a multi-word phrase begin. Throws
// std::invalid_argument for an empty phrase or characters outside a..z/space.
std::string spoken_form(std::string_view phrase);

// A code-switched span. Offsets are code points into the spoken string,
// half-open [start, end).
struct CsSpan {
  int start = 0;
  int end = 0;
  std::string phrase;
  bool operator==(const CsSpan&) const = default;
};

// Part of a span that renders one word of the phrase.
struct WordSpan {
  int start = 0;
  int end = 0;
  std::string word;
};

struct SpokenReferencePair {
  std::string spoken;
  std::string reference;
  std::vector<CsSpan> spans;  // spoken side, sorted and disjoint
  Difficulty difficulty = Difficulty::kEasy;

  // Substitutes every span's phrase into `spoken`.
  std::string apply_spans() const;
  // The same spans located in `reference`.
  std::vector<CsSpan> reference_spans() const;
  // Splits a span into per-word spoken sub-spans.
  std::vector<WordSpan> word_spans(const CsSpan& span) const;

  bool operator==(const SpokenReferencePair&) const = default;
};

// Carrier sentence with slot markers "[S]" or "[S<n>]".
struct Template {
  std::vector<std::string> tokens;

  static Template parse(std::string_view text);
  int slot_count() const;
  std::string str() const;
};

// Where phrases for slots come from: `secondary` is drawn with probability
// `secondary_prob` (used to leak a few train-visible phrases into tests).
struct PhrasePool {
  std::span<const std::string> primary;
  std::span<const std::string> secondary;
  double secondary_prob = 0.0;
};

struct PairOptions {
  int easy_min_phrases = 1;
  int easy_max_phrases = 2;
  int hard_min_phrases = 2;
  int hard_max_phrases = 4;
  int max_cs_words = 8;  // per pair, keeps small bias banks feasible
};

// Easy: 1-2 distinct phrases in separate slots. Hard: 2-4 distinct phrases
// back to back in the first slot. Unused slots are dropped.
SpokenReferencePair generate_pair(std::mt19937_64& rng, std::span<const Template> templates,
                                  const PhrasePool& pool, Difficulty difficulty,
                                  const PairOptions& options = {});

enum class LexiconSplit { kTrainVisible, kTestOnly };
enum class Domain { kGeneral, kMedical };

struct Lexicon {
  std::vector<std::string> phrases;
  std::vector<LexiconSplit> split;
  std::vector<Domain> domain;

  std::vector<std::string> select(Domain d, LexiconSplit s) const;
  nlohmann::json to_json() const;
};

struct LexiconConfig {
  int general_train = 2500;
  int general_test = 1200;
  int medical = 1200;
  int medical_roots = 40;
  // Probability of a 1, 2 or 3 word phrase.
  std::array<double, 3> word_count_weights = {0.5, 0.3, 0.2};
};

// Phrases are unique and so is their letter sequence with spaces removed,
// which keeps spoken_form injective over the lexicon.
Lexicon build_lexicon(const LexiconConfig& config, uint64_t seed);

struct SplitConfig {
  int train_pairs = 5000;
  int test_pairs = 500;
  int templates_per_split = 400;
  int min_carrier_words = 40;
  int max_carrier_words = 52;
  double number_token_prob = 0.04;
  double train_hard_fraction = 0.5;
  double test_seen_phrase_prob = 0.05;
  LexiconConfig lexicon;
  PairOptions pairs;

  static SplitConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct Splits {
  Lexicon lexicon;
  std::vector<SpokenReferencePair> train;
  std::vector<SpokenReferencePair> test_general;
  std::vector<SpokenReferencePair> test_medical;
};

// Desk-scale train/test construction. Test sets alternate easy and hard
// pairs and draw mostly from test-only phrases. Throws std::runtime_error if
// the unseen-phrase guarantee cannot be met.
Splits build_splits(const SplitConfig& config, uint64_t seed);

std::vector<Template> make_templates(std::mt19937_64& rng, int count, int min_words,
                                     int max_words, double number_prob);
const std::vector<std::string>& carrier_words();

// All CS phrases in `batch_items` (deduplicated, first occurrence order)
// plus uniformly drawn distinct distractors from `pool` up to target_size,
// then shuffled. If target_size is below the in-batch count this throws
// unless `truncate` is set, in which case only the in-batch items are kept.
std::vector<std::string> sample_bias_list(std::span<const std::string> batch_items,
                                          std::span<const std::string> pool, size_t target_size,
                                          std::mt19937_64& rng, bool truncate = false);

std::vector<std::string> split_words(std::string_view phrase);
// Distinct words of all phrases, in first occurrence order.
std::vector<std::string> distinct_words(std::span<const std::string> phrases);
// Distinct span phrases of a set of pairs, in first occurrence order.
std::vector<std::string> distinct_phrases(std::span<const SpokenReferencePair> pairs);

// Fraction of reference words that lie inside CS spans.
double cs_token_fraction(std::span<const SpokenReferencePair> pairs);
// Fraction of distinct test phrases that never occur in a train span.
double unseen_phrase_rate(std::span<const SpokenReferencePair> train,
                          std::span<const SpokenReferencePair> test);

// Seed for item `index` of stream `stream`, independent of generation order.
uint64_t derive_seed(uint64_t base, uint64_t stream, uint64_t index);

// Character vocabulary over both sides of every pair.
text::Vocabulary build_vocabulary(std::span<const SpokenReferencePair> pairs);

nlohmann::ordered_json pair_to_json(const SpokenReferencePair& pair);
SpokenReferencePair pair_from_json(const nlohmann::json& j);
void write_jsonl(const std::string& path, std::span<const SpokenReferencePair> pairs);
std::vector<SpokenReferencePair> read_jsonl(const std::string& path);
void write_string_list(const std::string& path, std::span<const std::string> items);
std::vector<std::string> read_string_list(const std::string& path);

}  // namespace adacs::data

#endif  // ADACS_DATA_SYNTH_H_
