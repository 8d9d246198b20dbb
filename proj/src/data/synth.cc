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

#include "adacs/data/synth.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "adacs/text/vocab.h"

namespace adacs::data {
namespace {

constexpr std::array<std::string_view, 26> kSyllables = {
    "ay", "bi", "si", "di", "i",  "ep",  "gi", "hat", "ai", "gie", "ca", "el",  "em",
    "en", "ou", "pi", "kiu", "ar", "es", "ti", "yu",  "vi", "we",  "ik", "wai", "zet"};

int cp_length(std::string_view s) {
  int n = 0;
  for (unsigned char c : s) n += (c & 0xC0) != 0x80;
  return n;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out.push_back(' ');
    out += p;
  }
  return out;
}

std::string squash(std::string_view phrase) {
  std::string out;
  for (char c : phrase)
    if (c != ' ') out.push_back(c);
  return out;
}

// Pronounceable letter string of the given length.
std::string random_word(std::mt19937_64& rng, int length) {
  static constexpr std::string_view kVowels = "aeiouy";
  static constexpr std::string_view kConsonants = "bcdfghjklmnpqrstvwxz";
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::string w;
  bool vowel = u(rng) < 0.3;
  for (int i = 0; i < length; ++i) {
    auto set = vowel ? kVowels : kConsonants;
    w.push_back(set[std::uniform_int_distribution<size_t>(0, set.size() - 1)(rng)]);
    vowel = vowel ? u(rng) < 0.2 : u(rng) < 0.75;
  }
  return w;
}

int draw_word_count(std::mt19937_64& rng, const std::array<double, 3>& weights) {
  std::discrete_distribution<int> d(weights.begin(), weights.end());
  return d(rng) + 1;
}

}  // namespace

std::string_view difficulty_name(Difficulty d) { return d == Difficulty::kEasy ? "easy" : "hard"; }

Difficulty parse_difficulty(std::string_view name) {
  if (name == "easy") return Difficulty::kEasy;
  if (name == "hard") return Difficulty::kHard;
  throw std::invalid_argument("unknown difficulty '" + std::string(name) + "'");
}

const std::array<std::string_view, 26>& letter_syllables() { return kSyllables; }

std::string spoken_form(std::string_view phrase) {
  if (phrase.empty()) throw std::invalid_argument("spoken_form: empty phrase");
  std::string out;
  for (char c : phrase) {
    if (c == ' ') continue;
    if (c < 'a' || c > 'z') {
      throw std::invalid_argument("spoken_form: character outside a..z in '" +
                                  std::string(phrase) + "'");
    }
    if (!out.empty()) out.push_back(' ');
    out += kSyllables[c - 'a'];
  }
  if (out.empty()) throw std::invalid_argument("spoken_form: phrase has no letters");
  return out;
}

std::string SpokenReferencePair::apply_spans() const {
  auto cps = text::to_code_points(spoken);
  std::string out;
  int pos = 0;
  for (const auto& s : spans) {
    if (s.start < pos || s.end < s.start || s.end > static_cast<int>(cps.size())) {
      throw std::invalid_argument("spans must be sorted, disjoint and in range");
    }
    out += text::to_utf8(std::span(cps).subspan(pos, s.start - pos));
    out += s.phrase;
    pos = s.end;
  }
  out += text::to_utf8(std::span(cps).subspan(pos));
  return out;
}

std::vector<CsSpan> SpokenReferencePair::reference_spans() const {
  std::vector<CsSpan> out;
  int delta = 0;
  for (const auto& s : spans) {
    int len = cp_length(s.phrase);
    out.push_back({s.start + delta, s.start + delta + len, s.phrase});
    delta += len - (s.end - s.start);
  }
  return out;
}

std::vector<WordSpan> SpokenReferencePair::word_spans(const CsSpan& span) const {
  std::vector<WordSpan> out;
  int pos = span.start;
  for (auto& word : split_words(span.phrase)) {
    int start = pos;
    for (size_t i = 0; i < word.size(); ++i) {
      if (i > 0) ++pos;  // separating space
      pos += static_cast<int>(kSyllables.at(word[i] - 'a').size());
    }
    out.push_back({start, pos, std::move(word)});
    ++pos;
  }
  return out;
}

Template Template::parse(std::string_view text) {
  Template t;
  std::istringstream in{std::string(text)};
  for (std::string tok; in >> tok;) t.tokens.push_back(tok);
  return t;
}

int Template::slot_count() const {
  return static_cast<int>(std::count_if(tokens.begin(), tokens.end(), [](const std::string& t) {
    return t.size() >= 3 && t.front() == '[' && t[1] == 'S' && t.back() == ']';
  }));
}

std::string Template::str() const { return join(tokens); }

SpokenReferencePair generate_pair(std::mt19937_64& rng, std::span<const Template> templates,
                                  const PhrasePool& pool, Difficulty difficulty,
                                  const PairOptions& options) {
  if (templates.empty()) throw std::invalid_argument("generate_pair: no templates");
  if (pool.primary.empty()) throw std::invalid_argument("generate_pair: empty phrase pool");
  const auto& tpl =
      templates[std::uniform_int_distribution<size_t>(0, templates.size() - 1)(rng)];
  const int slots = tpl.slot_count();
  if (slots == 0) throw std::invalid_argument("generate_pair: template has no slots");

  const bool hard = difficulty == Difficulty::kHard;
  int lo = hard ? options.hard_min_phrases : options.easy_min_phrases;
  int hi = hard ? options.hard_max_phrases : options.easy_max_phrases;
  int count = std::uniform_int_distribution<int>(lo, hi)(rng);
  if (!hard) count = std::min(count, slots);

  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto draw = [&]() -> const std::string& {
    auto src = (!pool.secondary.empty() && u(rng) < pool.secondary_prob) ? pool.secondary
                                                                         : pool.primary;
    return src[std::uniform_int_distribution<size_t>(0, src.size() - 1)(rng)];
  };
  std::vector<std::string> chosen;
  int budget = options.max_cs_words;
  for (int i = 0; i < count; ++i) {
    int reserve = count - i - 1;
    bool ok = false;
    for (int attempt = 0; attempt < 1000 && !ok; ++attempt) {
      const auto& p = draw();
      int words = static_cast<int>(split_words(p).size());
      if (words > budget - reserve) continue;
      if (std::find(chosen.begin(), chosen.end(), p) != chosen.end()) continue;
      chosen.push_back(p);
      budget -= words;
      ok = true;
    }
    if (!ok) throw std::runtime_error("generate_pair: phrase pool exhausted");
  }

  SpokenReferencePair pair;
  pair.difficulty = difficulty;
  int spoken_pos = 0;
  auto append = [&](std::string& dst, const std::string& s) {
    if (!dst.empty()) dst.push_back(' ');
    dst += s;
  };
  auto append_spoken = [&](const std::string& s) {
    if (!pair.spoken.empty()) ++spoken_pos;
    append(pair.spoken, s);
    int start = spoken_pos;
    spoken_pos += cp_length(s);
    return start;
  };
  int slot = 0;
  size_t next = 0;
  for (const auto& tok : tpl.tokens) {
    bool is_slot = tok.size() >= 3 && tok.front() == '[' && tok[1] == 'S' && tok.back() == ']';
    if (!is_slot) {
      append_spoken(tok);
      append(pair.reference, tok);
      continue;
    }
    size_t take = hard ? (slot == 0 ? chosen.size() : 0) : (next < chosen.size() ? 1 : 0);
    for (size_t k = 0; k < take; ++k, ++next) {
      const auto& phrase = chosen[next];
      int start = append_spoken(spoken_form(phrase));
      pair.spans.push_back({start, spoken_pos, phrase});
      append(pair.reference, phrase);
    }
    ++slot;
  }
  return pair;
}

std::vector<std::string> Lexicon::select(Domain d, LexiconSplit s) const {
  std::vector<std::string> out;
  for (size_t i = 0; i < phrases.size(); ++i)
    if (domain[i] == d && split[i] == s) out.push_back(phrases[i]);
  return out;
}

nlohmann::json Lexicon::to_json() const {
  return {{"general_train", select(Domain::kGeneral, LexiconSplit::kTrainVisible)},
          {"general_test", select(Domain::kGeneral, LexiconSplit::kTestOnly)},
          {"medical", select(Domain::kMedical, LexiconSplit::kTestOnly)}};
}

Lexicon build_lexicon(const LexiconConfig& config, uint64_t seed) {
  std::mt19937_64 rng(seed);
  Lexicon lex;
  std::unordered_set<std::string> keys;  // letter sequences already used

  auto add_phrases = [&](int n, Domain domain, LexiconSplit split, auto&& make_word) {
    int attempts = 0;
    while (n > 0) {
      if (++attempts > 1000000) throw std::runtime_error("build_lexicon: cannot find unique phrases");
      int words = draw_word_count(rng, config.word_count_weights);
      std::vector<std::string> parts;
      while (static_cast<int>(parts.size()) < words) {
        auto w = make_word();
        if (std::find(parts.begin(), parts.end(), w) == parts.end()) parts.push_back(w);
      }
      auto phrase = join(parts);
      if (!keys.insert(squash(phrase)).second) continue;
      lex.phrases.push_back(phrase);
      lex.domain.push_back(domain);
      lex.split.push_back(split);
      --n;
    }
  };

  auto general_word = [&] { return random_word(rng, std::uniform_int_distribution<int>(3, 10)(rng)); };
  add_phrases(config.general_train, Domain::kGeneral, LexiconSplit::kTrainVisible, general_word);
  add_phrases(config.general_test, Domain::kGeneral, LexiconSplit::kTestOnly, general_word);

  static const std::vector<std::string> kSuffixes = {
      "in", "ol", "ine", "ase", "itis", "oma", "ide", "ate", "um", "ex", "yl", "ax", "osis", "ic"};
  std::vector<std::string> roots;
  for (int i = 0; i < config.medical_roots; ++i) {
    roots.push_back(random_word(rng, std::uniform_int_distribution<int>(3, 6)(rng)));
  }
  auto medical_word = [&] {
    const auto& root = roots[std::uniform_int_distribution<size_t>(0, roots.size() - 1)(rng)];
    std::string w;
    do {
      w = root + kSuffixes[std::uniform_int_distribution<size_t>(0, kSuffixes.size() - 1)(rng)];
    } while (w.size() > 10);
    return w;
  };
  if (config.medical > 0 && roots.empty()) {
    throw std::invalid_argument("build_lexicon: medical phrases need at least one root");
  }
  add_phrases(config.medical, Domain::kMedical, LexiconSplit::kTestOnly, medical_word);
  return lex;
}

const std::vector<std::string>& carrier_words() {
  static const std::vector<std::string> words = [] {
    static const char* kRaw[] = {
        "toi",   "ban",  "chung", "ta",    "la",    "mot",   "cua",   "nguoi", "khong", "duoc",
        "trong", "nhung", "cho",  "voi",   "nay",   "nhu",   "den",   "khi",   "cung",  "da",
        "se",    "dang", "rat",   "nhieu", "lam",   "thi",   "vao",   "ra",    "len",   "xuong",
        "nha",   "truong", "hoc", "benh",  "vien",  "bac",   "thuoc", "ngay",  "hom",   "qua",
        "mai",   "sang", "chieu", "toi",   "dem",   "nam",   "thang", "tuan",  "gio",   "phut",
        "can",   "muon", "biet",  "noi",   "nghe",  "thay",  "xem",   "doc",   "viet",  "goi",
        "mua",   "ban",  "dung",  "sai",   "moi",   "cu",    "lon",   "nho",   "cao",   "thap",
        "nhanh", "cham", "tot",   "xau",   "dep",   "vui",   "buon",  "khoe",  "met",   "dau",
        "bung",  "dau",  "lung",  "tim",   "phoi",  "gan",   "than",  "mau",   "nuoc",  "com",
        "pho",   "banh", "ca",    "thit",  "rau",   "trai",  "cay",   "hoa",   "la",    "song",
        "bien",  "nui",  "duong", "pho",   "cho",   "cong",  "ty",    "viec",  "tien",  "luong",
        "may",   "tinh", "dien",  "thoai", "mang",  "tin",   "nhan",  "gui",   "tra",   "loi",
        "hoi",   "dap",  "giup",  "do",    "thu",   "chua",  "kham",  "xet",   "nghiem", "ket",
        "qua",   "phan", "tich",  "bao",   "cao",   "ke",    "hoach", "du",    "an",    "nhom",
        "hop",   "ban",  "giam",  "doc",   "quan",  "ly",    "nhan",  "vien",  "khach", "hang",
        "san",   "pham", "dich",  "vu",    "chat",  "he",    "thong", "phan",  "mem",   "cai",
        "dat",   "sua",  "loi",   "kiem",  "tra",   "thu",   "nghiem", "chay",  "dung",  "lai",
        "nua",   "roi",  "van",   "con",   "chi",   "moi",   "deu",   "hay",   "hoac",  "neu",
        "vi",    "nen",  "tuy",   "nhien", "sau",   "truoc", "giua",  "ngoai", "tren",  "duoi"};
    std::set<std::string> excluded(kSyllables.begin(), kSyllables.end());
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const char* w : kRaw) {
      if (excluded.count(w) == 0 && seen.insert(w).second) out.push_back(w);
    }
    return out;
  }();
  return words;
}

std::vector<Template> make_templates(std::mt19937_64& rng, int count, int min_words,
                                     int max_words, double number_prob) {
  if (min_words < 1 || max_words < min_words) {
    throw std::invalid_argument("make_templates: bad carrier length range");
  }
  const auto& vocab = carrier_words();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<size_t> pick(0, vocab.size() - 1);
  std::uniform_int_distribution<int> number(1, 2025);
  std::vector<Template> out;
  for (int t = 0; t < count; ++t) {
    int n = std::uniform_int_distribution<int>(min_words, max_words)(rng);
    Template tpl;
    for (int i = 0; i < n; ++i) {
      tpl.tokens.push_back(u(rng) < number_prob ? std::to_string(number(rng)) : vocab[pick(rng)]);
    }
    // Two slots with at least one carrier word between them.
    int a = std::uniform_int_distribution<int>(0, n - 1)(rng);
    int b = std::uniform_int_distribution<int>(0, n - 1)(rng);
    if (a > b) std::swap(a, b);
    if (b == a) b = std::min(a + 1, n);
    tpl.tokens.insert(tpl.tokens.begin() + b, "[S2]");
    tpl.tokens.insert(tpl.tokens.begin() + a, "[S1]");
    out.push_back(std::move(tpl));
  }
  return out;
}

SplitConfig SplitConfig::from_json(const nlohmann::json& j) {
  SplitConfig c;
  c.train_pairs = j.value("train_pairs", c.train_pairs);
  c.test_pairs = j.value("test_pairs", c.test_pairs);
  c.templates_per_split = j.value("templates_per_split", c.templates_per_split);
  c.min_carrier_words = j.value("min_carrier_words", c.min_carrier_words);
  c.max_carrier_words = j.value("max_carrier_words", c.max_carrier_words);
  c.number_token_prob = j.value("number_token_prob", c.number_token_prob);
  c.train_hard_fraction = j.value("train_hard_fraction", c.train_hard_fraction);
  c.test_seen_phrase_prob = j.value("test_seen_phrase_prob", c.test_seen_phrase_prob);
  c.lexicon.general_train = j.value("lexicon_general_train", c.lexicon.general_train);
  c.lexicon.general_test = j.value("lexicon_general_test", c.lexicon.general_test);
  c.lexicon.medical = j.value("lexicon_medical", c.lexicon.medical);
  c.lexicon.medical_roots = j.value("medical_roots", c.lexicon.medical_roots);
  c.pairs.max_cs_words = j.value("max_cs_words", c.pairs.max_cs_words);
  return c;
}

nlohmann::json SplitConfig::to_json() const {
  return {{"train_pairs", train_pairs},
          {"test_pairs", test_pairs},
          {"templates_per_split", templates_per_split},
          {"min_carrier_words", min_carrier_words},
          {"max_carrier_words", max_carrier_words},
          {"number_token_prob", number_token_prob},
          {"train_hard_fraction", train_hard_fraction},
          {"test_seen_phrase_prob", test_seen_phrase_prob},
          {"lexicon_general_train", lexicon.general_train},
          {"lexicon_general_test", lexicon.general_test},
          {"lexicon_medical", lexicon.medical},
          {"medical_roots", lexicon.medical_roots},
          {"max_cs_words", pairs.max_cs_words}};
}

Splits build_splits(const SplitConfig& config, uint64_t seed) {
  Splits out;
  out.lexicon = build_lexicon(config.lexicon, derive_seed(seed, 0, 0));
  const auto general_train = out.lexicon.select(Domain::kGeneral, LexiconSplit::kTrainVisible);
  const auto general_test = out.lexicon.select(Domain::kGeneral, LexiconSplit::kTestOnly);
  const auto medical = out.lexicon.select(Domain::kMedical, LexiconSplit::kTestOnly);

  std::mt19937_64 train_tpl_rng(derive_seed(seed, 1, 0)), test_tpl_rng(derive_seed(seed, 2, 0));
  auto train_templates =
      make_templates(train_tpl_rng, config.templates_per_split, config.min_carrier_words,
                     config.max_carrier_words, config.number_token_prob);
  auto test_templates =
      make_templates(test_tpl_rng, config.templates_per_split, config.min_carrier_words,
                     config.max_carrier_words, config.number_token_prob);

  auto check = [](const SpokenReferencePair& p) {
    if (p.apply_spans() != p.reference) {
      throw std::logic_error("generated pair fails the replacement round trip");
    }
  };
  for (int i = 0; i < config.train_pairs; ++i) {
    std::mt19937_64 rng(derive_seed(seed, 10, i));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto d = u(rng) < config.train_hard_fraction ? Difficulty::kHard : Difficulty::kEasy;
    out.train.push_back(
        generate_pair(rng, train_templates, {general_train, {}, 0.0}, d, config.pairs));
    check(out.train.back());
  }
  auto make_test = [&](const std::vector<std::string>& pool, uint64_t stream) {
    std::vector<SpokenReferencePair> pairs;
    for (int i = 0; i < config.test_pairs; ++i) {
      std::mt19937_64 rng(derive_seed(seed, stream, i));
      auto d = i % 2 == 0 ? Difficulty::kEasy : Difficulty::kHard;
      pairs.push_back(generate_pair(rng, test_templates,
                                    {pool, general_train, config.test_seen_phrase_prob}, d,
                                    config.pairs));
      check(pairs.back());
    }
    if (!pairs.empty() && unseen_phrase_rate(out.train, pairs) < 0.9) {
      throw std::runtime_error("build_splits: fewer than 90% of test phrases are unseen");
    }
    return pairs;
  };
  out.test_general = make_test(general_test, 11);
  out.test_medical = make_test(medical, 12);
  return out;
}

std::vector<std::string> sample_bias_list(std::span<const std::string> batch_items,
                                          std::span<const std::string> pool, size_t target_size,
                                          std::mt19937_64& rng, bool truncate) {
  std::vector<std::string> out;
  std::unordered_set<std::string> taken;
  for (const auto& item : batch_items)
    if (taken.insert(item).second) out.push_back(item);
  if (target_size < out.size()) {
    if (!truncate) {
      throw std::invalid_argument("sample_bias_list: target size " + std::to_string(target_size) +
                                  " is below the " + std::to_string(out.size()) +
                                  " in-batch phrases");
    }
  } else {
    std::vector<size_t> candidates;
    std::unordered_set<std::string_view> seen;
    for (size_t i = 0; i < pool.size(); ++i) {
      if (!taken.count(pool[i]) && seen.insert(pool[i]).second) candidates.push_back(i);
    }
    size_t need = target_size - out.size();
    if (need > candidates.size()) {
      throw std::invalid_argument("sample_bias_list: distractor pool too small");
    }
    // Partial Fisher-Yates: the first `need` entries are a uniform sample.
    for (size_t i = 0; i < need; ++i) {
      size_t j = std::uniform_int_distribution<size_t>(i, candidates.size() - 1)(rng);
      std::swap(candidates[i], candidates[j]);
      out.push_back(pool[candidates[i]]);
    }
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

std::vector<std::string> split_words(std::string_view phrase) {
  std::vector<std::string> out;
  std::istringstream in{std::string(phrase)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::vector<std::string> distinct_words(std::span<const std::string> phrases) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& p : phrases)
    for (auto& w : split_words(p))
      if (seen.insert(w).second) out.push_back(w);
  return out;
}

std::vector<std::string> distinct_phrases(std::span<const SpokenReferencePair> pairs) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& p : pairs)
    for (const auto& s : p.spans)
      if (seen.insert(s.phrase).second) out.push_back(s.phrase);
  return out;
}

double cs_token_fraction(std::span<const SpokenReferencePair> pairs) {
  size_t cs = 0, total = 0;
  for (const auto& p : pairs) {
    total += split_words(p.reference).size();
    for (const auto& s : p.spans) cs += split_words(s.phrase).size();
  }
  return total == 0 ? 0.0 : static_cast<double>(cs) / static_cast<double>(total);
}

double unseen_phrase_rate(std::span<const SpokenReferencePair> train,
                          std::span<const SpokenReferencePair> test) {
  auto seen_list = distinct_phrases(train);
  std::unordered_set<std::string> seen(seen_list.begin(), seen_list.end());
  auto test_phrases = distinct_phrases(test);
  if (test_phrases.empty()) return 1.0;
  size_t unseen = std::count_if(test_phrases.begin(), test_phrases.end(),
                                [&](const std::string& p) { return !seen.count(p); });
  return static_cast<double>(unseen) / static_cast<double>(test_phrases.size());
}

text::Vocabulary build_vocabulary(std::span<const SpokenReferencePair> pairs) {
  std::vector<std::string> corpus;
  corpus.reserve(2 * pairs.size());
  for (const auto& p : pairs) {
    corpus.push_back(p.spoken);
    corpus.push_back(p.reference);
  }
  return text::Vocabulary::build(corpus);
}

uint64_t derive_seed(uint64_t base, uint64_t stream, uint64_t index) {
  auto mix = [](uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(base) ^ stream) ^ index);
}

nlohmann::ordered_json pair_to_json(const SpokenReferencePair& pair) {
  nlohmann::ordered_json j;
  j["spoken"] = pair.spoken;
  j["reference"] = pair.reference;
  j["spans"] = nlohmann::ordered_json::array();
  for (const auto& s : pair.spans) {
    nlohmann::ordered_json span;
    span["s"] = s.start;
    span["e"] = s.end;
    span["phrase"] = s.phrase;
    j["spans"].push_back(span);
  }
  j["difficulty"] = difficulty_name(pair.difficulty);
  return j;
}

SpokenReferencePair pair_from_json(const nlohmann::json& j) {
  SpokenReferencePair p;
  p.spoken = j.at("spoken").get<std::string>();
  p.reference = j.at("reference").get<std::string>();
  for (const auto& s : j.at("spans")) {
    p.spans.push_back({s.at("s").get<int>(), s.at("e").get<int>(), s.at("phrase").get<std::string>()});
  }
  p.difficulty = parse_difficulty(j.value("difficulty", std::string("easy")));
  return p;
}

void write_jsonl(const std::string& path, std::span<const SpokenReferencePair> pairs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& p : pairs) out << pair_to_json(p).dump() << '\n';
  if (!out) throw std::runtime_error("failed writing " + path);
}

std::vector<SpokenReferencePair> read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<SpokenReferencePair> out;
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(pair_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void write_string_list(const std::string& path, std::span<const std::string> items) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << nlohmann::json(std::vector<std::string>(items.begin(), items.end())).dump() << '\n';
}

std::vector<std::string> read_string_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  auto j = nlohmann::json::parse(in);
  if (!j.is_array()) throw std::runtime_error(path + ": expected a JSON array of strings");
  return j.get<std::vector<std::string>>();
}

}  // namespace adacs::data
