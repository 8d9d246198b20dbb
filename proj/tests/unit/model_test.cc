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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "adacs/model/normalizer.h"
#include "adacs/model/train.h"
#include "doctest.h"
#include "gradcheck.h"

namespace data = adacs::data;
namespace model = adacs::model;
namespace nn = adacs::nn;
namespace text = adacs::text;
using model::BiasMode;

namespace {

// Independent region oracle: for every position decide "starts a region"
// from the tag and its left neighbour, then extend while the tag is I.
std::vector<std::pair<int, int>> scan_regions(const std::string& tags) {
  std::vector<std::pair<int, int>> out;
  const int n = static_cast<int>(tags.size());
  for (int i = 0; i < n; ++i) {
    bool opens = tags[i] == 'B' || (tags[i] == 'I' && (i == 0 || tags[i - 1] == 'O'));
    if (!opens) continue;
    int j = i;
    while (j + 1 < n && tags[j + 1] == 'I') ++j;
    out.emplace_back(i, j);
  }
  return out;
}

model::Region span_region(int start, int end) {
  model::Region r;
  r.start = start;
  r.end = end;
  return r;
}

const text::Vocabulary& letters_vocab() {
  static const text::Vocabulary v =
      text::Vocabulary::build(std::vector<std::string>{"abcdefghijklmnopqrstuvwxyz0123456789"});
  return v;
}

model::ModelConfig tiny_config(uint64_t seed = 3) {
  model::ModelConfig c;
  c.d_model = 16;
  c.heads = 2;
  c.d_ff = 32;
  c.encoder_layers = 1;
  c.decoder_layers = 1;
  c.vocab_size = letters_vocab().size();
  c.max_positions = 160;
  c.max_decode_len = 48;
  c.seed = seed;
  return c;
}

data::SpokenReferencePair make_pair(const std::string& tpl, std::vector<std::string> phrases,
                                    data::Difficulty d) {
  std::vector<data::Template> t = {data::Template::parse(tpl)};
  std::mt19937_64 rng(0);
  data::PairOptions opts;
  opts.easy_min_phrases = opts.easy_max_phrases = static_cast<int>(phrases.size());
  opts.hard_min_phrases = opts.hard_max_phrases = static_cast<int>(phrases.size());
  // Sampling is with replacement from the pool, so retry until the pair
  // uses the phrases in the requested order.
  for (int attempt = 0; attempt < 10000; ++attempt) {
    auto p = data::generate_pair(rng, t, {phrases, {}, 0.0}, d, opts);
    bool ordered = true;
    for (size_t i = 0; i < p.spans.size(); ++i) ordered &= p.spans[i].phrase == phrases[i];
    if (ordered) return p;
  }
  throw std::runtime_error("make_pair: could not realize the requested order");
}

std::vector<data::SpokenReferencePair> small_corpus(int pairs, uint64_t seed) {
  data::SplitConfig cfg;
  cfg.train_pairs = pairs;
  cfg.test_pairs = 0;
  cfg.templates_per_split = 20;
  cfg.min_carrier_words = 3;
  cfg.max_carrier_words = 5;
  cfg.lexicon.general_train = 60;
  cfg.lexicon.general_test = 0;
  cfg.lexicon.medical = 0;
  cfg.pairs.max_cs_words = 4;
  cfg.pairs.hard_max_phrases = 2;
  return data::build_splits(cfg, seed).train;
}

}  // namespace

TEST_CASE("extract_regions") {
  using model::parse_tags;
  auto r = model::extract_regions(parse_tags("OBIOB"));
  REQUIRE(r.size() == 2);
  CHECK(r[0].start == 1);
  CHECK(r[0].end == 2);
  CHECK(r[1].start == 4);
  CHECK(r[1].end == 4);
  CHECK(model::extract_regions(parse_tags("OOOO")).empty());
  CHECK(model::extract_regions(parse_tags("")).empty());
  auto leading_i = model::extract_regions(parse_tags("IIOIBI"));
  REQUIRE(leading_i.size() == 3);
  CHECK(leading_i[0] == span_region(0, 1));
  CHECK(leading_i[1] == span_region(3, 3));
  CHECK(leading_i[2] == span_region(4, 5));
  std::vector<int> bad = {0, 3};
  CHECK_THROWS_AS(model::extract_regions(bad), std::invalid_argument);
}

TEST_CASE("extract_regions matches a brute-force scan on random tag strings") {
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<int> len(0, 40), tag(0, 2);
  for (int trial = 0; trial < 1000; ++trial) {
    std::string s;
    for (int i = len(rng); i > 0; --i) s.push_back("BIO"[tag(rng)]);
    auto tags = model::parse_tags(s);
    auto regions = model::extract_regions(tags);
    auto oracle = scan_regions(s);
    REQUIRE(regions.size() == oracle.size());
    for (size_t k = 0; k < regions.size(); ++k) {
      CHECK(regions[k].start == oracle[k].first);
      CHECK(regions[k].end == oracle[k].second);
      if (k > 0) CHECK(regions[k - 1].end < regions[k].start);
    }
    // Rebuilding gives the canonical form: I opening a region becomes B.
    std::string canonical = s;
    for (size_t i = 0; i < s.size(); ++i)
      if (s[i] == 'I' && (i == 0 || s[i - 1] == 'O')) canonical[i] = 'B';
    CHECK(model::tags_to_string(model::tags_from_regions(regions, static_cast<int>(s.size()))) ==
          canonical);
  }
}

TEST_CASE("trim_regions drops edge separators") {
  std::vector<int> tokens = {7, text::kWordSep, 8, 9, text::kWordSep, 6};
  std::vector<model::Region> regions = {span_region(1, 4), span_region(4, 4), span_region(5, 5)};
  auto trimmed = model::trim_regions(regions, tokens);
  REQUIRE(trimmed.size() == 2);
  CHECK(trimmed[0] == span_region(2, 3));
  CHECK(trimmed[1] == span_region(5, 5));
}

TEST_CASE("labels in words and phrases modes") {
  const auto& vocab = letters_vocab();
  // Hard pair: "ab cd" then "efg" back to back.
  auto pair = make_pair("x [S] y", {"ab cd", "efg"}, data::Difficulty::kHard);
  REQUIRE(pair.spoken == "x ay bi si di i ep gi y");

  SUBCASE("words mode splits every word") {
    std::vector<std::string> bank = {"zz", "cd", "ab", "efg"};
    auto ex = model::make_example(pair, vocab, model::make_bank_index(bank));
    CHECK(model::tags_to_string(ex.tags) == "OOBIIIIIBIIIIIBIIIIIIOO");
    REQUIRE(ex.regions.size() == 3);
    CHECK(ex.regions[0].bias_label == 3);
    CHECK(ex.regions[0].target_ids == vocab.encode("ab"));
    CHECK(ex.regions[0].start == 2);
    CHECK(ex.regions[0].end == 6);
    CHECK(ex.regions[1].bias_label == 2);
    CHECK(ex.regions[2].bias_label == 4);
    CHECK(ex.enc_rank[7] == 3);  // joining space carries the left unit's label
    CHECK(ex.enc_rank[8] == 2);
    CHECK(ex.enc_rank[0] == 0);
    CHECK(ex.enc_rank[22] == 0);
  }

  SUBCASE("phrases mode keeps phrases whole") {
    std::vector<std::string> bank = {"efg", "ab cd"};
    auto ex = model::make_example(pair, vocab, model::make_bank_index(bank));
    CHECK(model::tags_to_string(ex.tags) == "OOBIIIIIIIIIIIBIIIIIIOO");
    REQUIRE(ex.regions.size() == 2);
    CHECK(ex.regions[0].target_ids == vocab.encode("ab cd"));
    CHECK(ex.regions[0].bias_label == 2);
    CHECK(ex.regions[1].bias_label == 1);
  }

  SUBCASE("unmatched words merge into one unlabeled unit") {
    std::vector<std::string> bank = {"cd"};
    auto units = model::label_units(pair, model::make_bank_index(bank));
    REQUIRE(units.size() == 3);
    CHECK(units[0].text == "ab");
    CHECK(units[0].bias_label == 0);
    CHECK(units[1].text == "cd");
    CHECK(units[1].bias_label == 1);
    CHECK(units[2].text == "efg");
    CHECK(units[2].bias_label == 0);

    std::vector<std::string> empty;
    auto none = model::label_units(pair, model::make_bank_index(empty));
    REQUIRE(none.size() == 1);
    CHECK(none[0].text == "ab cd efg");
    CHECK(none[0].start == 2);
    CHECK(none[0].end == 21);
  }

  SUBCASE("longest match prefers a phrase over its words") {
    std::vector<std::string> bank = {"ab", "ab cd"};
    auto units = model::label_units(pair, model::make_bank_index(bank));
    REQUIRE(units.size() == 2);
    CHECK(units[0].text == "ab cd");
    CHECK(units[0].bias_label == 2);
  }

  SUBCASE("all-O sentence") {
    data::SpokenReferencePair plain{"x y z", "x y z", {}, data::Difficulty::kEasy};
    auto ex = model::make_example(plain, vocab, {});
    CHECK(model::tags_to_string(ex.tags) == "OOOOO");
    CHECK(ex.regions.empty());
  }
}

TEST_CASE("bias items") {
  auto pair = make_pair("x [S] y", {"ab cd", "efg"}, data::Difficulty::kHard);
  std::vector<data::SpokenReferencePair> pairs = {pair, pair};
  CHECK(model::bias_items(pairs, BiasMode::kNone).empty());
  CHECK(model::bias_items(pairs, BiasMode::kPhrases) == std::vector<std::string>{"ab cd", "efg"});
  CHECK(model::bias_items(pairs, BiasMode::kWords) ==
        std::vector<std::string>{"ab", "cd", "efg"});
  CHECK(model::parse_bias_mode("words") == BiasMode::kWords);
  CHECK_THROWS_AS(model::parse_bias_mode("all"), std::invalid_argument);
}

TEST_CASE("config validation") {
  auto c = tiny_config();
  c.heads = 3;
  CHECK_THROWS_AS(model::AdacsModel<double>{c}, std::invalid_argument);
  c = tiny_config();
  c.max_decode_len = 1;
  CHECK_THROWS_AS(model::AdacsModel<double>{c}, std::invalid_argument);
  c = tiny_config();
  CHECK(model::ModelConfig::from_json(c.to_json()).to_json() == c.to_json());
}

TEST_CASE("encoder") {
  model::AdacsModel<double> m(tiny_config());
  const auto& vocab = letters_vocab();
  auto ids = vocab.encode("ab cd ef");
  std::vector<nn::Range> seg = {{0, static_cast<int>(ids.size())}};
  nn::Graph<double> g(false);
  auto h = m.encode(g, ids, seg).value();
  CHECK(h.rows() == static_cast<int>(ids.size()));
  CHECK(h.cols() == 16);
  CHECK(m.encode(g, ids, seg).value() == h);

  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> tok(text::kNumSpecials, vocab.size() - 1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> a(12);
    for (auto& t : a) t = tok(rng);
    auto b = a;
    if (b[2] == b[7]) b[7] = b[7] == tok.max() ? tok.min() : b[7] + 1;
    std::swap(b[2], b[7]);
    std::vector<nn::Range> s = {{0, 12}};
    CHECK(m.encode(g, a, s).value() != m.encode(g, b, s).value());
  }

  std::vector<int> long_ids(161, text::kNumSpecials);
  std::vector<nn::Range> long_seg = {{0, 161}};
  CHECK_THROWS_AS(m.encode(g, long_ids, long_seg), std::out_of_range);
}

TEST_CASE("tagger") {
  model::AdacsModel<double> m(tiny_config());
  const auto& vocab = letters_vocab();
  std::vector<std::string> list = {"ab", "cd"};
  auto entries = adacs::bam::make_entries(list, vocab);
  nn::Graph<double> g(false);
  auto bank = m.encode_bank(g, entries);
  auto ids = vocab.encode("x ay bi y");
  std::vector<nn::Range> seg = {{0, static_cast<int>(ids.size())}};
  auto h = m.encode(g, ids, seg);
  std::vector<int> all_dummy(ids.size(), 0);
  auto forced = m.tag(g, h, bank, std::span<const int>(all_dummy));
  CHECK(forced.logits.rows() == static_cast<int>(ids.size()));
  CHECK(forced.logits.cols() == 3);
  CHECK(forced.bias.indices == all_dummy);
  auto free = m.tag(g, h, bank);
  CHECK(free.bias.indices.size() == ids.size());
}

TEST_CASE("untrained tags match the golden fixture") {
  model::AdacsModel<double> m(tiny_config(11));
  const auto& vocab = letters_vocab();
  model::Normalizer<double> norm(m, vocab);
  std::vector<std::string> list = {"ab", "cd", "efg"};
  norm.set_bias_list(list);
  auto result = norm.run("toi thay ay bi si di o 2024 roi");
  auto tags = model::tags_to_string(result.tags);
  CHECK(tags.size() == 31);
  const auto path = std::filesystem::path(ADACS_FIXTURE_DIR) / "untrained_tags.txt";
  std::ifstream in(path);
  REQUIRE_MESSAGE(in.good(), "missing fixture " << path.string() << ", tags were " << tags);
  std::string golden;
  std::getline(in, golden);
  CHECK(tags == golden);
}

TEST_CASE("decoder") {
  model::AdacsModel<double> m(tiny_config());
  const auto& vocab = letters_vocab();
  std::vector<std::string> list = {"ab", "cd"};
  auto entries = adacs::bam::make_entries(list, vocab);
  auto ids = vocab.encode("x ay bi si di y");
  std::vector<nn::Range> seg = {{0, static_cast<int>(ids.size())}};

  SUBCASE("teacher forcing yields one row per target token plus EOS") {
    nn::Graph<double> g(false);
    auto bank = m.encode_bank(g, entries);
    auto h = m.encode(g, ids, seg);
    std::vector<int> rows = {2, 3, 4, 5, 6};
    auto mem = nn::gather_rows(h, rows);
    std::vector<nn::Range> mem_seg = {{0, 5}};
    auto target = vocab.encode("ab");
    std::vector<int> inputs = {text::kBos, target[0], target[1]};
    std::vector<nn::Range> dec_seg = {{0, 3}};
    auto out = m.decode_teacher(g, mem, mem_seg, inputs, dec_seg, bank, std::nullopt);
    CHECK(out.logits.rows() == static_cast<int>(target.size()) + 1);
    CHECK(out.logits.cols() == vocab.size());
  }

  SUBCASE("greedy equals a step-by-step teacher-forced reference") {
    nn::Graph<double> g(false);
    auto bank = m.encode_bank(g, entries);
    auto h = m.encode(g, ids, seg);
    std::vector<int> rows = {2, 3, 4, 5, 6, 8, 9, 10, 11, 12};
    auto mem = nn::gather_rows(h, rows);
    std::vector<nn::Range> mem_seg = {{0, 5}, {5, 5}};
    std::vector<int> budgets = {6, 9};
    auto greedy = m.decode_greedy(g, mem, mem_seg, bank, budgets);
    for (int r = 0; r < 2; ++r) {
      std::vector<int> prefix = {text::kBos}, produced;
      bool truncated = false;
      for (int step = 0;; ++step) {
        std::vector<nn::Range> one_mem = {mem_seg[r]};
        std::vector<nn::Range> one_dec = {{0, static_cast<int>(prefix.size())}};
        auto out = m.decode_teacher(g, mem, one_mem, prefix, one_dec, bank, std::nullopt);
        auto last = out.logits.value().row(out.logits.rows() - 1);
        int best = 0;
        for (int v = 1; v < static_cast<int>(last.size()); ++v)
          if (last[v] > last[best]) best = v;
        if (best == text::kEos) break;
        produced.push_back(best);
        prefix.push_back(best);
        if (step + 1 >= budgets[r]) {
          truncated = true;
          break;
        }
      }
      CHECK(greedy[r].ids == produced);
      CHECK(greedy[r].truncated == truncated);
    }
  }

  SUBCASE("zero output head picks the lowest id") {
    m.output.weight->value.fill(0.0);
    m.output.bias->value.fill(0.0);
    nn::Graph<double> g(false);
    auto bank = m.encode_bank(g, entries);
    auto h = m.encode(g, ids, seg);
    std::vector<int> rows = {2, 3};
    auto mem = nn::gather_rows(h, rows);
    std::vector<nn::Range> mem_seg = {{0, 2}};
    std::vector<int> budgets = {3};
    auto greedy = m.decode_greedy(g, mem, mem_seg, bank, budgets);
    REQUIRE(!greedy[0].ids.empty());
    CHECK(greedy[0].ids[0] == text::kPad);
    CHECK(greedy[0].truncated);
    CHECK(greedy[0].ids.size() == 3);
  }

  CHECK(m.decode_budget(2) == 16);
  CHECK(m.decode_budget(50) == 48);
}

TEST_CASE("loss components") {
  const auto& vocab = letters_vocab();
  model::AdacsModel<double> m(tiny_config());

  SUBCASE("sentence without spans has zero decoder losses") {
    data::SpokenReferencePair plain{"toi thay roi", "toi thay roi", {}, data::Difficulty::kEasy};
    std::vector<model::TrainingExample> batch = {model::make_example(plain, vocab, {})};
    nn::Graph<double> g;
    auto bank = m.encode_bank(g, {});
    auto loss = model::compute_loss(g, m, batch, bank);
    CHECK(loss.breakdown.dec_rank == 0.0);
    CHECK(loss.breakdown.gen == 0.0);
    CHECK(loss.breakdown.tagger > 0.0);
    CHECK(loss.breakdown.enc_rank == 0.0);  // a single-entry bank is certain
  }

  SUBCASE("missing labels are rejected") {
    auto pair = make_pair("x [S] y", {"ab"}, data::Difficulty::kEasy);
    auto ex = model::make_example(pair, vocab, {});
    ex.tags.pop_back();
    std::vector<model::TrainingExample> batch = {ex};
    nn::Graph<double> g;
    auto bank = m.encode_bank(g, {});
    CHECK_THROWS_AS(model::compute_loss(g, m, batch, bank), std::invalid_argument);
  }

  SUBCASE("total is the component sum") {
    auto pair = make_pair("x [S] y", {"ab cd", "efg"}, data::Difficulty::kHard);
    std::vector<std::string> list = {"ab", "cd", "efg", "hij"};
    auto index = model::make_bank_index(list);
    std::vector<model::TrainingExample> batch = {model::make_example(pair, vocab, index)};
    auto entries = adacs::bam::make_entries(list, vocab);
    nn::Graph<double> g;
    auto bank = m.encode_bank(g, entries);
    auto loss = model::compute_loss(g, m, batch, bank);
    CHECK(std::abs(loss.breakdown.total - loss.breakdown.component_sum()) <= 1e-12);
    for (double v : {loss.breakdown.tagger, loss.breakdown.enc_rank, loss.breakdown.dec_rank,
                     loss.breakdown.gen})
      CHECK(v > 0.0);
  }
}

TEST_CASE("untrained tagger loss is near ln 3") {
  const auto& vocab = letters_vocab();
  auto corpus = small_corpus(8, 5);
  double mean = 0.0;
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    model::AdacsModel<double> m(tiny_config(seed));
    std::vector<model::TrainingExample> batch;
    for (const auto& p : corpus) batch.push_back(model::make_example(p, vocab, {}));
    nn::Graph<double> g(false);
    auto bank = m.encode_bank(g, {});
    mean += model::compute_loss(g, m, batch, bank).breakdown.tagger / 10.0;
  }
  CHECK(std::abs(mean - std::log(3.0)) < 0.15);
}

TEST_CASE("gradients of all four loss components") {
  const auto& vocab = letters_vocab();
  auto cfg = tiny_config(4);
  cfg.max_positions = 40;
  cfg.max_decode_len = 12;
  model::AdacsModel<double> m(cfg);
  // Spread parameters so that attention and layer norms are far from their
  // symmetric starting point.
  std::mt19937_64 rng(2);
  std::normal_distribution<double> noise(0.0, 0.3);
  for (auto& [_, p] : m.parameters().items())
    for (auto& v : p.value.values()) v += noise(rng);

  auto pair = make_pair("x [S] y", {"ab cd", "efg"}, data::Difficulty::kHard);
  std::vector<std::string> list = {"cd", "ab", "hij", "efg"};
  auto index = model::make_bank_index(list);
  std::vector<model::TrainingExample> batch = {model::make_example(pair, vocab, index)};
  auto entries = adacs::bam::make_entries(list, vocab);
  auto loss = [&](nn::Graph<double>& g) {
    auto bank = m.encode_bank(g, entries);
    return model::compute_loss(g, m, batch, bank).total;
  };
  auto result = adacs::testing::check_gradients(m.parameters(), loss, 1e-5, 5);
  INFO("worst " << result.worst_parameter << "[" << result.worst_index
                << "] analytic=" << result.worst_analytic << " numeric=" << result.worst_numeric);
  CHECK(result.max_rel_error < 1e-3);
  CHECK(result.checked > 1000);
}

TEST_CASE("training") {
  const auto& vocab = letters_vocab();
  auto corpus = small_corpus(50, 8);
  std::vector<std::string> pool = data::distinct_phrases(corpus);
  model::TrainConfig tc;
  tc.batch_size = 8;
  tc.bank_size = 12;
  tc.lr = 3e-3;
  tc.warmup_steps = 10;
  tc.epochs = 32;  // 7 steps per epoch
  tc.seed = 5;

  SUBCASE("identical seeds give identical steps") {
    model::AdacsModel<float> a(tiny_config()), b(tiny_config());
    model::Trainer<float> ta(a, vocab, corpus, pool, tc), tb(b, vocab, corpus, pool, tc);
    std::vector<size_t> idx = {0, 1, 2, 3, 4, 5, 6, 7};
    for (int s = 0; s < 3; ++s) CHECK(ta.step(idx) == tb.step(idx));
  }

  SUBCASE("loss falls on a memorization task") {
    model::AdacsModel<float> m(tiny_config());
    model::Trainer<float> trainer(m, vocab, corpus, pool, tc);
    trainer.fit();
    const auto& h = trainer.history();
    REQUIRE(h.size() >= 200);
    double first = 0, last = 0;
    for (int i = 0; i < 7; ++i) {
      first += h[i].total;
      last += h[h.size() - 1 - i].total;
    }
    MESSAGE("mean loss over first/last 7 steps " << first / 7 << " -> " << last / 7);
    CHECK(last < 0.5 * first);
  }

  SUBCASE("clipping bounds the gradient norm") {
    model::AdacsModel<double> m(tiny_config());
    std::vector<model::TrainingExample> batch;
    for (int i = 0; i < 4; ++i) batch.push_back(model::make_example(corpus[i], vocab, {}));
    nn::Graph<double> g;
    auto bank = m.encode_bank(g, {});
    auto loss = model::compute_loss(g, m, batch, bank);
    for (auto& [_, p] : m.parameters().items()) p.grad.fill(0.0);
    g.backward(loss.total);
    m.parameters().clip_grad_norm(1.0);
    CHECK(m.parameters().grad_norm() <= 1.0 + 1e-6);
  }

  SUBCASE("learning rate schedule") {
    model::AdacsModel<float> m(tiny_config());
    model::Trainer<float> trainer(m, vocab, corpus, pool, tc);
    CHECK(trainer.learning_rate(0) == doctest::Approx(tc.lr / 10));
    CHECK(trainer.learning_rate(9) == doctest::Approx(tc.lr));
    CHECK(trainer.learning_rate(trainer.total_steps()) ==
          doctest::Approx(tc.lr * tc.min_lr_ratio));
  }
}

TEST_CASE("normalize") {
  const auto& vocab = letters_vocab();

  SUBCASE("a model that tags everything O is the identity") {
    model::AdacsModel<double> m(tiny_config());
    m.tagger.bias->value(0, model::kTagO) = 100.0;
    model::Normalizer<double> norm(m, vocab);
    for (std::string s : {"toi thay ay bi roi", "x", "  two  spaces ", "unicode từ che vô lét"}) {
      CHECK(norm.normalize(s) == s);
    }
    CHECK(norm.normalize("").empty());
  }

  SUBCASE("regions are spliced over their characters") {
    model::AdacsModel<double> m(tiny_config());
    m.tagger.bias->value(0, model::kTagI) = 100.0;
    model::Normalizer<double> norm(m, vocab);
    auto r = norm.run(" ab cd ");
    REQUIRE(r.regions.size() == 1);
    CHECK(r.regions[0] == span_region(1, 5));
    CHECK(r.text == " " + r.decoded[0] + " ");
  }

  SUBCASE("cached bank matches a freshly encoded bank") {
    model::AdacsModel<double> m(tiny_config());
    model::Normalizer<double> norm(m, vocab);
    std::vector<std::string> first = {"ab", "cd"}, second = {"cd", "efg", "ab"};
    norm.set_bias_list(first);
    norm.set_bias_list(second);
    auto entries = adacs::bam::make_entries(second, vocab);
    nn::Graph<double> g(false);
    auto fresh = m.encode_bank(g, entries);
    CHECK(norm.bank().segments == fresh.segments);
    const auto& a = norm.bank().pooled;
    const auto& b = fresh.pooled.value();
    for (size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-12);
  }

  SUBCASE("checkpoint round trip") {
    model::AdacsModel<float> m(tiny_config());
    auto path = (std::filesystem::temp_directory_path() / "adacs_model_test.ckpt").string();
    model::save_model(path, m, vocab, {{"note", "test"}});
    auto loaded = model::load_model<float>(path);
    CHECK(loaded.vocab == vocab);
    CHECK(loaded.extra["note"] == "test");
    for (const auto& [name, p] : m.parameters().items())
      CHECK(loaded.model->parameters().get(name).value == p.value);
    model::Normalizer<float> a(m, vocab), b(*loaded.model, loaded.vocab);
    std::vector<std::string> list = {"ab", "cd"};
    a.set_bias_list(list);
    b.set_bias_list(list);
    CHECK(a.normalize("x ay bi y") == b.normalize("x ay bi y"));
    std::filesystem::remove(path);
  }
}
