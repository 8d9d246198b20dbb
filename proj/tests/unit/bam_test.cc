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
#include <random>

#include "adacs/bam/bias.h"
#include "doctest.h"
#include "gradcheck.h"

namespace nn = adacs::nn;
namespace bam = adacs::bam;
using adacs::text::Vocabulary;

namespace {

constexpr int kDim = 8;

void randomize(nn::ParameterStore<double>& store, std::mt19937_64& rng, double scale = 0.5) {
  std::normal_distribution<double> n(0.0, scale);
  for (auto& [_, p] : store.items())
    for (auto& v : p.value.values()) v = n(rng);
}

// Bias encoder is a plain embedding lookup; enough to make the bank depend
// on parameters.
struct Fixture {
  nn::ParameterStore<double> store;
  std::mt19937_64 rng{17};
  Vocabulary vocab = Vocabulary::build(std::vector<std::string>{"abcdefghij"});
  nn::Parameter<double>* table = nullptr;
  nn::Parameter<double>* dummy = nullptr;
  bam::BiasAttention<double> attention;

  Fixture(int heads = 2) {
    table = &store.add("embed", vocab.size(), kDim);
    dummy = &store.add("dummy", 1, kDim);
    attention = bam::BiasAttention<double>(store, "bam", kDim, heads, rng);
    randomize(store, rng);
  }

  bam::SequenceEncoder<double> encoder() {
    return [this](nn::Graph<double>& g, std::span<const int> ids, std::span<const nn::Range>) {
      return nn::gather_rows(g.parameter(*table), ids);
    };
  }

  bam::BiasBank<double> bank(nn::Graph<double>& g, const std::vector<std::string>& texts) {
    auto entries = bam::make_entries(texts, vocab);
    return bam::encode_bias_list<double>(g, entries, encoder(), *dummy);
  }
};

nn::Tensor<double> random_tensor(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  nn::Tensor<double> t(rows, cols);
  for (auto& v : t.values()) v = n(rng);
  return t;
}

// y = x W^T + b with plain loops.
std::vector<double> naive_linear(std::span<const double> x, const nn::Parameter<double>& w,
                                 const nn::Parameter<double>& b) {
  std::vector<double> y(w.value.rows());
  for (int o = 0; o < w.value.rows(); ++o) {
    double acc = b.value[o];
    for (int i = 0; i < w.value.cols(); ++i) acc += w.value(o, i) * x[i];
    y[o] = acc;
  }
  return y;
}

// Residual multi-head attention of one query over a block of key rows.
std::vector<double> naive_augment(std::span<const double> s, const nn::Tensor<double>& keys,
                                  nn::Range block, const nn::MultiHeadAttention<double>& mha) {
  const int heads = mha.heads(), dh = kDim / heads;
  auto q = naive_linear(s, *mha.q_proj.weight, *mha.q_proj.bias);
  std::vector<std::vector<double>> k, v;
  for (int r = block.start; r < block.end(); ++r) {
    k.push_back(naive_linear(keys.row(r), *mha.k_proj.weight, *mha.k_proj.bias));
    v.push_back(naive_linear(keys.row(r), *mha.v_proj.weight, *mha.v_proj.bias));
  }
  std::vector<double> concat(kDim, 0.0);
  for (int h = 0; h < heads; ++h) {
    std::vector<double> logits;
    for (auto& kr : k) {
      double dot = 0;
      for (int c = h * dh; c < (h + 1) * dh; ++c) dot += q[c] * kr[c];
      logits.push_back(dot / std::sqrt(double(dh)));
    }
    double mx = *std::max_element(logits.begin(), logits.end()), z = 0;
    for (auto& l : logits) z += (l = std::exp(l - mx));
    for (size_t j = 0; j < k.size(); ++j)
      for (int c = h * dh; c < (h + 1) * dh; ++c) concat[c] += logits[j] / z * v[j][c];
  }
  auto out = naive_linear(concat, *mha.out_proj.weight, *mha.out_proj.bias);
  for (int c = 0; c < kDim; ++c) out[c] += s[c];
  return out;
}

}  // namespace

TEST_CASE("bank construction") {
  Fixture f;
  nn::Graph<double> g;
  auto empty = f.bank(g, {});
  CHECK(empty.size() == 1);
  CHECK(empty.num_entries() == 0);
  CHECK(empty.pooled.value() == f.dummy->value);

  auto single = f.bank(g, {"c"});
  REQUIRE(single.size() == 2);
  CHECK(single.segments[1].length == 1);
  for (int c = 0; c < kDim; ++c) {
    CHECK(single.pooled.value()(1, c) == single.encodings.value()(1, c));
    CHECK(single.pooled.value()(1, c) == f.table->value(f.vocab.id(U'c'), c));
  }

  auto multi = f.bank(g, {"ab", "c d", "ab"});
  CHECK(multi.size() == 4);
  CHECK(multi.segments[2].length == 3);
  for (int c = 0; c < kDim; ++c) {
    double mean = (f.table->value(f.vocab.id(U'a'), c) + f.table->value(f.vocab.id(U'b'), c)) / 2;
    CHECK(multi.pooled.value()(1, c) == doctest::Approx(mean).epsilon(1e-14));
  }

  nn::Graph<double> g2;
  auto again = f.bank(g2, {"ab", "c d", "ab"});
  CHECK(again.encodings.value() == multi.encodings.value());
  CHECK(again.pooled.value() == multi.pooled.value());

  std::vector<bam::BiasEntry> bad = {{"", {}, ""}};
  CHECK_THROWS_AS(bam::encode_bias_list<double>(g, bad, f.encoder(), *f.dummy),
                  std::invalid_argument);
  std::vector<std::string> blank = {""};
  CHECK_THROWS_AS(bam::make_entries(blank, f.vocab), std::invalid_argument);
}

TEST_CASE("entries carry spoken forms") {
  auto vocab = Vocabulary::build(std::vector<std::string>{"abc 12"});
  std::vector<std::string> texts = {"ab", "a12"};
  auto entries = bam::make_entries(texts, vocab);
  CHECK(entries[0].spoken_form == "ay bi");
  CHECK(entries[0].ids == vocab.encode("ab"));
  CHECK(entries[1].spoken_form.empty());
}

TEST_CASE("score is the inner product with pooled rows") {
  Fixture f;
  nn::Graph<double> g;
  auto bank = f.bank(g, {"ab", "cde", "f", "ghij"});
  REQUIRE(bank.size() == 5);

  auto zeros = f.attention.score(g, g.constant(nn::Tensor<double>(3, kDim)), bank);
  for (double v : zeros.value().values()) CHECK(v == 0.0);

  std::mt19937_64 rng(5);
  auto s = random_tensor(4, kDim, rng);
  auto scores = f.attention.score(g, g.constant(s), bank).value();
  REQUIRE(scores.rows() == 4);
  REQUIRE(scores.cols() == 5);
  for (int r = 0; r < 4; ++r) {
    for (int e = 0; e < 5; ++e) {
      double dot = 0;
      for (int c = 0; c < kDim; ++c) dot += s(r, c) * bank.pooled.value()(e, c);
      CHECK(std::abs(scores(r, e) - dot) <= 1e-12);
    }
  }

  CHECK_THROWS(f.attention.score(g, g.constant(nn::Tensor<double>(1, kDim + 1)), bank));
}

TEST_CASE("argmax follows inner-product geometry") {
  // Pooled rows along distinct axes; a query equal to row k is orthogonal
  // to every other row.
  nn::Graph<double> g;
  nn::Tensor<double> enc(4, kDim);
  for (int i = 0; i < 4; ++i) enc(i, i) = 1.0 + i;
  bam::BiasBank<double> bank{g.constant(enc), {{0, 1}, {1, 1}, {2, 1}, {3, 1}}, g.constant(enc)};
  Fixture f;
  for (int k = 0; k < 4; ++k) {
    nn::Tensor<double> s(1, kDim);
    s(0, k) = enc(k, k);
    auto scores = f.attention.score(g, g.constant(s), bank).value();
    CHECK(bam::select<double>(scores.row(0)) == k);
  }
}

TEST_CASE("select") {
  std::vector<double> one = {3.0}, tie = {1.0, 5.0, 5.0};
  CHECK(bam::select<double>(one) == 0);
  CHECK(bam::select<double>(tie) == 1);
  std::vector<double> empty;
  CHECK_THROWS_AS(bam::select<double>(empty), std::invalid_argument);

  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> len(1, 30), coarse(-3, 3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(len(rng));
    for (auto& x : v) x = coarse(rng);  // coarse values force ties
    int oracle = 0;
    for (size_t i = 0; i < v.size(); ++i)
      if (v[i] > v[oracle]) oracle = static_cast<int>(i);
    CHECK(bam::select<double>(v) == oracle);

    std::vector<double> shifted = v, cubed = v, squashed = v;
    for (auto& x : shifted) x += 17.25;
    for (auto& x : cubed) x = x * x * x;
    for (auto& x : squashed) x = std::tanh(x / 4);
    CHECK(bam::select<double>(shifted) == oracle);
    CHECK(bam::select<double>(cubed) == oracle);
    CHECK(bam::select<double>(squashed) == oracle);
  }
}

TEST_CASE("augment") {
  Fixture f;
  std::mt19937_64 rng(21);
  auto s = random_tensor(3, kDim, rng);

  SUBCASE("matches a hand-composed attention") {
    nn::Graph<double> g;
    auto bank = f.bank(g, {"ab", "cde", "f"});
    std::vector<int> idx = {2, 0, 1};
    auto out = f.attention.augment(g, g.constant(s), bank, idx).value();
    for (int r = 0; r < 3; ++r) {
      auto expect =
          naive_augment(s.row(r), bank.encodings.value(), bank.segments[idx[r]], f.attention.attn);
      for (int c = 0; c < kDim; ++c) CHECK(std::abs(out(r, c) - expect[c]) <= 1e-10);
    }
  }

  SUBCASE("dummy entry is a single key") {
    nn::Graph<double> g;
    auto bank = f.bank(g, {"ab"});
    std::vector<int> idx = {0, 0, 0};
    auto out = f.attention.augment(g, g.constant(s), bank, idx).value();
    const auto& mha = f.attention.attn;
    auto v = naive_linear(f.dummy->value.row(0), *mha.v_proj.weight, *mha.v_proj.bias);
    auto o = naive_linear(v, *mha.out_proj.weight, *mha.out_proj.bias);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < kDim; ++c) CHECK(std::abs(out(r, c) - (s(r, c) + o[c])) <= 1e-12);
  }

  SUBCASE("zero output projection is the identity") {
    f.attention.attn.out_proj.weight->value.fill(0.0);
    f.attention.attn.out_proj.bias->value.fill(0.0);
    nn::Graph<double> g;
    auto bank = f.bank(g, {"ab", "cde"});
    std::vector<int> idx = {1, 2, 0};
    CHECK(f.attention.augment(g, g.constant(s), bank, idx).value() == s);
  }

  SUBCASE("index errors") {
    nn::Graph<double> g;
    auto bank = f.bank(g, {"ab"});
    std::vector<int> bad = {0, 2, 0}, short_list = {0};
    CHECK_THROWS_AS(f.attention.augment(g, g.constant(s), bank, bad), std::out_of_range);
    CHECK_THROWS_AS(f.attention.augment(g, g.constant(s), bank, short_list),
                    std::invalid_argument);
  }
}

TEST_CASE("forward selection and teacher forcing") {
  Fixture f;
  std::mt19937_64 rng(4);
  auto s = random_tensor(5, kDim, rng);

  nn::Graph<double> g;
  auto empty = f.bank(g, {});
  auto inf = f.attention.forward(g, g.constant(s), empty);
  CHECK(inf.indices == std::vector<int>(5, 0));

  auto bank = f.bank(g, {"ab", "cde", "f", "ghij"});
  auto free_run = f.attention.forward(g, g.constant(s), bank);
  CHECK(free_run.indices == bam::select_rows(free_run.scores.value()));

  std::vector<int> argmax = free_run.indices;
  auto forced_same = f.attention.forward(g, g.constant(s), bank, std::span<const int>(argmax));
  CHECK(forced_same.augmented.value() == free_run.augmented.value());
  CHECK(forced_same.scores.value() == free_run.scores.value());

  // Force an index that is not the argmax for every row.
  std::vector<int> other(5);
  for (int r = 0; r < 5; ++r) other[r] = (argmax[r] + 1) % bank.size();
  auto forced = f.attention.forward(g, g.constant(s), bank, std::span<const int>(other));
  CHECK(forced.indices == other);
  CHECK(forced.augmented.value() == f.attention.augment(g, g.constant(s), bank, other).value());
  CHECK(forced.scores.value() == free_run.scores.value());
}

TEST_CASE("gradients through scores and attention") {
  Fixture f;
  std::mt19937_64 rng(12);
  auto s = random_tensor(4, kDim, rng);
  auto proj = &f.store.add("probe", 1, kDim);
  randomize(f.store, rng);
  std::vector<int> teacher = {1, 0, 3, 2}, rank_targets = {1, 0, 3, 2};
  auto loss = [&](nn::Graph<double>& g) {
    auto bank = f.bank(g, {"ab", "cde", "f"});
    auto out = f.attention.forward(g, g.constant(s), bank, std::span<const int>(teacher));
    auto rank = nn::cross_entropy(out.scores, rank_targets);
    auto probe = nn::sum(nn::matmul_nt(out.augmented, g.parameter(*proj)));
    std::vector<nn::Var<double>> parts = {rank, probe};
    std::vector<double> w = {1.0, 0.3};
    return nn::weighted_sum<double>(parts, w);
  };
  auto result = adacs::testing::check_gradients(f.store, loss);
  INFO("worst " << result.worst_parameter << "[" << result.worst_index
                << "] analytic=" << result.worst_analytic << " numeric=" << result.worst_numeric);
  CHECK(result.max_rel_error < 1e-4);
  CHECK(result.checked == f.store.count());
}

TEST_CASE("frozen bank rebinds identical values") {
  Fixture f;
  nn::Graph<double> g(false);
  auto bank = f.bank(g, {"ab", "cde"});
  auto frozen = bam::FrozenBank<double>::freeze(bank);
  nn::Graph<double> g2(false);
  auto bound = frozen.bind(g2);
  CHECK(bound.encodings.value() == bank.encodings.value());
  CHECK(bound.pooled.value() == bank.pooled.value());
  CHECK(bound.segments == bank.segments);
}
