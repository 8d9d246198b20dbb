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

#include <random>
#include <set>

#include "adacs/text/vocab.h"
#include "doctest.h"

using adacs::text::Vocabulary;
namespace text = adacs::text;

TEST_CASE("build_vocab ordering") {
  std::vector<std::string> corpus = {"ab"};
  auto v = Vocabulary::build(corpus);
  CHECK(v.size() == 7);
  CHECK(v.token(text::kPad) == "<pad>");
  CHECK(v.token(text::kWordSep) == "<sep>");
  CHECK(v.token(5) == "a");
  CHECK(v.token(6) == "b");

  std::vector<std::string> ba = {"ba", "ab"}, ab = {"ab", "ba"};
  CHECK(Vocabulary::build(ba) == Vocabulary::build(ab));
  CHECK(Vocabulary::build(ba).to_json().dump() == Vocabulary::build(ab).to_json().dump());

  std::vector<std::string> empty;
  CHECK_THROWS_AS(Vocabulary::build(empty), std::invalid_argument);
}

TEST_CASE("vocabulary size over letters, digits and spaces") {
  // Space maps to WORD_SEP, so only the 36 distinct non-space characters
  // add ids.
  std::vector<std::string> corpus = {"the quick brown fox jumps over the lazy dog 0123456789"};
  std::set<char> distinct;
  for (char c : corpus[0])
    if (c != ' ') distinct.insert(c);
  auto v = Vocabulary::build(corpus);
  CHECK(distinct.size() == 36);
  CHECK(v.size() == text::kNumSpecials + static_cast<int>(distinct.size()));
}

TEST_CASE("encode and decode") {
  std::vector<std::string> corpus = {"ab x"};
  auto v = Vocabulary::build(corpus);
  CHECK(v.encode("").empty());
  CHECK(v.encode("a b") == text::TokenSeq{v.id(U'a'), text::kWordSep, v.id(U'b')});
  CHECK(v.encode("aq")[1] == text::kUnk);
  std::vector<int> empty;
  CHECK(v.decode(empty).empty());
  std::vector<int> ids = {v.id(U'a'), text::kWordSep, v.id(U'b')};
  CHECK(v.decode(ids) == "a b");
  std::vector<int> framed = {text::kBos, v.id(U'x'), text::kEos};
  CHECK(v.decode(framed) == "x");
  std::vector<int> bad = {v.size()};
  CHECK_THROWS_AS(v.decode(bad), std::out_of_range);
}

TEST_CASE("round trip and prefix stability on random in-vocabulary strings") {
  std::vector<std::string> corpus = {"abcdefghijklmnopqrstuvwxyz 0123456789"};
  auto v = Vocabulary::build(corpus);
  const std::string alphabet = "abcdefghijklmnopqrstuvwxyz 0123456789";
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<size_t> pick(0, alphabet.size() - 1), len(0, 40);
  for (int trial = 0; trial < 1000; ++trial) {
    std::string s, t;
    for (size_t i = len(rng); i > 0; --i) s.push_back(alphabet[pick(rng)]);
    for (size_t i = len(rng); i > 0; --i) t.push_back(alphabet[pick(rng)]);
    CHECK(v.decode(v.encode(s)) == s);
    auto joined = v.encode(s);
    auto tail = v.encode(t);
    joined.insert(joined.end(), tail.begin(), tail.end());
    CHECK(v.encode(s + t) == joined);
  }
}

TEST_CASE("json round trip and utf-8 code points") {
  std::vector<std::string> corpus = {"từ che vô lét"};
  auto v = Vocabulary::build(corpus);
  auto back = Vocabulary::from_json(v.to_json());
  CHECK(back == v);
  CHECK(v.encode("vô").size() == 2);
  CHECK(v.decode(v.encode("che vô lét")) == "che vô lét");
}
