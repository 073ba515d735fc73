#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "transkb/featurize.hpp"

using namespace transkb;

namespace {

std::vector<std::int64_t> nonzero_indices(const Tensor& t) {
  std::vector<std::int64_t> out;
  for (std::int64_t i = 0; i < t.size(); ++i) {
    if (t[i] != real(0)) out.push_back(i);
  }
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("featurize");

TEST_CASE("tokenize lowercases and splits on non-alphanumeric runs") {
  CHECK(tokenize("Hello, world!") == std::vector<std::string>{"hello", "world"});
  CHECK(tokenize("a-b  c_d") == std::vector<std::string>{"a", "b", "c", "d"});
  CHECK(tokenize("42nd st.") == std::vector<std::string>{"42nd", "st"});
  CHECK(tokenize("  --  ").empty());
  CHECK(tokenize("").empty());
}

TEST_CASE("3-gram extraction walks the boundary-marked word") {
  CHECK(extract_3grams("word") == std::vector<std::string>{"#wo", "wor", "ord", "rd#"});
  CHECK(extract_3grams("a") == std::vector<std::string>{"#a#"});
  CHECK(extract_3grams("ab") == std::vector<std::string>{"#ab", "ab#"});
  // Repeated grams are kept: counts matter downstream.
  CHECK(extract_3grams("abab") == std::vector<std::string>{"#ab", "aba", "bab", "ab#"});
}

TEST_CASE("a word of length L yields exactly L grams") {
  std::string word;
  for (int len = 1; len <= 24; ++len) {
    word.push_back(static_cast<char>('a' + len % 26));
    CHECK(extract_3grams(word).size() == static_cast<std::size_t>(len));
  }
}

TEST_CASE("letter-only trigrams over a-z span a 17576-gram space") {
  // Sanity anchor for sizing the feature dimension: 26^3 interior grams.
  CHECK(26 * 26 * 26 == 17576);
  NgramVocabulary vocab;
  std::string gram = "abc";
  for (char a = 'a'; a <= 'z'; ++a)
    for (char b = 'a'; b <= 'z'; ++b)
      for (char c = 'a'; c <= 'z'; ++c) {
        gram[0] = a;
        gram[1] = b;
        gram[2] = c;
        vocab.add(gram);
      }
  CHECK(vocab.size() == 17576);
  CHECK(vocab.lookup("aaa") == 0);
  CHECK(vocab.lookup("zzz") == 17575);
}

TEST_CASE("ngram vocabulary assigns ids in encounter order and round-trips") {
  NgramVocabulary vocab;
  CHECK(vocab.add("#wo") == 0);
  CHECK(vocab.add("wor") == 1);
  CHECK(vocab.add("#wo") == 0);  // re-adding is a lookup
  CHECK(vocab.size() == 2);
  CHECK(vocab.lookup("wor") == 1);
  CHECK_FALSE(vocab.lookup("ord").has_value());

  NgramVocabulary restored = NgramVocabulary::from_text(vocab.to_text());
  CHECK(restored == vocab);

  CHECK_THROWS_AS(NgramVocabulary::from_text("#wo\t1\nwor\t0\n"), ParseError);
}

TEST_CASE("bag-of-3-grams features are log(1 + count)") {
  NgramVocabulary vocab;
  BongResult one = featurize_bong("word", vocab, FeaturizeMode::train);
  CHECK(vocab.size() == 4);
  CHECK(one.dropped == 0);
  REQUIRE(one.features.size() == 4);
  for (std::int64_t i = 0; i < 4; ++i) {
    CHECK(one.features[i] == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  }

  NgramVocabulary vocab2;
  BongResult twice = featurize_bong("word word", vocab2, FeaturizeMode::train);
  CHECK(vocab2.size() == 4);
  REQUIRE(twice.features.size() == 4);
  for (std::int64_t i = 0; i < 4; ++i) {
    CHECK(twice.features[i] == doctest::Approx(std::log(3.0)).epsilon(1e-15));
  }
}

TEST_CASE("inference mode drops unseen grams without touching the vocabulary") {
  NgramVocabulary vocab;
  featurize_bong("word", vocab, FeaturizeMode::train);
  REQUIRE(vocab.size() == 4);

  // "ward" shares only the final gram rd# with "word".
  BongResult out = featurize_bong("ward", vocab, FeaturizeMode::infer);
  CHECK(vocab.size() == 4);
  CHECK(out.dropped == 3);
  std::vector<std::int64_t> hot = nonzero_indices(out.features);
  REQUIRE(hot.size() == 1);
  CHECK(vocab.grams()[static_cast<std::size_t>(hot[0])] == "rd#");
  CHECK(out.features[hot[0]] == doctest::Approx(std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("feature vectors always span the full vocabulary") {
  NgramVocabulary vocab;
  featurize_bong("word games", vocab, FeaturizeMode::train);
  std::int64_t grown = vocab.size();
  BongResult out = featurize_bong("word", vocab, FeaturizeMode::infer);
  CHECK(out.features.size() == grown);
  CHECK(nonzero_indices(out.features).size() == 4);

  BongResult empty = featurize_bong("", vocab, FeaturizeMode::infer);
  CHECK(empty.features.size() == grown);
  CHECK(nonzero_indices(empty.features).empty());
}

TEST_CASE("description matrices stack word vectors column by column") {
  std::istringstream wv_text(
      "red 1 0\n"
      "blue 0 1\n");
  WordVectorTable wv = parse_word_vectors(wv_text, 2);

  DescriptionMatrix m = build_description_matrix("Red, blue RED", wv, 16);
  CHECK(m.tokens == std::vector<std::string>{"red", "blue", "red"});
  CHECK(m.token_indices == std::vector<std::int64_t>{0, 1, 0});
  REQUIRE(m.matrix.shape() == std::vector<std::int64_t>{2, 3});
  CHECK(m.matrix.at(0, 0) == real(1));
  CHECK(m.matrix.at(1, 0) == real(0));
  CHECK(m.matrix.at(0, 1) == real(0));
  CHECK(m.matrix.at(1, 1) == real(1));
  CHECK(m.matrix.at(0, 2) == real(1));
}

TEST_CASE("unknown tokens become zero UNK columns") {
  std::istringstream wv_text("red 1 0\n");
  WordVectorTable wv = parse_word_vectors(wv_text, 2);

  DescriptionMatrix m = build_description_matrix("red mars", wv, 16);
  CHECK(m.token_indices == std::vector<std::int64_t>{0, -1});
  CHECK(m.matrix.at(0, 1) == real(0));
  CHECK(m.matrix.at(1, 1) == real(0));

  DescriptionMatrix empty = build_description_matrix("", wv, 16);
  CHECK(empty.token_indices == std::vector<std::int64_t>{-1});
  REQUIRE(empty.matrix.shape() == std::vector<std::int64_t>{2, 1});
}

TEST_CASE("descriptions longer than max_len are truncated") {
  std::istringstream wv_text("red 1 0\n");
  WordVectorTable wv = parse_word_vectors(wv_text, 2);
  DescriptionMatrix m = build_description_matrix("red red red red red", wv, 3);
  CHECK(m.tokens.size() == 3);
  CHECK(m.matrix.dim(1) == 3);
}

TEST_SUITE_END();
