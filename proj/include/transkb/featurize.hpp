#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "transkb/dataset.hpp"
#include "transkb/tensor.hpp"

namespace transkb {

// Lowercases and splits on runs of non-alphanumeric bytes.
std::vector<std::string> tokenize(std::string_view text);

// All consecutive length-3 substrings of the boundary-marked word `#word#`.
// A word of length L yields exactly L grams.
std::vector<std::string> extract_3grams(std::string_view word);

class NgramVocabulary {
 public:
  std::int64_t add(const std::string& gram);
  std::optional<std::int64_t> lookup(const std::string& gram) const;
  std::int64_t size() const { return static_cast<std::int64_t>(grams_.size()); }
  const std::vector<std::string>& grams() const { return grams_; }

  // `gram<TAB>index` lines, one per gram, in index order.
  std::string to_text() const;
  static NgramVocabulary from_text(const std::string& text);

  friend bool operator==(const NgramVocabulary& a, const NgramVocabulary& b) {
    return a.grams_ == b.grams_;
  }

 private:
  std::unordered_map<std::string, std::int64_t> index_;
  std::vector<std::string> grams_;
};

enum class FeaturizeMode {
  train,  // unseen grams extend the vocabulary
  infer,  // unseen grams are dropped and counted
};

struct BongResult {
  Tensor features;           // log(1 + count) per gram, length = vocabulary size
  std::int64_t dropped = 0;  // infer mode: occurrences of grams not in the vocabulary
};

// Bag-of-3-grams features over all tokens of a description.
BongResult featurize_bong(std::string_view text, NgramVocabulary& vocab, FeaturizeMode mode);

// The CNN input matrix: column i is the word vector of token i.
struct DescriptionMatrix {
  Tensor matrix;                           // (word dim, token count)
  std::vector<std::string> tokens;
  std::vector<std::int64_t> token_indices;  // row in the table, or -1 for UNK
};

// Maps tokens to pretrained vectors; out-of-vocabulary tokens become a zero
// UNK column (index -1). Empty descriptions yield a single UNK column.
DescriptionMatrix build_description_matrix(std::string_view text, const WordVectorTable& wv,
                                           std::int64_t max_len);

}  // namespace transkb
