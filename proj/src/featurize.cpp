#include "transkb/featurize.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace transkb {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    unsigned char uc = static_cast<unsigned char>(c);
    if (std::isalnum(uc)) {
      current.push_back(static_cast<char>(std::tolower(uc)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<std::string> extract_3grams(std::string_view word) {
  std::vector<std::string> grams;
  if (word.empty()) return grams;
  std::string marked;
  marked.reserve(word.size() + 2);
  marked.push_back('#');
  marked.append(word);
  marked.push_back('#');
  for (std::size_t i = 0; i + 3 <= marked.size(); ++i) {
    grams.push_back(marked.substr(i, 3));
  }
  return grams;
}

std::int64_t NgramVocabulary::add(const std::string& gram) {
  auto it = index_.find(gram);
  if (it != index_.end()) return it->second;
  std::int64_t id = size();
  index_.emplace(gram, id);
  grams_.push_back(gram);
  return id;
}

std::optional<std::int64_t> NgramVocabulary::lookup(const std::string& gram) const {
  auto it = index_.find(gram);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string NgramVocabulary::to_text() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < grams_.size(); ++i) {
    os << grams_[i] << "\t" << i << "\n";
  }
  return os.str();
}

NgramVocabulary NgramVocabulary::from_text(const std::string& text) {
  NgramVocabulary vocab;
  std::istringstream is(text);
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError("<ngram vocabulary>", line_no, "missing tab separator");
    }
    std::int64_t id = vocab.add(line.substr(0, tab));
    std::int64_t stated = std::stoll(line.substr(tab + 1));
    if (id != stated) {
      throw ParseError("<ngram vocabulary>", line_no,
                       "index " + std::to_string(stated) + " out of order, expected " +
                           std::to_string(id));
    }
  }
  return vocab;
}

BongResult featurize_bong(std::string_view text, NgramVocabulary& vocab, FeaturizeMode mode) {
  std::unordered_map<std::int64_t, std::int64_t> count_map;
  std::int64_t dropped = 0;
  for (const std::string& token : tokenize(text)) {
    for (const std::string& gram : extract_3grams(token)) {
      std::optional<std::int64_t> id;
      if (mode == FeaturizeMode::train) {
        id = vocab.add(gram);
      } else {
        id = vocab.lookup(gram);
      }
      if (!id) {
        ++dropped;
        continue;
      }
      ++count_map[*id];
    }
  }
  BongResult result;
  result.dropped = dropped;
  result.features = Tensor({vocab.size()});
  for (auto [id, count] : count_map) {
    result.features[id] = static_cast<real>(std::log1p(static_cast<double>(count)));
  }
  return result;
}

DescriptionMatrix build_description_matrix(std::string_view text, const WordVectorTable& wv,
                                           std::int64_t max_len) {
  if (max_len < 1) throw ConfigError("max_len must be >= 1");
  DescriptionMatrix dm;
  dm.tokens = tokenize(text);
  if (static_cast<std::int64_t>(dm.tokens.size()) > max_len) {
    dm.tokens.resize(static_cast<std::size_t>(max_len));
  }
  if (dm.tokens.empty()) {
    dm.tokens.emplace_back();  // placeholder for the single UNK column
    dm.token_indices.push_back(-1);
  } else {
    for (const std::string& token : dm.tokens) {
      std::optional<std::int64_t> idx = wv.lookup(token);
      dm.token_indices.push_back(idx ? *idx : -1);
    }
  }
  std::int64_t k = static_cast<std::int64_t>(dm.token_indices.size());
  dm.matrix = Tensor({wv.dim, k});
  for (std::int64_t i = 0; i < k; ++i) {
    std::int64_t row = dm.token_indices[static_cast<std::size_t>(i)];
    if (row < 0) continue;  // UNK column stays zero
    for (std::int64_t d = 0; d < wv.dim; ++d) {
      dm.matrix.at(d, i) = wv.vectors.at(row, d);
    }
  }
  return dm;
}

}  // namespace transkb
