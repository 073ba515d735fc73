#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "transkb/tensor.hpp"
#include "transkb/types.hpp"
#include "transkb/vocabulary.hpp"

namespace transkb {

// Parses `head<TAB>relation<TAB>tail` lines. New names register in the given
// vocabulary in encounter order; empty lines are ignored.
std::vector<Triple> parse_triples(std::istream& in, Vocabulary& vocab,
                                  const std::string& source_name = "<triples>");

enum class DescriptionMode {
  strict,   // unknown entity names are an error
  lenient,  // unknown entity names are skipped and counted
};

struct DescriptionParse {
  std::unordered_map<EntityId, std::string> text;
  std::int64_t skipped = 0;      // lenient mode: lines naming unknown entities
  std::int64_t overwritten = 0;  // duplicate entity lines (last one wins)
};

// Parses `entity<TAB>description text` lines.
DescriptionParse parse_descriptions(std::istream& in, const Vocabulary& vocab,
                                    DescriptionMode mode,
                                    const std::string& source_name = "<descriptions>");

// Pretrained word vectors, one `word v1 ... vd` line per word.
struct WordVectorTable {
  std::vector<std::string> words;
  std::unordered_map<std::string, std::int64_t> index;
  Tensor vectors;                // (word count, dim)
  std::int64_t dim = 0;
  std::int64_t duplicates = 0;   // repeated words in the file (first one wins)

  std::int64_t size() const { return static_cast<std::int64_t>(words.size()); }
  std::optional<std::int64_t> lookup(const std::string& word) const;
};

WordVectorTable parse_word_vectors(std::istream& in, std::int64_t expected_dim,
                                   const std::string& source_name = "<word vectors>");

struct Dataset {
  Vocabulary vocab;
  std::vector<Triple> train;
  std::vector<Triple> valid;
  std::vector<Triple> test;
  std::unordered_map<EntityId, std::string> descriptions;

  // Entities appearing in at least one training triple. Unseen entities keep
  // their vocabulary ids; they simply have no trained table row.
  std::unordered_set<EntityId> train_entities() const;
  std::vector<EntityId> train_entities_sorted() const;

  // Entities present in any split but lacking a (non-empty) description.
  std::vector<EntityId> entities_missing_descriptions() const;
};

struct SplitCounts {
  std::int64_t both_seen = 0;
  std::int64_t one_unseen = 0;
  std::int64_t both_unseen = 0;

  std::int64_t total() const { return both_seen + one_unseen + both_unseen; }
};

struct SplitReport {
  SplitCounts valid;
  SplitCounts test;
  // True when every validation/test triple has an unseen entity on exactly
  // one side, which is what description-driven evaluation requires.
  bool concept_learning_valid = false;
};

SplitReport validate_unseen_split(const Dataset& dataset);

// Text round trip used by checkpoints: names in id order, entities first.
std::string vocabulary_to_text(const Vocabulary& vocab);
Vocabulary vocabulary_from_text(const std::string& text);

}  // namespace transkb
