#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "transkb/dataset.hpp"

namespace transkb::testkit {

struct RingSpec {
  std::int64_t entities = 100;
  std::int64_t valid_every = 10;  // every k-th fact goes to validation (0 = none)
  std::int64_t test_every = 0;    // every k-th fact goes to test (0 = none)
};

// Cycle graph: entities e000..e(n-1), one relation "next", facts
// (e_i, next, e_(i+1 mod n)). Exactly translation-consistent: a single
// translation vector can satisfy every fact, so a translating model can
// drive all training distances to zero. Every entity keeps at least one
// training fact, so the candidate set stays the full entity set.
Dataset make_ring(const RingSpec& spec = {});

struct NameableSpec {
  std::int64_t items = 180;
  std::int64_t categories = 20;
  // Items with index >= items - holdout_items appear only in the test split,
  // so each of their membership facts has exactly one unseen side.
  std::int64_t holdout_items = 40;
};

// Membership KB whose facts are decidable from descriptions alone: item i
// belongs to category (i % categories) via relation "in_group". Every item
// description carries a unique item token plus its category's token, and
// every category description carries the category token.
Dataset make_nameable(const NameableSpec& spec = {});

struct KbFiles {
  std::string train;
  std::string valid;
  std::string test;
  std::string descriptions;
  std::string word_vectors;
};

// Writes the dataset in the formats the engine ingests (paths are only set
// for the pieces actually written). Word vectors, when word_dim > 0, are
// deterministic unit vectors for every token appearing in a description.
KbFiles write_kb(const Dataset& data, const std::filesystem::path& dir,
                 bool with_descriptions = false, std::int64_t word_dim = 0);

}  // namespace transkb::testkit
