#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "transkb/rng.hpp"
#include "transkb/transe.hpp"

namespace transkb {

enum class Side {
  left,   // the head slot
  right,  // the tail slot
};

// Rank of a triple's entity in the given slot against every candidate filling
// that slot, with the rest of the triple fixed. Rank 1 is best. Ties resolve
// in the model's favor (1 + number of strictly closer candidates) unless
// `pessimistic`, which counts tied candidates (other than the true entity)
// as ahead.
std::int64_t rank_side(const EmbeddingStore& store, const Triple& triple, Side side,
                       std::span<const EntityId> candidates, bool pessimistic = false);

struct EvalOptions {
  bool pessimistic = false;
  std::int64_t sample_size = 0;  // 0 = evaluate every triple
  std::uint64_t seed = 42;       // drives sampling only
  int threads = 1;
  std::int64_t hits_cutoff = 10;
};

struct EvalReport {
  std::int64_t evaluated = 0;
  std::int64_t total_triples = 0;
  std::int64_t candidate_count = 0;
  std::int64_t hits_cutoff = 10;
  real left_mean_rank = 0;
  real right_mean_rank = 0;
  real mean_rank = 0;  // average of the two sides
  real left_hits = 0;  // percentage of ranks <= hits_cutoff
  real right_hits = 0;
  real hits = 0;
  // Parallel arrays, one entry per evaluated triple. `triple_indices` points
  // back into the input span (ascending, so sampling keeps input order).
  std::vector<std::int64_t> triple_indices;
  std::vector<std::int64_t> left_ranks;
  std::vector<std::int64_t> right_ranks;

  std::string to_text() const;
  std::string to_tsv() const;
  std::string ranks_tsv() const;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

// Link prediction over the given triples: each triple is ranked on both
// slots against `candidates` (typically the entities seen in training). A
// positive sample_size evaluates a without-replacement sample; threads > 1
// splits the work by triple index, which leaves the report identical to the
// single-threaded one.
EvalReport link_prediction_eval(const EmbeddingStore& store, std::span<const Triple> triples,
                                std::span<const EntityId> candidates,
                                const EvalOptions& options = {});

struct UnseenEvalOptions {
  bool pessimistic = false;
  // Also rank the slot occupied by the unseen entity (its description-derived
  // embedding competing against the seen candidates).
  bool rank_unseen_side = false;
  std::int64_t hits_cutoff = 10;
};

struct UnseenEvalReport {
  std::int64_t evaluated = 0;  // triples with exactly one unseen entity
  std::int64_t skipped_both_seen = 0;
  std::int64_t skipped_both_unseen = 0;
  std::int64_t hits_cutoff = 10;
  real mean_rank = 0;
  real hits = 0;  // percentage
  std::vector<std::int64_t> ranks;

  std::string to_text() const;
  std::string to_tsv() const;

  friend bool operator==(const UnseenEvalReport&, const UnseenEvalReport&) = default;
};

// Evaluation for triples whose entities may be absent from training: for each
// triple with exactly one unseen entity, rank the seen slot (the unseen
// entity's embedding stays in the query). Triples with zero or two unseen
// entities are skipped and counted. The store must hold embeddings for every
// entity referenced, including unseen ones.
UnseenEvalReport unseen_entity_eval(const EmbeddingStore& store, std::span<const Triple> triples,
                                    const std::unordered_set<EntityId>& seen,
                                    std::span<const EntityId> candidates,
                                    const UnseenEvalOptions& options = {});

}  // namespace transkb
