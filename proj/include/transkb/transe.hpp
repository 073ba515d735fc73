#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "transkb/rng.hpp"
#include "transkb/tensor.hpp"
#include "transkb/types.hpp"

namespace transkb {

enum class Distance { l1, l2 };

std::string distance_name(Distance d);
Distance distance_from_name(const std::string& name);

// The memory store: entity rows are kept at unit L2 norm by training;
// relations act as translations between them.
struct EmbeddingStore {
  Tensor entities;   // (entity count, n)
  Tensor relations;  // (relation count, n)
  Distance distance = Distance::l1;

  std::int64_t dim() const { return entities.empty() ? relations.dim(1) : entities.dim(1); }
  std::int64_t entity_count() const { return entities.empty() ? 0 : entities.dim(0); }
  std::int64_t relation_count() const { return relations.empty() ? 0 : relations.dim(0); }

  std::span<const real> entity(EntityId id) const;
  std::span<const real> relation(RelationId id) const;
};

// d(a + r, b) under the given distance.
real translation_distance(std::span<const real> a, std::span<const real> r,
                          std::span<const real> b, Distance distance);

// d(e1 + r, e2): lower is more plausible.
real score(const EmbeddingStore& store, const Triple& triple);

enum class CorruptSide { left, right, uniform_random };

// Replaces one entity side with a uniform draw from [0, entity_count); the
// relation never changes. The draw may reproduce the original entity.
Triple corrupt(const Triple& triple, Rng& rng, std::int64_t entity_count, CorruptSide side);
// Same, drawing from an explicit candidate id list.
Triple corrupt(const Triple& triple, Rng& rng, std::span<const EntityId> candidates,
               CorruptSide side);

struct MarginBatchResult {
  real loss = 0;             // sum of hinge contributions
  std::int64_t active = 0;   // pairs with a positive hinge
};

// Margin ranking loss over aligned positive/negative batches:
//   sum_i max(0, gamma + d(pos_i) - d(neg_i)).
// Entity and relation vectors are rows of the given matrices (so the same
// code serves table lookups and encoder-produced embeddings); gradients
// accumulate into the matching grad matrices. Inactive pairs contribute
// nothing, including to gradients. For L1 the subgradient of |x| at 0 is 0.
MarginBatchResult margin_loss(const Tensor& entity_vecs, const Tensor& relation_vecs,
                              std::span<const Triple> positives,
                              std::span<const Triple> negatives, Distance distance, real gamma,
                              Tensor& entity_grad, Tensor& relation_grad);

// Loss-only variant (no gradients), for finite-difference oracles and tests.
real margin_loss_value(const Tensor& entity_vecs, const Tensor& relation_vecs,
                       std::span<const Triple> positives, std::span<const Triple> negatives,
                       Distance distance, real gamma);

enum class RenormalizeTarget { entities, relations };

// Divides each selected row by its L2 norm. A zero-norm row is an error.
void renormalize(EmbeddingStore& store, RenormalizeTarget which);
void renormalize_rows(Tensor& table, const std::string& what);

struct Neighbor {
  EntityId entity = 0;
  real distance = 0;
};

// Top-k candidates by ascending distance to the query; ties break by
// ascending entity id.
std::vector<Neighbor> nearest_neighbors(const EmbeddingStore& store,
                                        std::span<const real> query, std::int64_t k,
                                        std::span<const EntityId> candidates);

}  // namespace transkb
