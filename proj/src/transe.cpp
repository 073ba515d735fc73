#include "transkb/transe.hpp"

#include <algorithm>
#include <cmath>

namespace transkb {

std::string distance_name(Distance d) { return d == Distance::l1 ? "l1" : "l2"; }

Distance distance_from_name(const std::string& name) {
  if (name == "l1") return Distance::l1;
  if (name == "l2") return Distance::l2;
  throw ConfigError("unknown distance '" + name + "' (expected l1 or l2)");
}

std::span<const real> EmbeddingStore::entity(EntityId id) const {
  if (id < 0 || id >= entity_count()) {
    throw IndexError("entity id " + std::to_string(id) + " out of range [0, " +
                     std::to_string(entity_count()) + ")");
  }
  return entities.row(id);
}

std::span<const real> EmbeddingStore::relation(RelationId id) const {
  if (id < 0 || id >= relation_count()) {
    throw IndexError("relation id " + std::to_string(id) + " out of range [0, " +
                     std::to_string(relation_count()) + ")");
  }
  return relations.row(id);
}

real translation_distance(std::span<const real> a, std::span<const real> r,
                          std::span<const real> b, Distance distance) {
  real acc = 0;
  if (distance == Distance::l1) {
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] + r[i] - b[i]);
    return acc;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    real d = a[i] + r[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

real score(const EmbeddingStore& store, const Triple& triple) {
  return translation_distance(store.entity(triple.head), store.relation(triple.relation),
                              store.entity(triple.tail), store.distance);
}

Triple corrupt(const Triple& triple, Rng& rng, std::int64_t entity_count, CorruptSide side) {
  if (entity_count < 2) {
    throw ConfigError("corrupt requires at least 2 entities");
  }
  Triple out = triple;
  bool left = side == CorruptSide::left ||
              (side == CorruptSide::uniform_random && rng.coin());
  EntityId replacement = rng.uniform_index(entity_count);
  if (left) {
    out.head = replacement;
  } else {
    out.tail = replacement;
  }
  return out;
}

Triple corrupt(const Triple& triple, Rng& rng, std::span<const EntityId> candidates,
               CorruptSide side) {
  if (candidates.size() < 2) {
    throw ConfigError("corrupt requires at least 2 candidate entities");
  }
  Triple out = triple;
  bool left = side == CorruptSide::left ||
              (side == CorruptSide::uniform_random && rng.coin());
  EntityId replacement =
      candidates[static_cast<std::size_t>(rng.uniform_index(static_cast<std::int64_t>(candidates.size())))];
  if (left) {
    out.head = replacement;
  } else {
    out.tail = replacement;
  }
  return out;
}

namespace {

// Accumulates sign * d'(u) into the three gradient rows of one triple, where
// u = head + relation - tail.
void accumulate_distance_grad(const Tensor& entity_vecs, const Tensor& relation_vecs,
                              const Triple& t, Distance distance, real sign,
                              Tensor& entity_grad, Tensor& relation_grad) {
  std::span<const real> h = entity_vecs.row(t.head);
  std::span<const real> r = relation_vecs.row(t.relation);
  std::span<const real> b = entity_vecs.row(t.tail);
  std::span<real> gh = entity_grad.row(t.head);
  std::span<real> gr = relation_grad.row(t.relation);
  std::span<real> gb = entity_grad.row(t.tail);
  std::size_t n = h.size();
  if (distance == Distance::l1) {
    for (std::size_t i = 0; i < n; ++i) {
      real u = h[i] + r[i] - b[i];
      real s = u > 0 ? sign : (u < 0 ? -sign : 0);
      gh[i] += s;
      gr[i] += s;
      gb[i] -= s;
    }
    return;
  }
  real nrm = 0;
  for (std::size_t i = 0; i < n; ++i) {
    real u = h[i] + r[i] - b[i];
    nrm += u * u;
  }
  nrm = std::sqrt(nrm);
  if (nrm == 0) return;  // subgradient 0 at the exact minimum
  for (std::size_t i = 0; i < n; ++i) {
    real g = sign * (h[i] + r[i] - b[i]) / nrm;
    gh[i] += g;
    gr[i] += g;
    gb[i] -= g;
  }
}

real triple_distance(const Tensor& entity_vecs, const Tensor& relation_vecs, const Triple& t,
                     Distance distance) {
  return translation_distance(entity_vecs.row(t.head), relation_vecs.row(t.relation),
                              entity_vecs.row(t.tail), distance);
}

}  // namespace

MarginBatchResult margin_loss(const Tensor& entity_vecs, const Tensor& relation_vecs,
                              std::span<const Triple> positives,
                              std::span<const Triple> negatives, Distance distance, real gamma,
                              Tensor& entity_grad, Tensor& relation_grad) {
  if (positives.size() != negatives.size()) {
    throw DimensionError("margin_loss batches must align: " + std::to_string(positives.size()) +
                         " positives vs " + std::to_string(negatives.size()) + " negatives");
  }
  if (!entity_grad.same_shape(entity_vecs) || !relation_grad.same_shape(relation_vecs)) {
    throw DimensionError("margin_loss gradient matrices must match value matrices");
  }
  MarginBatchResult result;
  for (std::size_t i = 0; i < positives.size(); ++i) {
    real d_pos = triple_distance(entity_vecs, relation_vecs, positives[i], distance);
    real d_neg = triple_distance(entity_vecs, relation_vecs, negatives[i], distance);
    real hinge = gamma + d_pos - d_neg;
    if (hinge <= 0) continue;
    result.loss += hinge;
    ++result.active;
    accumulate_distance_grad(entity_vecs, relation_vecs, positives[i], distance, 1, entity_grad,
                             relation_grad);
    accumulate_distance_grad(entity_vecs, relation_vecs, negatives[i], distance, -1, entity_grad,
                             relation_grad);
  }
  return result;
}

real margin_loss_value(const Tensor& entity_vecs, const Tensor& relation_vecs,
                       std::span<const Triple> positives, std::span<const Triple> negatives,
                       Distance distance, real gamma) {
  real loss = 0;
  for (std::size_t i = 0; i < positives.size(); ++i) {
    real hinge = gamma + triple_distance(entity_vecs, relation_vecs, positives[i], distance) -
                 triple_distance(entity_vecs, relation_vecs, negatives[i], distance);
    if (hinge > 0) loss += hinge;
  }
  return loss;
}

void renormalize_rows(Tensor& table, const std::string& what) {
  std::int64_t rows = table.dim(0);
  for (std::int64_t i = 0; i < rows; ++i) {
    std::span<real> row = table.row(i);
    real nrm = l2_norm(row);
    if (!(nrm > 0)) {
      throw NumericError("cannot renormalize zero-norm " + what + " row " + std::to_string(i));
    }
    for (real& v : row) v /= nrm;
  }
}

void renormalize(EmbeddingStore& store, RenormalizeTarget which) {
  if (which == RenormalizeTarget::entities) {
    renormalize_rows(store.entities, "entity");
  } else {
    renormalize_rows(store.relations, "relation");
  }
}

std::vector<Neighbor> nearest_neighbors(const EmbeddingStore& store,
                                        std::span<const real> query, std::int64_t k,
                                        std::span<const EntityId> candidates) {
  if (k < 1) throw ConfigError("nearest_neighbors requires k >= 1");
  if (candidates.empty()) throw ConfigError("nearest_neighbors requires a non-empty candidate set");
  std::vector<Neighbor> all;
  all.reserve(candidates.size());
  for (EntityId id : candidates) {
    std::span<const real> row = store.entity(id);
    real dist = 0;
    if (store.distance == Distance::l1) {
      for (std::size_t i = 0; i < query.size(); ++i) dist += std::abs(query[i] - row[i]);
    } else {
      for (std::size_t i = 0; i < query.size(); ++i) {
        real d = query[i] - row[i];
        dist += d * d;
      }
      dist = std::sqrt(dist);
    }
    all.push_back({id, dist});
  }
  auto cmp = [](const Neighbor& a, const Neighbor& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.entity < b.entity;
  };
  std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(k), all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(), cmp);
  all.resize(keep);
  return all;
}

}  // namespace transkb
