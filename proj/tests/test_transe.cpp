#include <cmath>
#include <vector>

#include "doctest.h"
#include "transkb/kernels.hpp"
#include "transkb/rng.hpp"
#include "transkb/transe.hpp"

using namespace transkb;

namespace {

EmbeddingStore make_store(std::vector<std::vector<real>> entity_rows,
                          std::vector<std::vector<real>> relation_rows, Distance distance) {
  EmbeddingStore store;
  store.distance = distance;
  std::int64_t n = static_cast<std::int64_t>(entity_rows[0].size());
  std::vector<real> flat;
  for (const auto& row : entity_rows) flat.insert(flat.end(), row.begin(), row.end());
  store.entities = Tensor::from_data({static_cast<std::int64_t>(entity_rows.size()), n}, flat);
  flat.clear();
  for (const auto& row : relation_rows) flat.insert(flat.end(), row.begin(), row.end());
  store.relations =
      Tensor::from_data({static_cast<std::int64_t>(relation_rows.size()), n}, flat);
  return store;
}

EmbeddingStore random_store(std::int64_t entities, std::int64_t relations, std::int64_t n,
                            Distance distance, Rng& rng) {
  EmbeddingStore store;
  store.distance = distance;
  store.entities = Tensor({entities, n});
  store.relations = Tensor({relations, n});
  for (real& v : store.entities.values()) v = static_cast<real>(rng.uniform(-1.0, 1.0));
  for (real& v : store.relations.values()) v = static_cast<real>(rng.uniform(-1.0, 1.0));
  return store;
}

}  // namespace

TEST_SUITE_BEGIN("transe");

TEST_CASE("translation distance matches hand-computed cases") {
  // L2 is the plain Euclidean distance, not its square.
  EmbeddingStore l2 = make_store({{1, 0}, {0, 1}}, {{0, 0}}, Distance::l2);
  CHECK(score(l2, {0, 0, 1}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  EmbeddingStore l1 = make_store({{1, 0}, {1, 1}}, {{0, 1}}, Distance::l1);
  CHECK(score(l1, {0, 0, 1}) == real(0));
  CHECK(score(l1, {1, 0, 0}) == real(2));  // |1+0-1| + |1+1-0|
}

TEST_CASE("score recomputes from raw rows for random stores") {
  Rng rng(7);
  EmbeddingStore store = random_store(6, 3, 5, Distance::l1, rng);
  for (int trial = 0; trial < 50; ++trial) {
    Triple t{static_cast<EntityId>(rng.uniform_index(6)),
             static_cast<RelationId>(rng.uniform_index(3)),
             static_cast<EntityId>(rng.uniform_index(6))};
    for (Distance d : {Distance::l1, Distance::l2}) {
      store.distance = d;
      double expected = 0;
      for (std::int64_t k = 0; k < 5; ++k) {
        double diff = static_cast<double>(store.entities.at(t.head, k)) +
                      static_cast<double>(store.relations.at(t.relation, k)) -
                      static_cast<double>(store.entities.at(t.tail, k));
        expected += d == Distance::l1 ? std::abs(diff) : diff * diff;
      }
      if (d == Distance::l2) expected = std::sqrt(expected);
      CHECK(score(store, t) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("distance names round-trip and reject unknowns") {
  CHECK(distance_name(Distance::l1) == "l1");
  CHECK(distance_name(Distance::l2) == "l2");
  CHECK(distance_from_name("l1") == Distance::l1);
  CHECK(distance_from_name("l2") == Distance::l2);
  CHECK_THROWS_AS(distance_from_name("cosine"), ConfigError);
}

TEST_CASE("corruption replaces exactly one side and never the relation") {
  Rng rng(11);
  Triple original{3, 1, 7};
  std::int64_t left = 0;
  std::int64_t right = 0;
  std::vector<std::int64_t> draw_counts(10, 0);
  const int trials = 100000;
  for (int i = 0; i < trials; ++i) {
    Triple c = corrupt(original, rng, 10, CorruptSide::uniform_random);
    CHECK(c.relation == original.relation);
    bool head_changed = c.head != original.head;
    bool tail_changed = c.tail != original.tail;
    // At most one side differs; a no-op draw (same entity) is legal.
    CHECK_FALSE((head_changed && tail_changed));
    if (head_changed) ++left;
    if (tail_changed) ++right;
    if (head_changed) ++draw_counts[static_cast<std::size_t>(c.head)];
    if (tail_changed) ++draw_counts[static_cast<std::size_t>(c.tail)];
  }
  // Each side is picked half the time; 9 of 10 draws change the entity.
  double left_rate = static_cast<double>(left) / trials;
  double right_rate = static_cast<double>(right) / trials;
  CHECK(left_rate == doctest::Approx(0.45).epsilon(0.03));
  CHECK(right_rate == doctest::Approx(0.45).epsilon(0.03));
}

TEST_CASE("forced-side corruption draws uniformly over the entity range") {
  Rng rng(12);
  Triple original{0, 0, 9};
  const int trials = 100000;
  std::vector<double> counts(10, 0);
  for (int i = 0; i < trials; ++i) {
    Triple c = corrupt(original, rng, 10, CorruptSide::left);
    CHECK(c.tail == original.tail);
    counts[static_cast<std::size_t>(c.head)] += 1;
  }
  // Chi-square against uniform over 10 bins, df = 9; 27.877 is the p = 0.001
  // critical value, so a correct generator fails this less than 0.1% of runs.
  double expected = trials / 10.0;
  double chi2 = 0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < 27.877);
}

TEST_CASE("candidate-list corruption stays inside the list") {
  Rng rng(13);
  std::vector<EntityId> candidates{2, 5, 11};
  for (int i = 0; i < 500; ++i) {
    Triple c = corrupt({2, 0, 5}, rng, candidates, CorruptSide::uniform_random);
    EntityId changed = c.head != 2 ? c.head : c.tail;
    bool in_list = changed == 2 || changed == 5 || changed == 11;
    CHECK(in_list);
  }
  CHECK_THROWS_AS(corrupt({0, 0, 1}, rng, 0, CorruptSide::uniform_random), ConfigError);
  CHECK_THROWS_AS(
      corrupt({0, 0, 1}, rng, std::span<const EntityId>{}, CorruptSide::uniform_random),
      ConfigError);
}

TEST_CASE("margin loss matches the worked example") {
  // Entities on a line: pos pair distance 0.5, neg pair distance 0.7.
  // gamma 1 => max(0, 1 + 0.5 - 0.7) = 0.8.
  Tensor entities = Tensor::from_data({3, 1}, {0, 0.5, 0.7});
  Tensor relations = Tensor({1, 1});
  std::vector<Triple> pos{{0, 0, 1}};
  std::vector<Triple> neg{{0, 0, 2}};
  Tensor egrad({3, 1});
  Tensor rgrad({1, 1});

  MarginBatchResult r =
      margin_loss(entities, relations, pos, neg, Distance::l1, 1.0, egrad, rgrad);
  CHECK(r.loss == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(r.active == 1);
  CHECK(margin_loss_value(entities, relations, pos, neg, Distance::l1, 1.0) ==
        doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("pairs already separated by the margin contribute nothing") {
  Tensor entities = Tensor::from_data({3, 1}, {0, 0.1, 5.0});
  Tensor relations = Tensor({1, 1});
  std::vector<Triple> pos{{0, 0, 1}};   // d = 0.1
  std::vector<Triple> neg{{0, 0, 2}};   // d = 5.0; 1 + 0.1 - 5.0 < 0
  Tensor egrad({3, 1});
  Tensor rgrad({1, 1});
  MarginBatchResult r =
      margin_loss(entities, relations, pos, neg, Distance::l1, 1.0, egrad, rgrad);
  CHECK(r.loss == real(0));
  CHECK(r.active == 0);
  for (real g : egrad.values()) CHECK(g == real(0));
  for (real g : rgrad.values()) CHECK(g == real(0));
}

TEST_CASE("margin loss gradients match central differences") {
  Rng rng(14);
  const std::int64_t E = 6, R = 2, n = 4;
  for (Distance d : {Distance::l1, Distance::l2}) {
    EmbeddingStore store = random_store(E, R, n, d, rng);
    std::vector<Triple> pos, neg;
    for (int i = 0; i < 8; ++i) {
      Triple t{static_cast<EntityId>(rng.uniform_index(E)),
               static_cast<RelationId>(rng.uniform_index(R)),
               static_cast<EntityId>(rng.uniform_index(E))};
      pos.push_back(t);
      neg.push_back(corrupt(t, rng, E, CorruptSide::uniform_random));
    }

    Tensor egrad({E, n});
    Tensor rgrad({R, n});
    margin_loss(store.entities, store.relations, pos, neg, d, 1.0, egrad, rgrad);

    // Wrap the tables as parameters so the shared checker can perturb them.
    Parameter ep(store.entities, "entities");
    Parameter rp(store.relations, "relations");
    ep.grad = egrad;
    rp.grad = rgrad;
    std::vector<Parameter*> params{&ep, &rp};
    auto loss = [&] {
      return static_cast<double>(
          margin_loss_value(ep.value, rp.value, pos, neg, d, 1.0));
    };
    GradCheckReport report = gradient_check(loss, params);
    CHECK(report.max_rel_error < 1e-5);
  }
}

TEST_CASE("gradients accumulate across calls") {
  Tensor entities = Tensor::from_data({3, 1}, {0, 0.5, 0.7});
  Tensor relations = Tensor({1, 1});
  std::vector<Triple> pos{{0, 0, 1}};
  std::vector<Triple> neg{{0, 0, 2}};
  Tensor egrad({3, 1});
  Tensor rgrad({1, 1});
  margin_loss(entities, relations, pos, neg, Distance::l1, 1.0, egrad, rgrad);
  Tensor once = egrad;
  margin_loss(entities, relations, pos, neg, Distance::l1, 1.0, egrad, rgrad);
  for (std::int64_t i = 0; i < egrad.size(); ++i) {
    CHECK(egrad[i] == doctest::Approx(2 * once[i]).epsilon(1e-12));
  }
}

TEST_CASE("scores are invariant under a common rotation of all embeddings") {
  // L2 distances depend only on relative geometry, so applying one orthogonal
  // map to every entity and relation row must leave every score unchanged.
  Rng rng(15);
  const std::int64_t n = 4;
  EmbeddingStore store = random_store(8, 2, n, Distance::l2, rng);

  // Compose a few Givens rotations into a single orthogonal transform.
  auto rotate_rows = [&](Tensor& table, std::int64_t i, std::int64_t j, double theta) {
    double c = std::cos(theta), s = std::sin(theta);
    for (std::int64_t row = 0; row < table.dim(0); ++row) {
      double a = static_cast<double>(table.at(row, i));
      double b = static_cast<double>(table.at(row, j));
      table.at(row, i) = static_cast<real>(c * a - s * b);
      table.at(row, j) = static_cast<real>(s * a + c * b);
    }
  };

  std::vector<Triple> probes;
  for (int i = 0; i < 30; ++i) {
    probes.push_back({static_cast<EntityId>(rng.uniform_index(8)),
                      static_cast<RelationId>(rng.uniform_index(2)),
                      static_cast<EntityId>(rng.uniform_index(8))});
  }
  std::vector<real> before;
  for (const Triple& t : probes) before.push_back(score(store, t));

  struct GivensStep {
    int i, j;
    double theta;
  };
  for (auto [i, j, theta] : {GivensStep{0, 1, 0.37}, GivensStep{1, 2, -1.1},
                             GivensStep{2, 3, 2.4}, GivensStep{0, 3, 0.9}}) {
    rotate_rows(store.entities, i, j, theta);
    rotate_rows(store.relations, i, j, theta);
  }
  for (std::size_t i = 0; i < probes.size(); ++i) {
    CHECK(score(store, probes[i]) == doctest::Approx(before[i]).epsilon(1e-12));
  }
}

TEST_CASE("renormalization rescales rows to unit norm and rejects zero rows") {
  Rng rng(16);
  EmbeddingStore store = random_store(5, 3, 4, Distance::l1, rng);
  Tensor original = store.entities;

  renormalize(store, RenormalizeTarget::entities);
  for (std::int64_t i = 0; i < 5; ++i) {
    CHECK(std::abs(l2_norm(store.entities.row(i)) - real(1)) <= real(1e-12));
    // Direction is preserved: row stays a positive multiple of the original.
    real scale = original.at(i, 0) / store.entities.at(i, 0);
    for (std::int64_t k = 0; k < 4; ++k) {
      CHECK(original.at(i, k) == doctest::Approx(store.entities.at(i, k) * scale).epsilon(1e-9));
    }
  }

  renormalize(store, RenormalizeTarget::relations);
  for (std::int64_t i = 0; i < 3; ++i) {
    CHECK(std::abs(l2_norm(store.relations.row(i)) - real(1)) <= real(1e-12));
  }

  store.entities.row(2)[0] = 0;
  store.entities.row(2)[1] = 0;
  store.entities.row(2)[2] = 0;
  store.entities.row(2)[3] = 0;
  CHECK_THROWS_AS(renormalize(store, RenormalizeTarget::entities), NumericError);
}

TEST_CASE("nearest neighbors agree with a brute-force scan") {
  Rng rng(17);
  EmbeddingStore store = random_store(20, 1, 3, Distance::l1, rng);
  std::vector<EntityId> candidates;
  for (EntityId e = 0; e < 20; e += 2) candidates.push_back(e);  // even ids only

  std::vector<real> query{0.1, -0.2, 0.3};
  std::vector<Neighbor> top = nearest_neighbors(store, query, 4, candidates);
  REQUIRE(top.size() == 4);

  // Brute force over the same candidates.
  std::vector<Neighbor> all;
  for (EntityId e : candidates) {
    real d = 0;
    for (std::int64_t k = 0; k < 3; ++k) {
      d += std::abs(query[static_cast<std::size_t>(k)] - store.entities.at(e, k));
    }
    all.push_back({e, d});
  }
  std::sort(all.begin(), all.end(), [](const Neighbor& a, const Neighbor& b) {
    return a.distance != b.distance ? a.distance < b.distance : a.entity < b.entity;
  });
  for (std::size_t i = 0; i < top.size(); ++i) {
    CHECK(top[i].entity == all[i].entity);
    CHECK(top[i].distance == doctest::Approx(all[i].distance).epsilon(1e-12));
  }

  // Ties break by ascending entity id.
  EmbeddingStore flat = make_store({{1, 0}, {1, 0}, {0, 1}}, {{0, 0}}, Distance::l2);
  std::vector<EntityId> everyone{0, 1, 2};
  std::vector<real> q{1, 0};
  std::vector<Neighbor> tied = nearest_neighbors(flat, q, 2, everyone);
  CHECK(tied[0].entity == 0);
  CHECK(tied[1].entity == 1);

  // Asking for more neighbors than candidates returns all of them.
  CHECK(nearest_neighbors(flat, q, 10, everyone).size() == 3);
}

TEST_SUITE_END();
