#include <cmath>
#include <limits>

#include "doctest.h"
#include "transkb/tensor.hpp"

using namespace transkb;

TEST_SUITE_BEGIN("tensor");

TEST_CASE("construction and fill") {
  Tensor t({2, 3}, 1.5);
  CHECK(t.rank() == 2);
  CHECK(t.dim(0) == 2);
  CHECK(t.dim(1) == 3);
  CHECK(t.size() == 6);
  for (real v : t.values()) CHECK(v == real(1.5));
  t.zero();
  for (real v : t.values()) CHECK(v == real(0));
}

TEST_CASE("from_data keeps row-major layout") {
  Tensor t = Tensor::from_data({2, 2, 2}, {0, 1, 2, 3, 4, 5, 6, 7});
  CHECK(t.at(0, 0, 0) == real(0));
  CHECK(t.at(0, 0, 1) == real(1));
  CHECK(t.at(0, 1, 0) == real(2));
  CHECK(t.at(1, 0, 0) == real(4));
  CHECK(t.at(1, 1, 1) == real(7));
}

TEST_CASE("row views alias the underlying storage") {
  Tensor t = Tensor::from_data({2, 3}, {1, 2, 3, 4, 5, 6});
  auto row = t.row(1);
  CHECK(row.size() == 3);
  CHECK(row[0] == real(4));
  row[2] = real(9);
  CHECK(t.at(1, 2) == real(9));
}

TEST_CASE("zero-sized dimensions are allowed") {
  Tensor t({0});
  CHECK(t.size() == 0);
  CHECK(t.empty());
}

TEST_CASE("from_data rejects mismatched sizes") {
  CHECK_THROWS_AS(Tensor::from_data({2, 2}, {1, 2, 3}), DimensionError);
}

TEST_CASE("all_finite flags nan and infinity") {
  Tensor t({3});
  CHECK(t.all_finite());
  t[1] = std::numeric_limits<real>::quiet_NaN();
  CHECK_FALSE(t.all_finite());
  t[1] = std::numeric_limits<real>::infinity();
  CHECK_FALSE(t.all_finite());
}

TEST_CASE("parameter grad always matches the value shape") {
  Parameter p(Tensor({3, 4}, 2.0), "w");
  CHECK(p.grad.same_shape(p.value));
  p.grad.fill(1);
  p.zero_grad();
  for (real v : p.grad.values()) CHECK(v == real(0));
}

TEST_CASE("l2_norm of a 3-4 right triangle is 5") {
  std::vector<real> v{3, 4};
  CHECK(l2_norm(v) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_SUITE_END();
