#include "transkb/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace transkb {

namespace {

std::int64_t checked_numel(const std::vector<std::int64_t>& shape) {
  std::int64_t n = 1;
  for (std::int64_t d : shape) {
    if (d < 0) {
      throw DimensionError("tensor dimensions must be non-negative, got shape with " +
                           std::to_string(d));
    }
    n *= d;
  }
  return n;
}

}  // namespace

Tensor::Tensor(std::vector<std::int64_t> shape, real fill)
    : shape_(std::move(shape)), data_(static_cast<std::size_t>(checked_numel(shape_)), fill) {}

Tensor Tensor::from_data(std::vector<std::int64_t> shape, std::vector<real> data) {
  Tensor t;
  std::int64_t n = checked_numel(shape);
  if (n != static_cast<std::int64_t>(data.size())) {
    throw DimensionError("data length " + std::to_string(data.size()) +
                         " does not match shape product " + std::to_string(n));
  }
  t.shape_ = std::move(shape);
  t.data_ = std::move(data);
  return t;
}

bool Tensor::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](real v) { return std::isfinite(v); });
}

void Tensor::fill(real value) { std::fill(data_.begin(), data_.end(), value); }

std::string Tensor::shape_string() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    if (i) os << ", ";
    os << shape_[i];
  }
  os << ")";
  return os.str();
}

real l2_norm(std::span<const real> v) {
  real s = 0;
  for (real x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace transkb
