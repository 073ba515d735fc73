#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "transkb/types.hpp"

namespace transkb {

// Dense row-major array of reals. This, plus Parameter below, is the whole
// compute substrate: encoders and the trainer build on the kernels that
// operate on these.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<std::int64_t> shape, real fill = 0);
  static Tensor from_data(std::vector<std::int64_t> shape, std::vector<real> data);

  const std::vector<std::int64_t>& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  std::int64_t dim(int axis) const { return shape_[static_cast<std::size_t>(axis)]; }
  std::int64_t size() const { return static_cast<std::int64_t>(data_.size()); }
  bool empty() const { return data_.empty(); }

  real* data() { return data_.data(); }
  const real* data() const { return data_.data(); }
  std::span<real> values() { return data_; }
  std::span<const real> values() const { return data_; }

  real& operator[](std::int64_t i) { return data_[static_cast<std::size_t>(i)]; }
  real operator[](std::int64_t i) const { return data_[static_cast<std::size_t>(i)]; }

  real& at(std::int64_t i, std::int64_t j) {
    return data_[static_cast<std::size_t>(i * shape_[1] + j)];
  }
  real at(std::int64_t i, std::int64_t j) const {
    return data_[static_cast<std::size_t>(i * shape_[1] + j)];
  }
  real& at(std::int64_t i, std::int64_t j, std::int64_t k) {
    return data_[static_cast<std::size_t>((i * shape_[1] + j) * shape_[2] + k)];
  }
  real at(std::int64_t i, std::int64_t j, std::int64_t k) const {
    return data_[static_cast<std::size_t>((i * shape_[1] + j) * shape_[2] + k)];
  }

  // Row view for rank-2 tensors.
  std::span<real> row(std::int64_t i) {
    return std::span<real>(data_.data() + i * shape_[1], static_cast<std::size_t>(shape_[1]));
  }
  std::span<const real> row(std::int64_t i) const {
    return std::span<const real>(data_.data() + i * shape_[1],
                                 static_cast<std::size_t>(shape_[1]));
  }

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
  bool all_finite() const;
  void fill(real value);
  void zero() { fill(0); }

  std::string shape_string() const;

  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.shape_ == b.shape_ && a.data_ == b.data_;
  }

 private:
  std::vector<std::int64_t> shape_;
  std::vector<real> data_;
};

// A trainable value and its gradient accumulator, always shape-matched.
struct Parameter {
  Parameter() = default;
  explicit Parameter(Tensor v, std::string name = "")
      : value(std::move(v)), grad(value.shape()), name(std::move(name)) {}

  Tensor value;
  Tensor grad;
  std::string name;

  void zero_grad() { grad.zero(); }
};

real l2_norm(std::span<const real> v);

}  // namespace transkb
