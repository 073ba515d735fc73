#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace transkb {

// Deterministic random source. All draws go through the helpers below rather
// than std distributions, so results do not depend on the standard library
// implementation.
class Rng {
 public:
  Rng() : engine_(0) {}
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). Modulo bias is below 2^-50 for any n that fits
  // in memory, which is far under what any test here can resolve.
  std::int64_t uniform_index(std::int64_t n) {
    return static_cast<std::int64_t>(next_u64() % static_cast<std::uint64_t>(n));
  }

  bool coin() { return (next_u64() & 1u) != 0; }

  // Fisher-Yates, driven by uniform_index for cross-platform determinism.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::int64_t i = static_cast<std::int64_t>(v.size()) - 1; i > 0; --i) {
      std::int64_t j = uniform_index(i + 1);
      using std::swap;
      swap(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]);
    }
  }

  std::string state_text() const;
  void restore_state(const std::string& text);

 private:
  std::mt19937_64 engine_;
};

// Independent named substream seed derived from a master seed. Used so that,
// for example, evaluation sampling does not perturb training reproducibility.
std::uint64_t substream_seed(std::uint64_t master, std::string_view name);

}  // namespace transkb
