#pragma once

#include <cstdint>
#include <limits>

#include "pet_erg/so3.hpp"

namespace pet_erg {

/// SplitMix64 driven as a counter-based generator: output n of stream
/// (seed, stream) is mix(key + n * golden), key = mix(seed ^ mix(stream)).
/// Streams are independent per index, so runs can be generated in any order.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  static constexpr const char* kAlgorithm = "splitmix64-counter";

  explicit SplitMix64(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()();

  /// Uniform in [0, 1) with 53 bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform on the unit sphere.
  Vec3 unit_vector();
  /// Uniform in the ball of the given radius.
  Vec3 in_ball(double radius);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64_mix(std::uint64_t z);

}  // namespace pet_erg
