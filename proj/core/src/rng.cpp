#include "pet_erg/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pet_erg {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

SplitMix64::SplitMix64(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix64_mix(seed ^ splitmix64_mix(stream + kGolden))) {}

SplitMix64::result_type SplitMix64::operator()() {
  ++counter_;
  return splitmix64_mix(key_ + counter_ * kGolden);
}

double SplitMix64::uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

Vec3 SplitMix64::unit_vector() {
  const double z = uniform(-1.0, 1.0);
  const double az = uniform(0.0, 2.0 * std::numbers::pi);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {r * std::cos(az), r * std::sin(az), z};
}

Vec3 SplitMix64::in_ball(double radius) {
  const double r = radius * std::cbrt(uniform());
  return r * unit_vector();
}

}  // namespace pet_erg
