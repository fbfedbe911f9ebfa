#pragma once

// Small key=value artifact holding a precomputed Gamma_d together with the
// verification summary and a hash of the inputs it was computed from.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "pet_erg/plant.hpp"

namespace pet_erg {

struct GammaDCacheEntry {
  double gamma_d = 0.0;
  double bisection_tolerance = 0.0;
  std::int64_t oracle_samples = 0;
  double oracle_max_tau = 0.0;
  std::uint64_t input_hash = 0;
};

/// FNV-1a over the 17-digit text of J, k_p, k_d, tau_max and the tolerance.
std::uint64_t gamma_d_input_hash(const Inertia& J, const Gains& gains,
                                 double tau_max, double tolerance);

std::string format_gamma_cache(const GammaDCacheEntry& e);
/// Returns nullopt when the text is missing a key or malformed.
std::optional<GammaDCacheEntry> parse_gamma_cache(const std::string& text);

std::optional<GammaDCacheEntry> read_gamma_cache(
    const std::filesystem::path& path);
void write_gamma_cache(const std::filesystem::path& path,
                       const GammaDCacheEntry& e);

/// Cached entry if present and its hash matches `input_hash`.
std::optional<GammaDCacheEntry> lookup_gamma_cache(
    const std::filesystem::path& path, std::uint64_t input_hash);

}  // namespace pet_erg

namespace pet_erg {

struct GammaDResolution {
  GammaDCacheEntry entry;
  bool from_cache = false;
};

/// Serves Gamma_d from `cache` when its input hash matches; otherwise solves
/// by bisection, runs the sublevel torque scan with `oracle_samples` draws,
/// and (when a cache path is given) writes the artifact.
GammaDResolution resolve_gamma_d(
    const Inertia& J, const Gains& gains, double tau_max, double tolerance,
    const std::optional<std::filesystem::path>& cache,
    std::int64_t oracle_samples = 100000, std::uint64_t oracle_seed = 1);

}  // namespace pet_erg
