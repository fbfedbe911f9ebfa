#include "pet_erg/gamma_cache.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "pet_erg/error.hpp"

namespace pet_erg {

namespace {

std::string g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::uint64_t gamma_d_input_hash(const Inertia& J, const Gains& gains,
                                 double tau_max, double tolerance) {
  std::string text;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) text += g17(J.matrix()(i, j)) + ",";
  }
  text += g17(gains.k_p) + "," + g17(gains.k_d) + "," + g17(tau_max) + "," +
          g17(tolerance);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string format_gamma_cache(const GammaDCacheEntry& e) {
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(e.input_hash));
  std::ostringstream os;
  os << "# gamma_d offline solution\n"
     << "gamma_d=" << g17(e.gamma_d) << "\n"
     << "bisection_tolerance=" << g17(e.bisection_tolerance) << "\n"
     << "oracle_samples=" << e.oracle_samples << "\n"
     << "oracle_max_tau=" << g17(e.oracle_max_tau) << "\n"
     << "input_hash=" << hash << "\n";
  return os.str();
}

std::optional<GammaDCacheEntry> parse_gamma_cache(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) return std::nullopt;
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  GammaDCacheEntry e;
  try {
    e.gamma_d = std::stod(kv.at("gamma_d"));
    e.bisection_tolerance = std::stod(kv.at("bisection_tolerance"));
    e.oracle_samples = std::stoll(kv.at("oracle_samples"));
    e.oracle_max_tau = std::stod(kv.at("oracle_max_tau"));
    const std::string& h = kv.at("input_hash");
    auto [ptr, ec] = std::from_chars(h.data(), h.data() + h.size(),
                                     e.input_hash, 16);
    if (ec != std::errc() || ptr != h.data() + h.size()) return std::nullopt;
  } catch (const std::exception&) {
    return std::nullopt;
  }
  return e;
}

std::optional<GammaDCacheEntry> read_gamma_cache(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_gamma_cache(ss.str());
}

void write_gamma_cache(const std::filesystem::path& path,
                       const GammaDCacheEntry& e) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write gamma_d cache: " + path.string());
  out << format_gamma_cache(e);
}

std::optional<GammaDCacheEntry> lookup_gamma_cache(
    const std::filesystem::path& path, std::uint64_t input_hash) {
  auto e = read_gamma_cache(path);
  if (e && e->input_hash == input_hash) return e;
  return std::nullopt;
}

}  // namespace pet_erg

#include "pet_erg/gamma_d.hpp"

namespace pet_erg {

GammaDResolution resolve_gamma_d(
    const Inertia& J, const Gains& gains, double tau_max, double tolerance,
    const std::optional<std::filesystem::path>& cache,
    std::int64_t oracle_samples, std::uint64_t oracle_seed) {
  const std::uint64_t hash = gamma_d_input_hash(J, gains, tau_max, tolerance);
  if (cache) {
    if (auto hit = lookup_gamma_cache(*cache, hash)) return {*hit, true};
  }
  const GammaDSolution sol = gamma_d_offline(J, gains, tau_max, tolerance);
  GammaDCacheEntry e;
  e.gamma_d = sol.gamma_d;
  e.bisection_tolerance = tolerance;
  e.input_hash = hash;
  if (oracle_samples > 0 && std::isfinite(sol.gamma_d)) {
    const SublevelTorqueSummary scan =
        sample_sublevel_torque(J, gains, sol.gamma_d, oracle_samples,
                               oracle_seed);
    e.oracle_samples = scan.samples;
    e.oracle_max_tau = scan.max_torque;
  }
  if (cache) write_gamma_cache(*cache, e);
  return {e, false};
}

}  // namespace pet_erg
