#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "pet_erg/config.hpp"
#include "pet_erg/error.hpp"
#include "pet_erg/gamma_cache.hpp"
#include "pet_erg/gamma_d.hpp"
#include "pet_erg/harness.hpp"
#include "pet_erg/io.hpp"

#ifndef PET_ERG_VERSION
#define PET_ERG_VERSION "unknown"
#endif
#ifndef PET_ERG_GIT_REVISION
#define PET_ERG_GIT_REVISION "unknown"
#endif
#ifndef PET_ERG_BUILD_TYPE
#define PET_ERG_BUILD_TYPE "unknown"
#endif

namespace pet_erg::cli {

namespace fs = std::filesystem;

namespace {

struct RunOptions {
  std::string config;
  std::string out;
  std::string report;
  std::string gamma_cache;
  std::optional<double> t_final;
  std::optional<double> dt;
};

struct GammaOptions {
  std::string config;
  std::string out = "gamma_d.cache";
  std::int64_t oracle_samples = 100000;
  std::uint64_t seed = 1;
};

struct GeodesicOptions {
  std::string config;
  int samples = 1001;
};

struct SweepOptions {
  RunOptions run;
  int n = 0;
  std::uint64_t seed = 0;
  double angle_max = PerturbationSpec{}.angle_max;
  double omega_max = PerturbationSpec{}.omega_max;
  unsigned threads = 0;
};

ConfigOverrides overrides_of(const RunOptions& o) {
  ConfigOverrides ov;
  ov.t_final = o.t_final;
  ov.h = o.dt;
  if (!o.out.empty()) ov.output_path = o.out;
  if (!o.gamma_cache.empty()) ov.gamma_cache = o.gamma_cache;
  return ov;
}

// Effective config as "# "-prefixed lines, for artifacts whose own format
// treats '#' as a comment.
std::string commented(const std::string& text) {
  std::istringstream in(text);
  std::string out;
  for (std::string line; std::getline(in, line);) out += "# " + line + "\n";
  return out;
}

fs::path sidecar(const fs::path& artifact) {
  return fs::path(artifact.string() + ".config.json");
}

std::optional<ScenarioConfig> load_or_report(const std::string& path,
                                             const ConfigOverrides& ov,
                                             std::ostream& err) {
  try {
    return load_config(path, ov);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return std::nullopt;
  }
}

int cmd_simulate(const RunOptions& o, std::ostream& out, std::ostream& err) {
  const std::optional<ScenarioConfig> loaded =
      load_or_report(o.config, overrides_of(o), err);
  if (!loaded) return kBadConfig;
  const ScenarioConfig& cfg = *loaded;

  SimulationResult result;
  try {
    result = simulate(cfg);
  } catch (const BoundaryEscape& e) {
    err << "error: run aborted at t = " << format_real(e.time()) << ": "
        << e.what() << "\n";
    return kRuntimeAbort;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kBadConfig;
  } catch (const Error& e) {
    err << "error: run aborted: " << e.what() << "\n";
    return kRuntimeAbort;
  }
  for (const auto& w : result.warnings) err << "warning: " << w << "\n";

  const fs::path csv =
      o.out.empty() ? fs::path("trajectory.csv") : fs::path(o.out);
  const fs::path report =
      o.report.empty() ? fs::path(csv.string() + ".report.txt")
                       : fs::path(o.report);
  try {
    write_trajectory_csv(csv, result.log);
    write_text(sidecar(csv), effective_config_json(cfg));
    write_text(report, format_report(cfg, result));
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeAbort;
  }

  out << summary_line(result.report) << "\n";
  out << "trajectory: " << csv.string() << "\nreport: " << report.string()
      << "\n";
  return result.report.any_violation() ? kConstraintViolation : kOk;
}

void print_oracle(std::ostream& out, const GammaDCacheEntry& e,
                  double tau_max) {
  out << "oracle_samples = " << e.oracle_samples << "\n"
      << "oracle_max_tau = " << format_real(e.oracle_max_tau)
      << " (tau_max = " << format_real(tau_max) << ")\n";
}

int cmd_gamma_d(const GammaOptions& o, std::ostream& out, std::ostream& err) {
  const std::optional<ScenarioConfig> loaded =
      load_or_report(o.config, {}, err);
  if (!loaded) return kBadConfig;
  const ScenarioConfig& cfg = *loaded;
  if (o.oracle_samples < 1) {
    err << "error: --oracle-samples must be at least 1\n";
    return kBadConfig;
  }
  const double tau_max = cfg.spec().tau_max;
  const Gains& gains = cfg.gains();
  const std::uint64_t hash =
      gamma_d_input_hash(cfg.J(), gains, tau_max, cfg.gamma_d_tolerance);

  if (auto hit = lookup_gamma_cache(o.out, hash)) {
    out << "gamma_d = " << format_real(hit->gamma_d) << "\n"
        << "served from cache " << o.out << "\n";
    print_oracle(out, *hit, tau_max);
    return kOk;
  }

  const GammaDSolution sol =
      gamma_d_offline(cfg.J(), gains, tau_max, cfg.gamma_d_tolerance);
  GammaDCacheEntry entry;
  entry.gamma_d = sol.gamma_d;
  entry.bisection_tolerance = sol.tolerance;
  entry.input_hash = hash;

  out << "gamma_d = " << format_real(sol.gamma_d) << "\n"
      << "bisection_iterations = " << sol.iterations << "\n";
  if (std::isfinite(sol.gamma_d)) {
    out << "torque_bound_at_gamma_d = " << format_real(sol.torque_at_root)
        << "\n";
    const SublevelTorqueSummary scan = sample_sublevel_torque(
        cfg.J(), gains, sol.gamma_d, o.oracle_samples, o.seed);
    entry.oracle_samples = scan.samples;
    entry.oracle_max_tau = scan.max_torque;
    print_oracle(out, entry, tau_max);
    if (scan.max_torque > tau_max) {
      err << "error: oracle sample with V <= gamma_d has |tau| = "
          << format_real(scan.max_torque) << " > tau_max\n";
      return kOracleExceeded;
    }
  } else {
    out << "torque bound never reaches tau_max; input constraint inactive\n";
  }
  if (gains.k_d == 0.0 && tau_max < gains.k_p) {
    const double r = tau_max / gains.k_p;
    out << "closed_form = "
        << format_real(gains.k_p * (1.0 - std::sqrt(1.0 - r * r))) << "\n";
  }

  try {
    write_text(o.out, format_gamma_cache(entry) +
                          commented(effective_config_json(cfg)));
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeAbort;
  }
  out << "cache written to " << o.out << "\n";
  return kOk;
}

int cmd_check_geodesic(const GeodesicOptions& o, std::ostream& out,
                       std::ostream& err) {
  if (o.samples < 2) {
    err << "error: --samples must be at least 2\n";
    return kBadConfig;
  }
  const std::optional<ScenarioConfig> loaded =
      load_or_report(o.config, {}, err);
  if (!loaded) return kBadConfig;
  const ScenarioConfig& cfg = *loaded;
  const FeasibilityResult f =
      geodesic_feasibility_check(cfg.R0, cfg.R_d, cfg.spec(), o.samples);
  out << (f.feasible ? "feasible" : "infeasible") << "\n"
      << "min_margin = " << format_real(f.min_margin) << "\n"
      << "s_at_min = " << format_real(f.s_at_min) << "\n"
      << "samples = " << o.samples << "\n";
  if (f.ambiguous) {
    out << "note: R0 and R_d are antipodal; the geodesic is not unique\n";
  }
  return kOk;
}

int cmd_sweep(const SweepOptions& o, std::ostream& out, std::ostream& err) {
  if (o.n < 1) {
    err << "error: --n must be at least 1\n";
    return kBadConfig;
  }
  const std::optional<ScenarioConfig> loaded =
      load_or_report(o.run.config, overrides_of(o.run), err);
  if (!loaded) return kBadConfig;
  const ScenarioConfig& cfg = *loaded;
  PerturbationSpec pert;
  pert.angle_max = o.angle_max;
  pert.omega_max = o.omega_max;

  SweepSummary summary;
  try {
    summary = sweep(cfg, o.n, o.seed, pert, o.threads);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kBadConfig;
  } catch (const Error& e) {
    err << "error: sweep aborted: " << e.what() << "\n";
    return kRuntimeAbort;
  }

  const fs::path csv =
      o.run.out.empty() ? fs::path("sweep.csv") : fs::path(o.run.out);
  try {
    write_sweep_csv(csv, summary);
    write_text(sidecar(csv), effective_config_json(cfg));
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeAbort;
  }

  for (const SweepRun& r : summary.runs) {
    out << "run " << r.index << ": ";
    if (r.aborted) {
      out << "ABORTED " << r.error << "\n";
    } else {
      out << summary_line(r.report) << "\n";
    }
  }
  out << "pass_rate = " << format_real(summary.pass_rate()) << " (" << o.n
      << " runs, seed " << o.seed << ", " << summary.generator << ")\n"
      << "summary: " << csv.string() << "\n";

  const std::vector<int> failing = summary.failing_runs();
  if (failing.empty()) return kOk;
  err << "constraint violations in runs:";
  for (int i : failing) err << ' ' << i;
  err << "\n";
  return kSweepViolation;
}

void add_run_flags(CLI::App* sub, RunOptions& o, const char* out_help) {
  sub->add_option("--config", o.config, "Scenario JSON")->required();
  sub->add_option("--out", o.out, out_help);
  sub->add_option("--t-final", o.t_final, "Override the horizon [s]");
  sub->add_option("--dt", o.dt, "Override the integration step [s]");
}

}  // namespace

std::string version_string() {
  std::ostringstream os;
  os << "pet-erg " << PET_ERG_VERSION << " (rev " << PET_ERG_GIT_REVISION
     << ", " << PET_ERG_BUILD_TYPE << ", "
#if defined(__clang__)
     << "clang " << __clang_major__ << "." << __clang_minor__
#elif defined(__GNUC__)
     << "gcc " << __GNUC__ << "." << __GNUC_MINOR__
#else
     << "unknown compiler"
#endif
     << ", C++ " << __cplusplus << ")";
  return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Event-triggered reference governor for attitude control on SO(3)",
               "pet-erg"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);

  RunOptions sim;
  auto* s = app.add_subcommand("simulate", "Run one closed-loop scenario");
  add_run_flags(s, sim, "Trajectory CSV path (default trajectory.csv)");
  s->add_option("--report", sim.report,
                "Report path (default <out>.report.txt)");
  s->add_option("--gamma-cache", sim.gamma_cache,
                "Read Gamma_d from this cache, computing it on a miss");

  GammaOptions gam;
  auto* g = app.add_subcommand("gamma-d", "Compute and cache Gamma_d");
  g->add_option("--config", gam.config, "Scenario JSON")->required();
  g->add_option("--out", gam.out, "Cache artifact path")->capture_default_str();
  g->add_option("--oracle-samples", gam.oracle_samples,
                "Monte-Carlo verification samples")
      ->capture_default_str();
  g->add_option("--seed", gam.seed, "Oracle seed")->capture_default_str();

  GeodesicOptions geo;
  auto* c = app.add_subcommand("check-geodesic",
                               "Test whether the geodesic R0 -> R_d is admissible");
  c->add_option("--config", geo.config, "Scenario JSON")->required();
  c->add_option("--samples", geo.samples, "Geodesic resolution")
      ->capture_default_str();

  SweepOptions swp;
  auto* w = app.add_subcommand("sweep", "Seeded perturbations of (R0, omega0)");
  add_run_flags(w, swp.run, "Summary CSV path (default sweep.csv)");
  w->add_option("--n", swp.n, "Number of runs")->required();
  w->add_option("--seed", swp.seed, "Generator seed")->required();
  w->add_option("--angle-max", swp.angle_max, "Max R0 perturbation angle [rad]")
      ->capture_default_str();
  w->add_option("--omega-max", swp.omega_max, "Max omega0 perturbation [rad/s]")
      ->capture_default_str();
  w->add_option("--threads", swp.threads, "Worker threads (0 = hardware)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadConfig;
  }

  if (s->parsed()) return cmd_simulate(sim, out, err);
  if (g->parsed()) return cmd_gamma_d(gam, out, err);
  if (c->parsed()) return cmd_check_geodesic(geo, out, err);
  return cmd_sweep(swp, out, err);
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace pet_erg::cli
