#include <algorithm>
#include <atomic>
#include <thread>

#include "pet_erg/error.hpp"
#include "pet_erg/harness.hpp"
#include "pet_erg/rng.hpp"

namespace pet_erg {

namespace {

struct Start {
  AxisAngle perturbation;
  Rotation R0;
  Vec3 omega0;
};

Start draw_start(const ScenarioConfig& base, const PerturbationSpec& spec,
                 SplitMix64& rng) {
  const LoopParams& p = base.params;
  for (int attempt = 0; attempt < spec.max_attempts; ++attempt) {
    Start s{{Vec3::UnitZ(), 0.0}, base.R0, base.omega0};
    if (spec.angle_max > 0.0) {
      s.perturbation = {rng.unit_vector(), spec.angle_max * rng.uniform()};
      s.R0 = base.R0 * s.perturbation.rotation();
    }
    if (spec.omega_max > 0.0) {
      s.omega0 = base.omega0 + rng.in_ball(spec.omega_max);
    }
    if (!(p.spec.pointing_value(s.R0) > p.pot.delta)) continue;
    const BodyState state{s.R0, s.omega0};
    const double v = lyapunov_v(state, s.R0, p.J, p.gains);
    if (v <= gamma_aggregate(s.R0, p.gov, p.spec, p.gains)) return s;
  }
  throw Error("sweep: no admissible initial condition found in " +
              std::to_string(spec.max_attempts) + " attempts");
}

SweepRun run_one(const ScenarioConfig& base, int index, std::uint64_t seed,
                 const PerturbationSpec& spec) {
  SweepRun run;
  run.index = index;
  try {
    SplitMix64 rng(seed, static_cast<std::uint64_t>(index));
    const Start s = draw_start(base, spec, rng);
    run.R0_perturbation = s.perturbation;
    run.R0 = s.R0;
    run.omega0 = s.omega0;

    ScenarioConfig cfg = base;
    cfg.R0 = s.R0;
    cfg.omega0 = s.omega0;
    run.report = simulate(cfg).report;
  } catch (const Error& e) {
    run.aborted = true;
    run.error = e.what();
  }
  return run;
}

}  // namespace

double SweepSummary::pass_rate() const {
  if (runs.empty()) return 0.0;
  const auto passed = std::count_if(runs.begin(), runs.end(),
                                    [](const SweepRun& r) { return r.pass(); });
  return static_cast<double>(passed) / static_cast<double>(runs.size());
}

std::vector<int> SweepSummary::failing_runs() const {
  std::vector<int> out;
  for (const SweepRun& r : runs) {
    if (!r.pass()) out.push_back(r.index);
  }
  return out;
}

SweepSummary sweep(const ScenarioConfig& base, int n, std::uint64_t seed,
                   const PerturbationSpec& perturbation, unsigned threads) {
  if (n < 1) throw Error("sweep: n must be at least 1");
  SweepSummary summary;
  summary.seed = seed;
  summary.generator = SplitMix64::kAlgorithm;
  summary.runs.resize(static_cast<std::size_t>(n));

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(n));

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      summary.runs[static_cast<std::size_t>(i)] =
          run_one(base, i, seed, perturbation);
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return summary;
}

}  // namespace pet_erg
