#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "pet_erg/harness.hpp"

namespace pet_erg {

/// 17 significant digits, the precision used by every numeric artifact.
std::string format_real(double x);

void write_trajectory_csv(std::ostream& os, const TrajectoryLog& log);
void write_trajectory_csv(const std::filesystem::path& path,
                          const TrajectoryLog& log);

/// Human-readable summary followed by a `[report]` key=value block and the
/// effective configuration.
std::string format_report(const ScenarioConfig& cfg,
                          const SimulationResult& result);

/// One-line summary printed by the CLI.
std::string summary_line(const ConstraintReport& r);

void write_sweep_csv(std::ostream& os, const SweepSummary& summary);
void write_sweep_csv(const std::filesystem::path& path,
                     const SweepSummary& summary);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace pet_erg
