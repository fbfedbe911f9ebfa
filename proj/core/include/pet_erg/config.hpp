#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "pet_erg/governor.hpp"
#include "pet_erg/plant.hpp"
#include "pet_erg/so3.hpp"

namespace pet_erg {

struct AxisAngle {
  Vec3 axis = Vec3::UnitZ();
  double angle = 0.0;  // rad

  Rotation rotation() const { return Rotation::from_axis_angle(axis, angle); }
};

/// Complete description of one closed-loop run.
struct ScenarioConfig {
  LoopParams params;
  AxisAngle R0_axis_angle;
  AxisAngle Rd_axis_angle;
  Rotation R0;
  Vec3 omega0 = Vec3::Zero();
  Rotation R_d;
  double t_final = 60.0;  // s
  double h = 1e-3;        // s

  // Monitor knobs.
  double fit_window = 0.3;        // trailing fraction of the horizon
  double convergence_tol = 1e-4;  // phi(R^T R_d) level for "converged"
  double violation_tol = 1e-6;

  double gamma_d_tolerance = 1e-6;
  std::string gamma_d_source = "computed";  // computed | cache
  double a_c_input_norm = 1.0;  // norm of a_c before normalization
  bool inertia_full = false;
  std::string output_path;

  const Inertia& J() const { return params.J; }
  const Gains& gains() const { return params.gains; }
  const ConstraintSpec& spec() const { return params.spec; }
  /// Number of integration steps in the horizon.
  std::int64_t steps() const;
};

struct ConfigOverrides {
  std::optional<double> t_final;
  std::optional<double> h;
  std::optional<std::string> output_path;
  /// When set, Gamma_d is read from (or written to) this cache artifact.
  std::optional<std::filesystem::path> gamma_cache;
};

/// Parses a JSON scenario document. Missing delta/zeta default to
/// cos(theta_c) + 0.05 and delta + 0.05; a_b and a_c are normalized.
/// Throws ConfigError with every problem found.
ScenarioConfig parse_config(const std::string& json_text,
                            const ConfigOverrides& overrides = {});
ScenarioConfig load_config(const std::filesystem::path& path,
                           const ConfigOverrides& overrides = {});

/// The reorientation scenario of the reference study: J = diag(1, 2, 3),
/// I -> exp(pi/2 e_y) around a 160 degree pointing cone.
std::string paper_scenario_json();
ScenarioConfig paper_scenario(const ConfigOverrides& overrides = {});

/// Effective configuration (defaults resolved, Gamma_d included) as JSON text.
std::string effective_config_json(const ScenarioConfig& cfg);

}  // namespace pet_erg
