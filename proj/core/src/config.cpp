#include "pet_erg/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "pet_erg/error.hpp"
#include "pet_erg/gamma_cache.hpp"

namespace pet_erg {

namespace {

using nlohmann::json;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "J_diag", "J_full", "k_p", "k_d", "tau_max", "a_b", "a_c",
      "theta_c_deg", "delta", "zeta", "eta", "eps", "eps_gamma", "kappa",
      "c_gamma", "T_s", "h", "t_final", "R0_axis_angle", "omega0",
      "Rd_axis_angle",
      // Optional monitor and solver knobs.
      "fit_window", "convergence_tol", "violation_tol", "gamma_d_tolerance",
      "output",
      // Written by effective_config_json(); ignored on load.
      "derived"};
  return keys;
}

class Reader {
 public:
  explicit Reader(const json& doc) : doc_(doc) {}

  double real(const std::string& key) {
    if (!doc_.contains(key)) {
      problems_.push_back("missing key '" + key + "'");
      return std::nan("");
    }
    const json& v = doc_.at(key);
    if (!v.is_number()) {
      problems_.push_back("key '" + key + "' must be a number");
      return std::nan("");
    }
    return v.get<double>();
  }

  double real_or(const std::string& key, double fallback) {
    return doc_.contains(key) ? real(key) : fallback;
  }

  std::vector<double> reals(const std::string& key, std::size_t n) {
    if (!doc_.contains(key)) {
      problems_.push_back("missing key '" + key + "'");
      return std::vector<double>(n, std::nan(""));
    }
    const json& v = doc_.at(key);
    if (!v.is_array() || v.size() != n) {
      problems_.push_back("key '" + key + "' must be an array of " +
                          std::to_string(n) + " numbers");
      return std::vector<double>(n, std::nan(""));
    }
    std::vector<double> out;
    for (const json& x : v) {
      if (!x.is_number()) {
        problems_.push_back("key '" + key + "' must contain only numbers");
        return std::vector<double>(n, std::nan(""));
      }
      out.push_back(x.get<double>());
    }
    return out;
  }

  void problem(std::string p) { problems_.push_back(std::move(p)); }
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  const json& doc_;
  std::vector<std::string> problems_;
};

Vec3 vec3(const std::vector<double>& v) { return {v[0], v[1], v[2]}; }

AxisAngle axis_angle(const std::vector<double>& v) {
  return {Vec3(v[0], v[1], v[2]), v[3]};
}

[[noreturn]] void fail(const std::vector<std::string>& problems) {
  std::string msg = "invalid scenario configuration:";
  for (const auto& p : problems) msg += "\n  - " + p;
  throw ConfigError(msg);
}

Vec3 unit(const Vec3& v, const std::string& name, Reader& rd) {
  const double n = v.norm();
  if (!std::isfinite(n) || n < 1e-12) {
    rd.problem("'" + name + "' must be a nonzero vector");
    return Vec3::UnitZ();
  }
  return v / n;
}

}  // namespace

std::int64_t ScenarioConfig::steps() const {
  return static_cast<std::int64_t>(std::llround(t_final / h));
}

ScenarioConfig parse_config(const std::string& json_text,
                            const ConfigOverrides& overrides) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  Reader rd(doc);
  for (const auto& [key, _] : doc.items()) {
    if (!known_keys().count(key)) rd.problem("unknown key '" + key + "'");
  }

  Mat3 j = Mat3::Zero();
  bool full = false;
  if (doc.contains("J_full") && doc.contains("J_diag")) {
    rd.problem("give exactly one of 'J_diag' or 'J_full'");
  } else if (doc.contains("J_full")) {
    const auto v = rd.reals("J_full", 9);
    for (int i = 0; i < 9; ++i) j(i / 3, i % 3) = v[i];
    full = true;
  } else {
    const auto v = rd.reals("J_diag", 3);
    j.diagonal() = vec3(v);
  }

  const double k_p = rd.real("k_p");
  const double k_d = rd.real("k_d");
  const double tau_max = rd.real("tau_max");
  const Vec3 a_b_raw = vec3(rd.reals("a_b", 3));
  const Vec3 a_c_raw = vec3(rd.reals("a_c", 3));
  const double theta_c = rd.real("theta_c_deg") * std::numbers::pi / 180.0;
  const double delta = rd.real_or("delta", std::cos(theta_c) + 0.05);
  const double zeta = rd.real_or("zeta", delta + 0.05);
  const double eta = rd.real("eta");
  const double eps = rd.real("eps");
  const double eps_gamma = rd.real("eps_gamma");
  const double kappa = rd.real("kappa");
  const double c_gamma = rd.real("c_gamma");
  const double T_s = rd.real("T_s");
  const double h = overrides.h ? *overrides.h : rd.real("h");
  const double t_final =
      overrides.t_final ? *overrides.t_final : rd.real("t_final");
  const AxisAngle r0 = axis_angle(rd.reals("R0_axis_angle", 4));
  const Vec3 omega0 = vec3(rd.reals("omega0", 3));
  const AxisAngle rd_aa = axis_angle(rd.reals("Rd_axis_angle", 4));

  const double fit_window = rd.real_or("fit_window", 0.3);
  const double convergence_tol = rd.real_or("convergence_tol", 1e-4);
  const double violation_tol = rd.real_or("violation_tol", 1e-6);
  const double gamma_tol = rd.real_or("gamma_d_tolerance", 1e-6);
  std::string output;
  if (doc.contains("output")) {
    if (doc["output"].is_string()) {
      output = doc["output"].get<std::string>();
    } else {
      rd.problem("'output' must be a string");
    }
  }
  if (overrides.output_path) output = *overrides.output_path;

  const Vec3 a_b = unit(a_b_raw, "a_b", rd);
  const Vec3 a_c = unit(a_c_raw, "a_c", rd);
  if (!rd.problems().empty()) fail(rd.problems());

  if (!(h > 0.0)) rd.problem("h must be positive");
  if (!(t_final >= 0.0)) rd.problem("t_final must be nonnegative");
  if (h > 0.0 && t_final >= 0.0) {
    const double n = t_final / h;
    if (std::abs(n - std::round(n)) > 1e-9 * std::max(1.0, n)) {
      rd.problem("t_final must be an integer multiple of h");
    }
  }
  if (!(fit_window > 0.0 && fit_window <= 1.0)) {
    rd.problem("fit_window must lie in (0, 1]");
  }
  if (!(r0.axis.norm() > 0.0) || !(rd_aa.axis.norm() > 0.0)) {
    rd.problem("axis-angle axes must be nonzero");
  }
  if (!rd.problems().empty()) fail(rd.problems());

  try {
    steps_per_sample(T_s, h);
    Inertia inertia(j);
    Gains gains(k_p, k_d);
    ConstraintSpec spec(tau_max, a_b, a_c, theta_c);
    PotentialParams pot(delta, zeta, eta, eps);
    pot.validate(spec);

    const GammaDResolution g =
        resolve_gamma_d(inertia, gains, tau_max, gamma_tol,
                        overrides.gamma_cache,
                        overrides.gamma_cache ? 100000 : 0);
    GovernorParams gov(kappa, c_gamma, T_s, eps_gamma, g.entry.gamma_d);

    return ScenarioConfig{
        .params = LoopParams{inertia, gains, spec, pot, gov},
        .R0_axis_angle = r0,
        .Rd_axis_angle = rd_aa,
        .R0 = r0.rotation(),
        .omega0 = omega0,
        .R_d = rd_aa.rotation(),
        .t_final = t_final,
        .h = h,
        .fit_window = fit_window,
        .convergence_tol = convergence_tol,
        .violation_tol = violation_tol,
        .gamma_d_tolerance = gamma_tol,
        .gamma_d_source = g.from_cache ? "cache" : "computed",
        .a_c_input_norm = a_c_raw.norm(),
        .inertia_full = full,
        .output_path = output,
    };
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("invalid scenario configuration:\n  - ") +
                      e.what());
  }
}

ScenarioConfig load_config(const std::filesystem::path& path,
                           const ConfigOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides);
}

std::string paper_scenario_json() {
  return R"({
  "J_diag": [1.0, 2.0, 3.0],
  "k_p": 5.0,
  "k_d": 1.0,
  "tau_max": 2.5,
  "a_b": [0.0, 0.0, 1.0],
  "a_c": [-0.791, 0.061, -0.609],
  "theta_c_deg": 160.0,
  "eta": 1.0,
  "eps": 0.001,
  "eps_gamma": 0.1,
  "kappa": 1.0,
  "c_gamma": 3.0,
  "T_s": 0.5,
  "h": 0.001,
  "t_final": 60.0,
  "R0_axis_angle": [0.0, 0.0, 1.0, 0.0],
  "omega0": [0.2, 0.3, 0.4],
  "Rd_axis_angle": [0.0, 1.0, 0.0, 1.5707963267948966]
}
)";
}

ScenarioConfig paper_scenario(const ConfigOverrides& overrides) {
  return parse_config(paper_scenario_json(), overrides);
}

std::string effective_config_json(const ScenarioConfig& cfg) {
  const auto v3 = [](const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); };
  const auto aa = [](const AxisAngle& a) {
    return json::array({a.axis.x(), a.axis.y(), a.axis.z(), a.angle});
  };
  const LoopParams& p = cfg.params;
  json doc;
  if (cfg.inertia_full) {
    json arr = json::array();
    for (int i = 0; i < 9; ++i) arr.push_back(p.J.matrix()(i / 3, i % 3));
    doc["J_full"] = arr;
  } else {
    doc["J_diag"] = v3(p.J.matrix().diagonal());
  }
  doc["k_p"] = p.gains.k_p;
  doc["k_d"] = p.gains.k_d;
  doc["tau_max"] = p.spec.tau_max;
  doc["a_b"] = v3(p.spec.a_b);
  doc["a_c"] = v3(p.spec.a_c);
  doc["theta_c_deg"] = p.spec.theta_c * 180.0 / std::numbers::pi;
  doc["delta"] = p.pot.delta;
  doc["zeta"] = p.pot.zeta;
  doc["eta"] = p.pot.eta;
  doc["eps"] = p.pot.eps;
  doc["eps_gamma"] = p.gov.eps_gamma;
  doc["kappa"] = p.gov.kappa;
  doc["c_gamma"] = p.gov.c_gamma;
  doc["T_s"] = p.gov.T_s;
  doc["h"] = cfg.h;
  doc["t_final"] = cfg.t_final;
  doc["R0_axis_angle"] = aa(cfg.R0_axis_angle);
  doc["omega0"] = v3(cfg.omega0);
  doc["Rd_axis_angle"] = aa(cfg.Rd_axis_angle);
  doc["fit_window"] = cfg.fit_window;
  doc["convergence_tol"] = cfg.convergence_tol;
  doc["violation_tol"] = cfg.violation_tol;
  doc["gamma_d_tolerance"] = cfg.gamma_d_tolerance;
  if (!cfg.output_path.empty()) doc["output"] = cfg.output_path;
  // Derived, informational.
  json derived;
  derived["gamma_d"] = p.gov.gamma_d;
  derived["gamma_d_source"] = cfg.gamma_d_source;
  derived["a_c_input_norm"] = cfg.a_c_input_norm;
  derived["lambda_min"] = p.J.lambda_min();
  doc["derived"] = derived;
  return doc.dump(2) + "\n";
}

}  // namespace pet_erg
