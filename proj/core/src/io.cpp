#include "pet_erg/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "pet_erg/error.hpp"

namespace pet_erg {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path.string());
  return out;
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_trajectory_csv(std::ostream& os, const TrajectoryLog& log) {
  const auto& cols = trajectory_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    os << (i ? "," : "") << cols[i];
  }
  os << '\n';
  std::string line;
  for (const LogRow& r : log) {
    line.clear();
    auto put = [&](double x) {
      if (!line.empty()) line += ',';
      line += format_real(x);
    };
    put(r.t);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) put(r.R(i, j));
    for (int i = 0; i < 3; ++i) put(r.omega[i]);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) put(r.R_g(i, j));
    put(r.V);
    put(r.gamma);
    put(r.gamma_d);
    put(r.gamma_g);
    line += r.event_flag ? ",1" : ",0";
    for (int i = 0; i < 3; ++i) put(r.tau[i]);
    put(r.tau_norm);
    put(r.c);
    put(r.phi_R_Rd);
    put(r.phi_Rg_Rd);
    os << line << '\n';
  }
}

void write_trajectory_csv(const std::filesystem::path& path,
                          const TrajectoryLog& log) {
  auto out = open_out(path);
  write_trajectory_csv(out, log);
}

std::string summary_line(const ConstraintReport& r) {
  std::ostringstream os;
  os << (r.any_violation() ? "VIOLATION" : "OK") << " max|tau|="
     << format_real(r.max_tau) << " min_margin="
     << format_real(r.min_pointing_margin) << " max(V-Gamma)="
     << format_real(r.max_v_minus_gamma) << " final_phi="
     << format_real(r.final_phi_R_Rd) << " rows=" << r.rows;
  return os.str();
}

std::string format_report(const ScenarioConfig& cfg,
                          const SimulationResult& result) {
  const ConstraintReport& r = result.report;
  std::ostringstream os;
  os << "Closed-loop run, " << r.rows << " rows, h = " << cfg.h
     << " s, t_final = " << cfg.t_final << " s\n";
  os << "  input constraint   : max |tau| = " << format_real(r.max_tau)
     << " N m at t = " << r.t_max_tau << " (limit " << cfg.spec().tau_max
     << ")" << (r.torque_violation ? "  VIOLATED" : "") << "\n";
  os << "  pointing constraint: min margin = "
     << format_real(r.min_pointing_margin) << " at t = "
     << r.t_min_pointing_margin << (r.pointing_violation ? "  VIOLATED" : "")
     << "\n";
  os << "  invariance         : max (V - Gamma) = "
     << format_real(r.max_v_minus_gamma) << " at t = "
     << r.t_max_v_minus_gamma << (r.invariance_violation ? "  VIOLATED" : "")
     << "\n";
  os << "  final errors       : phi(R^T Rd) = " << format_real(r.final_phi_R_Rd)
     << ", phi(Rg^T Rd) = " << format_real(r.final_phi_Rg_Rd)
     << ", |omega| = " << format_real(r.final_omega_norm) << "\n";
  os << "  exponential tail   : rate = " << format_real(r.fit.rate)
     << " 1/s, R^2 = " << format_real(r.fit.r_squared) << " over "
     << r.fit.points << " rows\n";
  for (const auto& w : result.warnings) os << "  warning: " << w << "\n";

  os << "\n[report]\n";
  os << "rows=" << r.rows << "\n";
  os << "gamma_d=" << format_real(cfg.params.gov.gamma_d) << "\n";
  os << "max_tau=" << format_real(r.max_tau) << "\n";
  os << "t_max_tau=" << format_real(r.t_max_tau) << "\n";
  os << "min_pointing_margin=" << format_real(r.min_pointing_margin) << "\n";
  os << "t_min_pointing_margin=" << format_real(r.t_min_pointing_margin)
     << "\n";
  os << "max_v_minus_gamma=" << format_real(r.max_v_minus_gamma) << "\n";
  os << "t_max_v_minus_gamma=" << format_real(r.t_max_v_minus_gamma) << "\n";
  os << "t_converged="
     << (r.t_converged ? format_real(*r.t_converged) : std::string("none"))
     << "\n";
  os << "fit_rate=" << format_real(r.fit.rate) << "\n";
  os << "fit_intercept=" << format_real(r.fit.intercept) << "\n";
  os << "fit_r_squared=" << format_real(r.fit.r_squared) << "\n";
  os << "final_phi_R_Rd=" << format_real(r.final_phi_R_Rd) << "\n";
  os << "final_phi_Rg_Rd=" << format_real(r.final_phi_Rg_Rd) << "\n";
  os << "final_omega_norm=" << format_real(r.final_omega_norm) << "\n";
  os << "max_drift=" << format_real(r.max_drift) << "\n";
  os << "safe_samples=" << r.safe_samples << "\n";
  os << "hypothesis_satisfied=" << yes_no(result.hypothesis_satisfied) << "\n";
  os << "torque_violation=" << yes_no(r.torque_violation) << "\n";
  os << "pointing_violation=" << yes_no(r.pointing_violation) << "\n";
  os << "invariance_violation=" << yes_no(r.invariance_violation) << "\n";
  os << "\n[config]\n" << effective_config_json(cfg);
  return os.str();
}

void write_sweep_csv(std::ostream& os, const SweepSummary& summary) {
  os << "run,seed,generator,R0_axis_x,R0_axis_y,R0_axis_z,R0_angle,"
        "omega0_x,omega0_y,omega0_z,max_tau,min_pointing_margin,"
        "max_v_minus_gamma,final_phi_R_Rd,final_phi_Rg_Rd,final_omega_norm,"
        "fit_rate,fit_r_squared,aborted,pass\n";
  for (const SweepRun& r : summary.runs) {
    const auto& a = r.R0_perturbation;
    os << r.index << ',' << summary.seed << ',' << summary.generator << ','
       << format_real(a.axis.x()) << ',' << format_real(a.axis.y()) << ','
       << format_real(a.axis.z()) << ',' << format_real(a.angle) << ','
       << format_real(r.omega0.x()) << ',' << format_real(r.omega0.y()) << ','
       << format_real(r.omega0.z()) << ',' << format_real(r.report.max_tau)
       << ',' << format_real(r.report.min_pointing_margin) << ','
       << format_real(r.report.max_v_minus_gamma) << ','
       << format_real(r.report.final_phi_R_Rd) << ','
       << format_real(r.report.final_phi_Rg_Rd) << ','
       << format_real(r.report.final_omega_norm) << ','
       << format_real(r.report.fit.rate) << ','
       << format_real(r.report.fit.r_squared) << ',' << (r.aborted ? 1 : 0)
       << ',' << (r.pass() ? 1 : 0) << '\n';
  }
}

void write_sweep_csv(const std::filesystem::path& path,
                     const SweepSummary& summary) {
  auto out = open_out(path);
  write_sweep_csv(out, summary);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
}

}  // namespace pet_erg
