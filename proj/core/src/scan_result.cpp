#include "quartet/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace quartet {

namespace {

std::string sig9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void ScanResult::add_column(std::string name, std::vector<double> values) {
  if (values.size() != axis.size())
    throw ValidationError("column '" + name + "' length differs from axis length");
  columns.emplace_back(std::move(name), std::move(values));
}

const std::vector<double>& ScanResult::column(std::string_view name) const {
  for (const auto& [n, v] : columns)
    if (n == name) return v;
  throw ValidationError("no column '" + std::string(name) + "'");
}

double ScanResult::fit_value(std::string_view name) const {
  for (const auto& p : fit)
    if (p.name == name) return p.value;
  throw ValidationError("no fit parameter '" + std::string(name) + "'");
}

void ScanResult::add_fit(std::string name, double value, double std_error) {
  fit.push_back({std::move(name), value, std_error});
}

void ScanResult::add_metadata(std::string key, std::string value) {
  metadata.emplace_back(std::move(key), std::move(value));
}

void ScanResult::validate() const {
  for (const auto& [n, v] : columns)
    if (v.size() != axis.size()) throw ValidationError("column '" + n + "' length mismatch");
}

void describe(ScanResult& scan, const SimulationSettings& s) {
  const QuartetParams& p = s.params;
  scan.add_metadata("D_over_h_Hz", exact(p.D_over_h));
  scan.add_metadata("gamma_rad_per_s_T", exact(p.gamma));
  scan.add_metadata("B0_T", exact(p.B0));
  scan.add_metadata("chi", exact(p.chi));
  scan.add_metadata("T2_star_s", exact(p.T2_star));
  scan.add_metadata("T2_s", exact(p.T2));
  scan.add_metadata("sigma_F_1s", exact(p.sigma_F_1s));
  scan.add_metadata("omega1_rad_per_s", exact(s.timing.omega1));
  scan.add_metadata("laser_init_s", exact(s.timing.laser_init));
  scan.add_metadata("pre_mw_delay_s", exact(s.timing.pre_mw_delay));
  scan.add_metadata("laser_readout_s", exact(s.timing.laser_readout));
  scan.add_metadata("engine", to_string(s.run.engine));
  scan.add_metadata("numeric_dt_s", exact(s.run.numeric_dt));
  scan.add_metadata("pulse_substep_s", exact(s.run.pulse_substep));
  scan.add_metadata("dephasing", s.run.dephasing ? "on" : "off");
  scan.add_metadata("detuning_during_pulses", s.run.detuning_during_pulses ? "on" : "off");
  scan.add_metadata("ensemble_samples", std::to_string(s.ensemble_samples));
  scan.add_metadata("seed", std::to_string(s.seed));
  scan.add_metadata("ac_phase_rad", exact(s.ac_phase));
  scan.add_metadata("ac_parity", to_string(s.ac_parity));
}

void write_csv(const ScanResult& scan, std::ostream& out) {
  scan.validate();
  for (const auto& [k, v] : scan.metadata) out << "# " << k << ": " << v << '\n';
  for (const auto& p : scan.fit)
    out << "# fit " << p.name << " = " << sig9(p.value) << " +- " << sig9(p.std_error) << '\n';
  out << scan.axis_name;
  for (const auto& [n, v] : scan.columns) out << ',' << n;
  out << '\n';
  for (std::size_t i = 0; i < scan.axis.size(); ++i) {
    out << sig9(scan.axis[i]);
    for (const auto& [n, v] : scan.columns) out << ',' << sig9(v[i]);
    out << '\n';
  }
}

std::string to_csv(const ScanResult& scan) {
  std::ostringstream os;
  write_csv(scan, os);
  return os.str();
}

std::vector<double> linspace(double start, double stop, std::size_t points) {
  if (points == 0) throw ValidationError("linspace: points >= 1 violated");
  std::vector<double> out(points);
  if (points == 1) {
    out[0] = start;
    return out;
  }
  const double step = (stop - start) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) out[i] = start + step * static_cast<double>(i);
  out.back() = stop;
  return out;
}

std::vector<double> logspace(double start, double stop, std::size_t points) {
  if (!(start > 0.0) || !(stop > 0.0)) throw ValidationError("logspace: bounds must be positive");
  std::vector<double> out = linspace(std::log10(start), std::log10(stop), points);
  for (double& v : out) v = std::pow(10.0, v);
  out.front() = start;
  if (points > 1) out.back() = stop;
  return out;
}

}  // namespace quartet
