#include "commands.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace quartet::cli {

namespace {

constexpr std::array<Mode, 3> kModes = {Mode::SimplexPlus, Mode::SimplexMinus, Mode::Duplex};

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

// Copies the columns and fit entries of `part` into `into`, suffixed by mode.
void merge(ScanResult& into, const ScanResult& part, Mode mode) {
  const std::string suffix = std::string("_") + to_string(mode);
  for (const auto& [name, values] : part.columns) into.add_column(name + suffix, values);
  for (const FitParameter& p : part.fit) into.add_fit(p.name + suffix, p.value, p.std_error);
}

double duplex_gain(const ScanResult& scan, std::string_view fit_name) {
  const std::string n(fit_name);
  const double plus = scan.fit_value(n + "_simplex+");
  const double minus = scan.fit_value(n + "_simplex-");
  return scan.fit_value(n + "_duplex") / (0.5 * (plus + minus));
}

ScanResult rabi(const RunConfig& c, std::ostream& report) {
  const auto t = linspace(c.scan.rabi_t_start, c.scan.rabi_t_stop, c.scan.rabi_points);
  ScanResult out;
  out.axis_name = "t_mw_s";
  out.axis = t;
  std::uint64_t k = 0;
  for (Mode m : kModes) {
    const NoiseSpec noise{c.noise, c.integration_time, c.settings.seed + k++};
    const ScanResult part = rabi_scan(t, m, c.settings, noise);
    merge(out, part, m);
    report << to_string(m) << ": A_R = " << fmt("%.5f", 100.0 * part.fit_value("A_R"))
           << " %, 2A_R = " << fmt("%.4f", 200.0 * part.fit_value("A_R"))
           << " %, omega1/2pi = " << fmt("%.4f", part.fit_value("omega1") / kTwoPi / 1e6)
           << " MHz, decay rate = " << fmt("%.4g", part.fit_value("decay_rate")) << " 1/s\n";
  }
  const double gain = duplex_gain(out, "A_R");
  out.add_fit("duplex_gain", gain);
  report << "duplex gain: " << fmt("%.3f", gain) << '\n';
  out.add_metadata("noise", c.noise ? "on" : "off");
  if (c.noise) out.add_metadata("integration_time_s", fmt("%.17g", c.integration_time));
  describe(out, c.settings);
  return out;
}

ScanResult echo(const RunConfig& c, std::ostream& report) {
  const auto tau = linspace(c.scan.echo_tau_start, c.scan.echo_tau_stop, c.scan.echo_points);
  ScanResult out;
  out.axis_name = "tau_s";
  out.axis = tau;
  const bool envelope = c.scan.echo_tau_prime == 0.0;
  for (Mode m : kModes) {
    if (envelope) {
      const ScanResult part = echo_envelope_scan(tau, m, c.settings);
      merge(out, part, m);
      report << to_string(m) << ": A = " << fmt("%.5f", 100.0 * part.fit_value("A"))
             << " %, T2 = " << fmt("%.4f", part.fit_value("T2") * 1e6) << " us\n";
    } else {
      merge(out, echo_tau_scan(c.scan.echo_tau_prime, tau, m, c.settings), m);
    }
  }
  if (envelope) {
    const double gain = duplex_gain(out, "A");
    out.add_fit("duplex_gain", gain);
    report << "duplex gain: " << fmt("%.3f", gain) << '\n';
  } else {
    out.add_metadata("tau_prime_s", fmt("%.17g", c.scan.echo_tau_prime));
  }
  out.add_metadata("readout", "x");
  describe(out, c.settings);
  return out;
}

void print_sensitivity(const SensitivityReport& r, std::ostream& report) {
  report << "sensitivity (" << to_string(r.mode) << ", " << to_string(r.readout)
         << "): dF = " << fmt("%.4f", r.delta_F * 1e-6 * 100.0) << " %/uT, sigma_F(1) = "
         << fmt("%.4f", r.sigma_F_1s * 100.0) << " %/sqrtHz, eta = "
         << fmt("%.3f", r.eta * 1e6) << " uT/sqrtHz, slope point b = "
         << fmt("%.4g", r.slope_point_b * 1e6) << " uT\n";
}

ScanResult acmag(const RunConfig& c, std::ostream& report) {
  const QuartetParams& p = c.settings.params;
  if (c.scan.acmag_sweep == AcSweep::Tau) {
    const auto tau =
        linspace(c.scan.acmag_tau_start, c.scan.acmag_tau_stop, c.scan.acmag_tau_points);
    ScanResult out =
        ac_response_tau_scan(tau, c.scan.acmag_b, c.readout, c.mode, c.settings, c.scan.acmag_tau);
    report << "test field: b = " << fmt("%.4g", c.scan.acmag_b * 1e6)
           << " uT, nu = " << fmt("%.2f", out.fit_value("nu") / 1e3) << " kHz\n";
    return out;
  }
  const auto b = linspace(c.scan.acmag_b_start, c.scan.acmag_b_stop, c.scan.acmag_points);
  ScanResult out = ac_response_amplitude_scan(b, c.scan.acmag_tau, c.readout, c.mode, c.settings);
  const double A = out.fit_value("A");
  const double nu = out.fit_value("nu");
  report << "fit: A = " << fmt("%.5f", 100.0 * A) << " %, nu = " << fmt("%.2f", nu / 1e3)
         << " kHz, rms residual = " << fmt("%.3g", out.fit_value("rms_residual") / std::abs(A))
         << " of A\n";
  if (A > 0.0) {
    print_sensitivity(sensitivity(A, p.sigma_F_1s, nu, p.gamma, c.mode, c.readout), report);
  } else {
    report << "no magnetic response for this readout; sensitivity undefined\n";
  }
  return out;
}

ScanResult cw(const RunConfig& c, std::ostream& report) {
  const auto f = linspace(c.scan.cw_f_start, c.scan.cw_f_stop, c.scan.cw_points);
  QuartetParams zero = c.settings.params;
  zero.B0 = 0.0;
  ScanResult out;
  out.axis_name = "f_Hz";
  out.axis = f;
  out.add_column("zero_field", cw_spectrum(zero, f, c.scan.cw_linewidth));
  out.add_column("with_field", cw_spectrum(c.settings.params, f, c.scan.cw_linewidth));
  const ResonancePair r = resonance_frequencies(c.settings.params);
  report << "zero field line: " << fmt("%.2f", 2.0 * c.settings.params.D_over_h / 1e6)
         << " MHz\nf+ = " << fmt("%.2f", r.plus / 1e6) << " MHz, f- = "
         << fmt("%.2f", std::abs(r.minus) / 1e6) << " MHz\n";
  out.add_metadata("linewidth_Hz", fmt("%.17g", c.scan.cw_linewidth));
  describe(out, c.settings);
  return out;
}

ScanResult sensitivity_table(const RunConfig& c, std::ostream& report) {
  const QuartetParams& p = c.settings.params;
  const auto b = linspace(c.scan.acmag_b_start, c.scan.acmag_b_stop, c.scan.acmag_points);
  ScanResult out;
  out.axis_name = "row";
  std::vector<double> A_col, dF_col, eta_col;
  std::array<double, 2> duplex_eta{};
  std::array<double, 2> simplex_sum{};
  double row = 0.0;
  for (ReadoutPhase ro : {ReadoutPhase::PlusMinusX, ReadoutPhase::PlusMinusY}) {
    const int r = ro == ReadoutPhase::PlusMinusX ? 0 : 1;
    for (Mode m : kModes) {
      const ScanResult scan = ac_response_amplitude_scan(b, c.scan.acmag_tau, ro, m, c.settings);
      const SensitivityReport s =
          sensitivity(scan.fit_value("A"), p.sigma_F_1s, scan.fit_value("nu"), p.gamma, m, ro);
      print_sensitivity(s, report);
      out.axis.push_back(row);
      out.add_metadata("row " + fmt("%.0f", row), std::string(to_string(m)) + " " + to_string(ro));
      row += 1.0;
      A_col.push_back(scan.fit_value("A"));
      dF_col.push_back(s.delta_F);
      eta_col.push_back(s.eta);
      if (m == Mode::Duplex) duplex_eta[r] = s.eta;
      else simplex_sum[r] += s.eta;
    }
  }
  for (int r = 0; r < 2; ++r)
    report << "gain (" << (r == 0 ? "x" : "y")
           << "): " << fmt("%.3f", 0.5 * simplex_sum[r] / duplex_eta[r]) << '\n';
  out.add_column("A", std::move(A_col));
  out.add_column("delta_F_per_T", std::move(dF_col));
  out.add_column("eta_T_per_sqrtHz", std::move(eta_col));
  describe(out, c.settings);
  return out;
}

ScanResult scaling(const RunConfig& c, std::ostream& report) {
  const QuartetParams& p = c.settings.params;
  // The Monte-Carlo estimator inverts F_y, so the amplitude comes from +-y.
  const auto b = linspace(c.scan.acmag_b_start, c.scan.acmag_b_stop, c.scan.acmag_points);
  const ScanResult ac =
      ac_response_amplitude_scan(b, c.scan.acmag_tau, ReadoutPhase::PlusMinusY, c.mode, c.settings);
  const double A = ac.fit_value("A");
  const double nu = ac.fit_value("nu");
  const SensitivityReport s =
      sensitivity(A, p.sigma_F_1s, nu, p.gamma, c.mode, ReadoutPhase::PlusMinusY);
  print_sensitivity(s, report);

  const auto T = logspace(c.scan.scaling_T_start, c.scan.scaling_T_stop, c.scan.scaling_points);
  std::vector<double> mc;
  for (std::size_t i = 0; i < T.size(); ++i)
    mc.push_back(monte_carlo_min_detectable_field(A, p.sigma_F_1s, nu, p.gamma, T[i],
                                                  c.scan.mc_samples, c.settings.seed + i));
  ScanResult out;
  out.axis_name = "T_s";
  out.axis = T;
  out.add_column("delta_B_T", min_detectable_field(s.eta, T));
  out.add_column("delta_B_mc_T", mc);
  out.add_fit("eta", s.eta);
  if (T.size() >= 2) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < T.size(); ++i) {
      mx += std::log(T[i]);
      my += std::log(mc[i]);
    }
    mx /= static_cast<double>(T.size());
    my /= static_cast<double>(T.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < T.size(); ++i) {
      sxy += (std::log(T[i]) - mx) * (std::log(mc[i]) - my);
      sxx += (std::log(T[i]) - mx) * (std::log(T[i]) - mx);
    }
    const double exponent = sxx > 0.0 ? sxy / sxx : 0.0;
    out.add_fit("mc_exponent", exponent);
    report << "Monte-Carlo exponent: " << fmt("%.4f", exponent) << '\n';
  }
  out.add_metadata("mode", to_string(c.mode));
  out.add_metadata("readout", "y");
  out.add_metadata("mc_samples", std::to_string(c.scan.mc_samples));
  describe(out, c.settings);
  return out;
}

}  // namespace

const std::vector<std::string_view>& command_names() {
  static const std::vector<std::string_view> names = {"rabi", "echo",        "acmag",
                                                      "cw",   "sensitivity", "scaling"};
  return names;
}

ScanResult run_command(std::string_view name, const RunConfig& config, std::ostream& report) {
  config.validate();
  if (name == "rabi") return rabi(config, report);
  if (name == "echo") return echo(config, report);
  if (name == "acmag") return acmag(config, report);
  if (name == "cw") return cw(config, report);
  if (name == "sensitivity") return sensitivity_table(config, report);
  if (name == "scaling") return scaling(config, report);
  throw ConfigError("unknown command '" + std::string(name) + "'");
}

}  // namespace quartet::cli
