#include "quartet/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

namespace quartet {

namespace {

std::string exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double ensemble_sigma(const SimulationSettings& s) {
  return s.ensemble_samples > 0 ? detuning_spread_from_t2_star(s.params.T2_star) : 0.0;
}

std::size_t ensemble_count(const SimulationSettings& s) {
  return std::max<std::size_t>(1, s.ensemble_samples);
}

double pi_duration(const SimulationSettings& s) {
  return duration_for_angle(std::numbers::pi, s.timing.omega1);
}

}  // namespace

double rabi_intensity(double t_mw, Mode mode, const SimulationSettings& settings) {
  const PulseSequence seq = build_rabi_sequence(t_mw, mode, settings.params, settings.timing);
  return ensemble_average(
      [&](double delta) {
        RunOptions run = settings.run;
        run.static_common += delta;
        return run_sequence(seq, std::nullopt, settings.params, run).intensity;
      },
      ensemble_sigma(settings), ensemble_count(settings), settings.seed);
}

double EchoIntensities::signal() const { return complementary_signal(a, b); }

EchoIntensities echo_intensities(double tau_prime, double tau, Mode mode, ReadoutPhase readout,
                                 const std::optional<AcField>& ac,
                                 const SimulationSettings& settings) {
  const PulseSequence seq_a = build_echo_sequence(tau_prime, tau, mode, readout, Acquisition::A,
                                                  settings.params, settings.timing);
  const PulseSequence seq_b = build_echo_sequence(tau_prime, tau, mode, readout, Acquisition::B,
                                                  settings.params, settings.timing);
  const std::vector<double> mean = ensemble_average(
      [&](double delta) {
        RunOptions run = settings.run;
        run.static_common += delta;
        return std::vector<double>{run_sequence(seq_a, ac, settings.params, run).intensity,
                                   run_sequence(seq_b, ac, settings.params, run).intensity};
      },
      ensemble_sigma(settings), ensemble_count(settings), settings.seed);
  return {mean[0], mean[1]};
}

double echo_signal(double tau_prime, double tau, Mode mode, ReadoutPhase readout,
                   const std::optional<AcField>& ac, const SimulationSettings& settings) {
  return echo_intensities(tau_prime, tau, mode, readout, ac, settings).signal();
}

ScanResult rabi_scan(std::span<const double> t_mw, Mode mode, const SimulationSettings& settings,
                     const NoiseSpec& noise) {
  ScanResult scan;
  scan.axis_name = "t_mw_s";
  scan.axis.assign(t_mw.begin(), t_mw.end());

  std::vector<double> intensity;
  intensity.reserve(t_mw.size());
  for (double t : t_mw) intensity.push_back(rabi_intensity(t, mode, settings));
  std::vector<double> contrast = contrast_trace(intensity);
  if (noise.enabled) {
    const ReadoutModel model{settings.params.chi, settings.params.sigma_F_1s};
    contrast = add_readout_noise(contrast, model, noise.integration_time, noise.seed);
  }

  const RabiFit fit = fit_rabi(scan.axis, contrast);
  std::vector<double> curve;
  std::vector<double> residual;
  for (std::size_t i = 0; i < t_mw.size(); ++i) {
    const double t = t_mw[i];
    curve.push_back(-fit.amplitude * std::cos(fit.omega1 * t) * std::exp(-fit.decay_rate * t));
    residual.push_back(contrast[i] - curve.back());
  }
  scan.add_column("intensity", std::move(intensity));
  scan.add_column("contrast", std::move(contrast));
  scan.add_column("fit", std::move(curve));
  scan.add_column("residual", std::move(residual));
  scan.add_fit("A_R", fit.amplitude, fit.amplitude_err);
  scan.add_fit("omega1", fit.omega1, fit.omega1_err);
  scan.add_fit("decay_rate", fit.decay_rate, fit.decay_rate_err);
  scan.add_metadata("mode", to_string(mode));
  scan.add_metadata("noise", noise.enabled ? "on" : "off");
  if (noise.enabled) {
    scan.add_metadata("integration_time_s", exact(noise.integration_time));
    scan.add_metadata("noise_seed", std::to_string(noise.seed));
  }
  describe(scan, settings);
  return scan;
}

ScanResult echo_envelope_scan(std::span<const double> tau, Mode mode,
                              const SimulationSettings& settings) {
  ScanResult scan;
  scan.axis_name = "tau_s";
  scan.axis.assign(tau.begin(), tau.end());
  std::vector<double> signal;
  for (double t : tau)
    signal.push_back(echo_signal(t, t, mode, ReadoutPhase::PlusMinusX, std::nullopt, settings));

  const EchoEnvelopeFit fit = fit_echo_envelope(scan.axis, signal);
  std::vector<double> curve;
  std::vector<double> residual;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    curve.push_back(fit.amplitude * std::exp(-2.0 * tau[i] / fit.T2));
    residual.push_back(signal[i] - curve.back());
  }
  scan.add_column("F", std::move(signal));
  scan.add_column("fit", std::move(curve));
  scan.add_column("residual", std::move(residual));
  scan.add_fit("A", fit.amplitude, fit.amplitude_err);
  scan.add_fit("T2", fit.T2, fit.T2_err);
  scan.add_metadata("mode", to_string(mode));
  scan.add_metadata("readout", "x");
  describe(scan, settings);
  return scan;
}

ScanResult echo_tau_scan(double tau_prime, std::span<const double> tau, Mode mode,
                         const SimulationSettings& settings) {
  ScanResult scan;
  scan.axis_name = "tau_s";
  scan.axis.assign(tau.begin(), tau.end());
  std::vector<double> signal;
  for (double t : tau)
    signal.push_back(
        echo_signal(tau_prime, t, mode, ReadoutPhase::PlusMinusX, std::nullopt, settings));
  scan.add_column("F", std::move(signal));
  scan.add_metadata("mode", to_string(mode));
  scan.add_metadata("tau_prime_s", exact(tau_prime));
  describe(scan, settings);
  return scan;
}

double accumulated_phase(double b, double nu, double gamma) {
  if (!(nu > 0.0)) throw ValidationError("accumulated_phase: nu > 0 violated");
  return gamma * b / (std::numbers::pi * nu);
}

double response_shape(ReadoutPhase readout, double b, double nu, double gamma) {
  const double two_phi = 2.0 * accumulated_phase(b, nu, gamma);
  return readout == ReadoutPhase::PlusMinusX ? std::cos(two_phi) : std::sin(two_phi);
}

ScanResult ac_response_amplitude_scan(std::span<const double> b, double tau, ReadoutPhase readout,
                                      Mode mode, const SimulationSettings& settings) {
  const double nu = synchronized_ac_frequency(tau, pi_duration(settings));
  ScanResult scan;
  scan.axis_name = "b_T";
  scan.axis.assign(b.begin(), b.end());

  std::vector<double> signal;
  for (double amplitude : b) {
    // A negative amplitude is the same field with its sign inverted.
    AcField ac{std::abs(amplitude), nu, settings.ac_phase + (amplitude < 0 ? std::numbers::pi : 0.0),
               settings.ac_parity};
    signal.push_back(echo_signal(tau, tau, mode, readout, ac, settings));
  }

  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double g = response_shape(readout, b[i], nu, settings.params.gamma);
    num += g * signal[i];
    den += g * g;
  }
  const double A = den > 0.0 ? num / den : 0.0;
  std::vector<double> curve;
  std::vector<double> residual;
  double ss = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    curve.push_back(A * response_shape(readout, b[i], nu, settings.params.gamma));
    residual.push_back(signal[i] - curve.back());
    ss += residual.back() * residual.back();
  }
  const double rms = b.empty() ? 0.0 : std::sqrt(ss / static_cast<double>(b.size()));
  const double a_err = den > 0.0 && b.size() > 1
                           ? std::sqrt(ss / static_cast<double>(b.size() - 1) / den)
                           : 0.0;

  scan.add_column("F", std::move(signal));
  scan.add_column("fit", std::move(curve));
  scan.add_column("residual", std::move(residual));
  scan.add_fit("A", A, a_err);
  scan.add_fit("nu", nu);
  scan.add_fit("rms_residual", rms);
  scan.add_metadata("mode", to_string(mode));
  scan.add_metadata("readout", to_string(readout));
  scan.add_metadata("tau_s", exact(tau));
  describe(scan, settings);
  return scan;
}

ScanResult ac_response_tau_scan(std::span<const double> tau, double b, ReadoutPhase readout,
                                Mode mode, const SimulationSettings& settings,
                                double nominal_tau) {
  const double nu = synchronized_ac_frequency(nominal_tau, pi_duration(settings));
  const AcField ac{b, nu, settings.ac_phase, settings.ac_parity};
  ScanResult scan;
  scan.axis_name = "tau_s";
  scan.axis.assign(tau.begin(), tau.end());
  std::vector<double> signal;
  std::vector<double> baseline;
  for (double t : tau) {
    signal.push_back(echo_signal(t, t, mode, readout, ac, settings));
    baseline.push_back(echo_signal(t, t, mode, readout, std::nullopt, settings));
  }
  scan.add_column("F", std::move(signal));
  scan.add_column("baseline", std::move(baseline));
  scan.add_fit("nu", nu);
  scan.add_metadata("mode", to_string(mode));
  scan.add_metadata("readout", to_string(readout));
  scan.add_metadata("b_T", exact(b));
  describe(scan, settings);
  return scan;
}

SensitivityReport sensitivity(double A, double sigma_F_1s, double nu, double gamma, Mode mode,
                              ReadoutPhase readout) {
  if (!(A > 0.0)) throw ValidationError("sensitivity: A > 0 violated");
  if (!(nu > 0.0)) throw ValidationError("sensitivity: nu > 0 violated");
  if (!(sigma_F_1s >= 0.0)) throw ValidationError("sensitivity: sigma_F_1s >= 0 violated");
  SensitivityReport r;
  r.delta_F = 2.0 * A * gamma / (std::numbers::pi * nu);
  r.sigma_F_1s = sigma_F_1s;
  r.eta = sigma_F_1s / r.delta_F;
  r.slope_point_b = readout == ReadoutPhase::PlusMinusX
                        ? std::numbers::pi * std::numbers::pi * nu / (4.0 * gamma)
                        : 0.0;
  r.mode = mode;
  r.readout = readout;
  return r;
}

std::vector<double> min_detectable_field(double eta, std::span<const double> T) {
  std::vector<double> out;
  out.reserve(T.size());
  for (double t : T) {
    if (!(t > 0.0)) throw ValidationError("min_detectable_field: T > 0 violated");
    out.push_back(eta / std::sqrt(t));
  }
  return out;
}

double monte_carlo_min_detectable_field(double A, double sigma_F_1s, double nu, double gamma,
                                        double T, std::size_t samples, std::uint64_t seed) {
  if (samples < 2) throw ValidationError("monte carlo needs at least two samples");
  if (!(A > 0.0) || !(T > 0.0) || !(nu > 0.0))
    throw ValidationError("monte carlo: A, T, nu must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma_F_1s / std::sqrt(T));
  const double scale = std::numbers::pi * nu / (2.0 * gamma);

  std::vector<double> estimates(samples);
  for (double& est : estimates) {
    const double F = noise(rng);
    est = scale * std::asin(std::clamp(F / A, -1.0, 1.0));
  }
  double mean = 0.0;
  for (double e : estimates) mean += e;
  mean /= static_cast<double>(samples);
  double ss = 0.0;
  for (double e : estimates) ss += (e - mean) * (e - mean);
  return std::sqrt(ss / static_cast<double>(samples - 1));
}

std::vector<double> cw_spectrum(const QuartetParams& params, std::span<const double> f,
                                double linewidth, double drive_scale) {
  if (!(linewidth > 0.0)) throw ValidationError("cw_spectrum: linewidth > 0 violated");
  std::vector<std::pair<double, double>> lines;  // (centre, height)
  if (params.B0 == 0.0) {
    lines.emplace_back(2.0 * params.D_over_h, 2.0 * drive_scale);
  } else {
    const auto r = resonance_frequencies(params);
    lines.emplace_back(std::abs(r.plus), drive_scale);
    lines.emplace_back(std::abs(r.minus), drive_scale);
  }
  const double hw2 = 0.25 * linewidth * linewidth;
  std::vector<double> out;
  out.reserve(f.size());
  for (double x : f) {
    double v = 0.0;
    for (const auto& [centre, height] : lines) v += height * hw2 / ((x - centre) * (x - centre) + hw2);
    out.push_back(v);
  }
  return out;
}

}  // namespace quartet
