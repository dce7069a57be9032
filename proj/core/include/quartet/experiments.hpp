#pragma once

// Scans reproducing the pulse-ODMR characterization and AC magnetometry
// measurements, plus sensitivity analysis.

#include "quartet/fitting.hpp"
#include "quartet/sequence.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace quartet {

/// Everything needed to reproduce a simulated measurement.
struct SimulationSettings {
  QuartetParams params;
  SequenceTiming timing;
  RunOptions run;
  /// Quasi-static Gaussian detuning ensemble (sigma = sqrt(2)/T2*); 0 disables.
  std::size_t ensemble_samples = 0;
  std::uint64_t seed = 1;
  double ac_phase = 0.0;  // rad, offset of the test field
  Parity ac_parity = Parity::Magnetic;
};

struct FitParameter {
  std::string name;
  double value = 0.0;
  double std_error = 0.0;
};

struct ScanResult {
  std::string axis_name;
  std::vector<double> axis;
  std::vector<std::pair<std::string, std::vector<double>>> columns;
  std::vector<FitParameter> fit;
  std::vector<std::pair<std::string, std::string>> metadata;

  /// Appends a column; throws ValidationError on a length mismatch.
  void add_column(std::string name, std::vector<double> values);
  [[nodiscard]] const std::vector<double>& column(std::string_view name) const;
  [[nodiscard]] double fit_value(std::string_view name) const;
  void add_fit(std::string name, double value, double std_error = 0.0);
  void add_metadata(std::string key, std::string value);
  void validate() const;
};

/// Records the parameter snapshot of `settings` as metadata.
void describe(ScanResult& scan, const SimulationSettings& settings);

/// CSV: `#`-prefixed metadata and fit lines, header row, 9 significant digits.
void write_csv(const ScanResult& scan, std::ostream& out);
std::string to_csv(const ScanResult& scan);

/// Evenly spaced points including both ends (`points` >= 1).
std::vector<double> linspace(double start, double stop, std::size_t points);
/// Logarithmically spaced points including both ends.
std::vector<double> logspace(double start, double stop, std::size_t points);

// --- single measurements -------------------------------------------------

/// Readout intensity after a Rabi pulse of length t_mw (ensemble averaged).
double rabi_intensity(double t_mw, Mode mode, const SimulationSettings& settings);

struct EchoIntensities {
  double a = 0.0;
  double b = 0.0;
  [[nodiscard]] double signal() const;  // complementary F
};

/// Complementary spin-echo measurement with an optional test field.
EchoIntensities echo_intensities(double tau_prime, double tau, Mode mode, ReadoutPhase readout,
                                 const std::optional<AcField>& ac,
                                 const SimulationSettings& settings);

double echo_signal(double tau_prime, double tau, Mode mode, ReadoutPhase readout,
                   const std::optional<AcField>& ac, const SimulationSettings& settings);

// --- scans ----------------------------------------------------------------

struct NoiseSpec {
  bool enabled = false;
  double integration_time = 1.0;  // s
  std::uint64_t seed = 1;
};

/// C(t) over MW durations, fitted with the damped-cosine Rabi model.
ScanResult rabi_scan(std::span<const double> t_mw, Mode mode, const SimulationSettings& settings,
                     const NoiseSpec& noise = {});

/// F(tau) at tau' = tau with +-x readout, fitted with A exp(-2 tau / T2).
ScanResult echo_envelope_scan(std::span<const double> tau, Mode mode,
                              const SimulationSettings& settings);

/// F(tau) at fixed tau' with +-x readout.
ScanResult echo_tau_scan(double tau_prime, std::span<const double> tau, Mode mode,
                         const SimulationSettings& settings);

/// phi = gamma b / (pi nu), the phase accumulated in one inter-pulse period.
double accumulated_phase(double b, double nu, double gamma);

/// Response model shape: cos(2 phi) for x readout, sin(2 phi) otherwise.
double response_shape(ReadoutPhase readout, double b, double nu, double gamma);

/// F(b) at the synchronized frequency for `tau`, fitted with A * shape(b).
/// Fit entries: A, nu, rms_residual.
ScanResult ac_response_amplitude_scan(std::span<const double> b, double tau, ReadoutPhase readout,
                                      Mode mode, const SimulationSettings& settings);

/// F(tau) at fixed b, with the field frequency synchronized to `nominal_tau`.
/// Columns: F and the b = 0 baseline.
ScanResult ac_response_tau_scan(std::span<const double> tau, double b, ReadoutPhase readout,
                                Mode mode, const SimulationSettings& settings,
                                double nominal_tau = 0.6e-6);

struct SensitivityReport {
  double delta_F = 0.0;     // 1/T
  double sigma_F_1s = 0.0;  // 1/sqrt(Hz)
  double eta = 0.0;         // T/sqrt(Hz)
  double slope_point_b = 0.0;  // T, where the response slope is maximal
  Mode mode = Mode::Duplex;
  ReadoutPhase readout = ReadoutPhase::PlusMinusY;
};

/// delta_F = 2 A gamma / (pi nu), eta = sigma_F_1s / delta_F.
SensitivityReport sensitivity(double A, double sigma_F_1s, double nu, double gamma,
                              Mode mode = Mode::Duplex,
                              ReadoutPhase readout = ReadoutPhase::PlusMinusY);

/// eta / sqrt(T) for each integration time.
std::vector<double> min_detectable_field(double eta, std::span<const double> T);

/// Standard deviation of the field estimated by inverting F_y = A sin(2 phi)
/// from `samples` noisy small-signal measurements of integration time T.
double monte_carlo_min_detectable_field(double A, double sigma_F_1s, double nu, double gamma,
                                        double T, std::size_t samples, std::uint64_t seed);

/// Simplified CW spectrum: Lorentzians (FWHM `linewidth`) of height
/// 2*drive_scale at 2 D/h for B0 = 0, or of height drive_scale at |f+| and |f-|.
std::vector<double> cw_spectrum(const QuartetParams& params, std::span<const double> f,
                                double linewidth, double drive_scale = 1.0);

}  // namespace quartet
