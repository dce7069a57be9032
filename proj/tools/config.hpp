#pragma once

// Run configuration for quartet-sim.
//
// Text format, one setting per line:
//
//     # comment
//     B0 = 46 mT
//     T2 = 2.1 us
//     mode = duplex
//
// Dimensioned keys accept an optional unit suffix (with or without a space);
// a bare number is taken in SI units. Unknown keys are rejected.

#include "quartet/experiments.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace quartet::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class AcSweep { Amplitude, Tau };

struct ScanRanges {
  double rabi_t_start = 0.0;
  double rabi_t_stop = 395e-9;
  std::size_t rabi_points = 80;

  double echo_tau_start = 0.1e-6;
  double echo_tau_stop = 3.0e-6;
  std::size_t echo_points = 30;
  double echo_tau_prime = 0.0;  // 0: envelope scan with tau' = tau

  AcSweep acmag_sweep = AcSweep::Amplitude;
  double acmag_tau = 0.6e-6;
  double acmag_b_start = -20e-6;
  double acmag_b_stop = 20e-6;
  std::size_t acmag_points = 41;
  double acmag_b = 5.75e-6;  // fixed amplitude for the tau sweep
  double acmag_tau_start = 0.2e-6;
  double acmag_tau_stop = 1.5e-6;
  std::size_t acmag_tau_points = 66;

  double cw_f_start = 0.0;
  double cw_f_stop = 1500e6;
  std::size_t cw_points = 1501;
  double cw_linewidth = 10e6;

  double scaling_T_start = 1.0;
  double scaling_T_stop = 100.0;
  std::size_t scaling_points = 3;
  std::size_t mc_samples = 4000;
};

struct RunConfig {
  SimulationSettings settings;
  ScanRanges scan;
  Mode mode = Mode::Duplex;
  ReadoutPhase readout = ReadoutPhase::PlusMinusY;
  bool noise = false;
  double integration_time = 1.0;  // s
  std::string out;                // empty: stdout

  [[nodiscard]] ReadoutModel readout_model() const {
    return {settings.params.chi, settings.params.sigma_F_1s};
  }

  /// Module invariants plus scan-range sanity; throws ValidationError.
  void validate() const;
};

/// Applies `text` on top of `base`. Throws ConfigError ("config line N: ...")
/// for syntax, unknown keys and bad units, ValidationError for invariants.
RunConfig parse_config(std::string_view text, RunConfig base = {});

RunConfig load_config(const std::string& path, RunConfig base = {});

/// Canonical text form; parse_config(to_text(c)) reproduces c.
std::string to_text(const RunConfig& config);

struct Recipe {
  std::string name;
  std::string command;
  std::string description;
  std::string config;
};

const std::vector<Recipe>& recipes();
/// Throws ConfigError listing the known names.
const Recipe& find_recipe(std::string_view name);

}  // namespace quartet::cli
