#pragma once

// Curve fits for the pulse-ODMR observables.

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace quartet {

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FitOptions {
  int max_evaluations = 500;
  double relative_tolerance = 1e-10;  // on parameter change
};

struct CurveFit {
  std::vector<double> params;
  std::vector<double> std_errors;  // from s^2 (J^T J)^-1
  double rss = 0.0;
  int evaluations = 0;
};

using CurveModel = std::function<double(double x, std::span<const double> p)>;
using CurveGradient = std::function<void(double x, std::span<const double> p, std::span<double> g)>;

/// Levenberg-Marquardt least squares of y ~ model(x, p). Throws FitError on
/// non-convergence.
CurveFit least_squares(const CurveModel& model, const CurveGradient& gradient,
                       std::span<const double> x, std::span<const double> y,
                       std::vector<double> p0, const FitOptions& options = {});

struct RabiFit {
  double amplitude = 0.0;        // A_R
  double omega1 = 0.0;           // rad/s
  double decay_rate = 0.0;       // 1/T2*, may be ~0 for an undamped trace
  double amplitude_err = 0.0;
  double omega1_err = 0.0;
  double decay_rate_err = 0.0;

  /// 1 / decay_rate, or +inf when the fitted decay is not positive.
  [[nodiscard]] double t2_star() const;
};

/// C(t) = -A_R cos(omega1 t) exp(-t / T2*). The frequency is seeded from the
/// dominant non-zero bin of a discrete spectrum, the decay from a log-linear
/// regression on envelope extrema.
RabiFit fit_rabi(std::span<const double> t, std::span<const double> contrast,
                 const FitOptions& options = {});

/// Dominant non-DC frequency (Hz) of a trace, parabolically refined.
double dominant_frequency(std::span<const double> t, std::span<const double> y);

struct EchoEnvelopeFit {
  double amplitude = 0.0;
  double T2 = 0.0;
  double amplitude_err = 0.0;
  double T2_err = 0.0;
};

/// F(tau) = A exp(-2 tau / T2).
EchoEnvelopeFit fit_echo_envelope(std::span<const double> tau, std::span<const double> signal,
                                  const FitOptions& options = {});

}  // namespace quartet
