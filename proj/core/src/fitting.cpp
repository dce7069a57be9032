#include "quartet/fitting.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>

namespace quartet {

namespace {

struct ResidualFunctor {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  const CurveModel& model;
  const CurveGradient& gradient;
  std::span<const double> x;
  std::span<const double> y;
  int n_params;

  int inputs() const { return n_params; }
  int values() const { return static_cast<int>(x.size()); }

  int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& f) const {
    const std::span<const double> ps(p.data(), static_cast<std::size_t>(p.size()));
    for (std::size_t i = 0; i < x.size(); ++i) f(static_cast<Eigen::Index>(i)) = model(x[i], ps) - y[i];
    return 0;
  }

  int df(const Eigen::VectorXd& p, Eigen::MatrixXd& jac) const {
    const std::span<const double> ps(p.data(), static_cast<std::size_t>(p.size()));
    std::vector<double> g(static_cast<std::size_t>(n_params));
    for (std::size_t i = 0; i < x.size(); ++i) {
      gradient(x[i], ps, g);
      for (int k = 0; k < n_params; ++k) jac(static_cast<Eigen::Index>(i), k) = g[static_cast<std::size_t>(k)];
    }
    return 0;
  }
};

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void check_inputs(std::span<const double> x, std::span<const double> y, std::size_t min_points) {
  if (x.size() != y.size()) throw FitError("fit: x and y lengths differ");
  if (x.size() < min_points) throw FitError("fit: too few points");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw FitError("fit: non-finite input");
}

// Least-squares slope/intercept of y on x.
std::pair<double, double> linear_regression(std::span<const double> x, std::span<const double> y) {
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  return {slope, my - slope * mx};
}

}  // namespace

CurveFit least_squares(const CurveModel& model, const CurveGradient& gradient,
                       std::span<const double> x, std::span<const double> y,
                       std::vector<double> p0, const FitOptions& options) {
  check_inputs(x, y, p0.size() + 1);
  const int np = static_cast<int>(p0.size());
  ResidualFunctor functor{model, gradient, x, y, np};
  Eigen::LevenbergMarquardt<ResidualFunctor> lm(functor);
  lm.parameters.maxfev = options.max_evaluations;
  lm.parameters.xtol = options.relative_tolerance;
  lm.parameters.ftol = options.relative_tolerance;

  Eigen::VectorXd p = Eigen::Map<const Eigen::VectorXd>(p0.data(), np);
  const auto status = lm.minimize(p);
  using namespace Eigen::LevenbergMarquardtSpace;
  const bool converged = status == RelativeReductionTooSmall || status == RelativeErrorTooSmall ||
                         status == RelativeErrorAndReductionTooSmall || status == CosinusTooSmall ||
                         status == XtolTooSmall || status == FtolTooSmall;
  if (!converged || !p.allFinite()) {
    throw FitError("least squares did not converge (status " + std::to_string(int(status)) + ")");
  }

  Eigen::VectorXd r(functor.values());
  functor(p, r);
  Eigen::MatrixXd jac(functor.values(), np);
  functor.df(p, jac);

  CurveFit fit;
  fit.params.assign(p.data(), p.data() + np);
  fit.rss = r.squaredNorm();
  fit.evaluations = static_cast<int>(lm.nfev);
  const double dof = static_cast<double>(x.size()) - np;
  const Eigen::MatrixXd cov = (jac.transpose() * jac).completeOrthogonalDecomposition().pseudoInverse() *
                              (fit.rss / dof);
  for (int k = 0; k < np; ++k) fit.std_errors.push_back(std::sqrt(std::max(0.0, cov(k, k))));
  return fit;
}

double RabiFit::t2_star() const {
  return decay_rate > 0.0 ? 1.0 / decay_rate : std::numeric_limits<double>::infinity();
}

double dominant_frequency(std::span<const double> t, std::span<const double> y) {
  check_inputs(t, y, 4);
  const std::size_t n = t.size();
  const double span = t.back() - t.front();
  if (!(span > 0.0)) throw FitError("dominant_frequency: zero time span");
  const double df = static_cast<double>(n - 1) / (static_cast<double>(n) * span);
  const double my = mean_of(y);

  auto magnitude = [&](double f) {
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      acc += (y[i] - my) * std::polar(1.0, -2.0 * std::numbers::pi * f * t[i]);
    return std::abs(acc);
  };

  const std::size_t bins = n / 2;
  std::vector<double> mag(bins + 1, 0.0);
  for (std::size_t k = 1; k <= bins; ++k) mag[k] = magnitude(static_cast<double>(k) * df);
  const auto peak = static_cast<std::size_t>(std::max_element(mag.begin() + 1, mag.end()) - mag.begin());

  double shift = 0.0;
  if (peak > 1 && peak < bins) {
    const double a = mag[peak - 1];
    const double b = mag[peak];
    const double c = mag[peak + 1];
    const double denom = a - 2.0 * b + c;
    if (denom != 0.0) shift = 0.5 * (a - c) / denom;
  }
  return (static_cast<double>(peak) + shift) * df;
}

RabiFit fit_rabi(std::span<const double> t, std::span<const double> contrast,
                 const FitOptions& options) {
  check_inputs(t, contrast, 8);
  const double my = mean_of(contrast);
  double spread = 0.0;
  for (double c : contrast) spread = std::max(spread, std::abs(c - my));
  if (!(spread > 1e-14)) throw FitError("fit_rabi: degenerate (flat) trace");

  const double omega0 = 2.0 * std::numbers::pi * dominant_frequency(t, contrast);
  const double span = t.back() - t.front();
  if (omega0 * span < 4.0 * std::numbers::pi)
    throw FitError("fit_rabi: trace spans fewer than two Rabi periods");

  // Amplitude seed from a linear projection onto -cos(omega0 t).
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double basis = -std::cos(omega0 * t[i]);
    num += basis * contrast[i];
    den += basis * basis;
  }
  const double a0 = num / den;

  // Decay seed from the extrema of |C| between sign changes.
  std::vector<double> ext_t;
  std::vector<double> ext_log;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= t.size(); ++i) {
    if (i == t.size() || std::signbit(contrast[i]) != std::signbit(contrast[start])) {
      std::size_t best = start;
      for (std::size_t j = start; j < i; ++j)
        if (std::abs(contrast[j]) > std::abs(contrast[best])) best = j;
      if (std::abs(contrast[best]) > 0.0) {
        ext_t.push_back(t[best]);
        ext_log.push_back(std::log(std::abs(contrast[best])));
      }
      start = i;
    }
  }
  double gamma0 = 0.0;
  if (ext_t.size() >= 3) gamma0 = std::max(0.0, -linear_regression(ext_t, ext_log).first);

  const CurveModel model = [](double x, std::span<const double> p) {
    return -p[0] * std::cos(p[1] * x) * std::exp(-p[2] * x);
  };
  const CurveGradient grad = [](double x, std::span<const double> p, std::span<double> g) {
    const double e = std::exp(-p[2] * x);
    const double c = std::cos(p[1] * x);
    const double s = std::sin(p[1] * x);
    g[0] = -c * e;
    g[1] = p[0] * x * s * e;
    g[2] = p[0] * x * c * e;
  };

  // Time in units of 1/omega0 for conditioning.
  const double scale = 1.0 / omega0;
  std::vector<double> ts(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) ts[i] = t[i] / scale;
  const CurveFit fit = least_squares(model, grad, ts, contrast, {a0, 1.0, gamma0 * scale}, options);

  RabiFit out;
  out.amplitude = fit.params[0];
  out.omega1 = fit.params[1] / scale;
  out.decay_rate = fit.params[2] / scale;
  out.amplitude_err = fit.std_errors[0];
  out.omega1_err = fit.std_errors[1] / scale;
  out.decay_rate_err = fit.std_errors[2] / scale;
  return out;
}

EchoEnvelopeFit fit_echo_envelope(std::span<const double> tau, std::span<const double> signal,
                                  const FitOptions& options) {
  check_inputs(tau, signal, 3);
  std::vector<double> xs;
  std::vector<double> logs;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    if (signal[i] > 0.0) {
      xs.push_back(tau[i]);
      logs.push_back(std::log(signal[i]));
    }
  }
  if (xs.size() < 2) throw FitError("fit_echo_envelope: fewer than two positive samples");
  const auto [slope, intercept] = linear_regression(xs, logs);
  if (!(slope < 0.0)) throw FitError("fit_echo_envelope: envelope does not decay");

  const double scale = -1.0 / slope;  // tau unit so the seed rate is 1
  std::vector<double> ts(tau.size());
  for (std::size_t i = 0; i < tau.size(); ++i) ts[i] = tau[i] / scale;

  const CurveModel model = [](double x, std::span<const double> p) {
    return p[0] * std::exp(-p[1] * x);
  };
  const CurveGradient grad = [](double x, std::span<const double> p, std::span<double> g) {
    const double e = std::exp(-p[1] * x);
    g[0] = e;
    g[1] = -p[0] * x * e;
  };
  const CurveFit fit = least_squares(model, grad, ts, signal, {std::exp(intercept), 1.0}, options);

  const double rate = fit.params[1] / scale;  // = 2 / T2
  EchoEnvelopeFit out;
  out.amplitude = fit.params[0];
  out.T2 = 2.0 / rate;
  out.amplitude_err = fit.std_errors[0];
  out.T2_err = 2.0 * (fit.std_errors[1] / scale) / (rate * rate);
  return out;
}

}  // namespace quartet
