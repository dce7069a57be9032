#include "quartet/experiments.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace quartet {
namespace {

constexpr double kPi = std::numbers::pi;

double A_envelope(const SimulationSettings& s, ReadoutPhase ro = ReadoutPhase::PlusMinusX) {
  return echo_signal(0.6e-6, 0.6e-6, Mode::Duplex, ro, std::nullopt, s);
}

TEST(AccumulatedPhase, MatchesHalfPeriodIntegral) {
  const QuartetParams p;
  const double b = 5.75e-6, nu = 769.23e3;
  // gamma times the area under one positive half period of b sin(2 pi nu t).
  const int n = 100000;
  const double half = 0.5 / nu;
  double area = 0.0;
  for (int i = 0; i < n; ++i) area += b * std::sin(kTwoPi * nu * (i + 0.5) * half / n);
  area *= half / n;
  EXPECT_NEAR(accumulated_phase(b, nu, p.gamma), p.gamma * area, 1e-9);
  EXPECT_NEAR(accumulated_phase(b, nu, p.gamma), 0.4189, 5e-4);
  EXPECT_DOUBLE_EQ(response_shape(ReadoutPhase::PlusMinusX, 0.0, nu, p.gamma), 1.0);
  EXPECT_NEAR(response_shape(ReadoutPhase::PlusMinusY, b, nu, p.gamma), std::sin(2 * 0.41888), 1e-3);
}

TEST(RabiScan, ContrastCalibrationAndGain) {
  const SimulationSettings s;
  const auto t = linspace(0.0, 395e-9, 80);
  const double plus = rabi_scan(t, Mode::SimplexPlus, s).fit_value("A_R");
  const double minus = rabi_scan(t, Mode::SimplexMinus, s).fit_value("A_R");
  const double duplex = rabi_scan(t, Mode::Duplex, s).fit_value("A_R");
  EXPECT_NEAR(2.0 * plus, 0.0070, 0.0002);
  EXPECT_NEAR(2.0 * minus, 0.0070, 0.0002);
  EXPECT_NEAR(2.0 * duplex, 0.0140, 0.0002);
  EXPECT_NEAR(duplex / (0.5 * (plus + minus)), 2.0, 0.02);
  const ScanResult r = rabi_scan(t, Mode::Duplex, s);
  EXPECT_NEAR(r.fit_value("omega1"), s.timing.omega1, 1e-3 * s.timing.omega1);
  for (double v : r.column("residual")) EXPECT_LT(std::abs(v), 2e-4);
}

TEST(RabiScan, NoisyScanIsSeeded) {
  const SimulationSettings s;
  const auto t = linspace(0.0, 395e-9, 40);
  const NoiseSpec noise{true, 10.0, 5};
  EXPECT_EQ(to_csv(rabi_scan(t, Mode::Duplex, s, noise)), to_csv(rabi_scan(t, Mode::Duplex, s, noise)));
  NoiseSpec other = noise;
  other.seed = 6;
  EXPECT_NE(rabi_scan(t, Mode::Duplex, s, noise).column("contrast"),
            rabi_scan(t, Mode::Duplex, s, other).column("contrast"));
}

TEST(EchoEnvelopeScan, RecoversT2) {
  const SimulationSettings s;
  const auto tau = linspace(0.1e-6, 3e-6, 30);
  const ScanResult r = echo_envelope_scan(tau, Mode::Duplex, s);
  EXPECT_NEAR(r.fit_value("T2") / s.params.T2, 1.0, 0.02);
  EXPECT_GT(r.fit_value("A"), 0.0);
}

TEST(EchoTauScan, FollowsEnsembleEnvelope) {
  // Quasi-static ensemble: exp(-((tau - tau')/T2*)^2) times exp(-(tau + tau')/T2).
  // The curve maximum sits at tau' - T2*^2 / (2 T2), not at tau'.
  SimulationSettings s;
  s.ensemble_samples = 4000;
  const double tp = 1e-6, T2s = s.params.T2_star;
  const auto tau = linspace(0.5e-6, 1.5e-6, 11);
  const auto F = echo_tau_scan(tp, tau, Mode::Duplex, s).column("F");
  std::vector<double> ratio;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    const double d = (tau[i] - tp) / T2s;
    ratio.push_back(F[i] / (std::exp(-(tau[i] + tp) / s.params.T2) * std::exp(-d * d)));
  }
  const auto [lo, hi] = std::minmax_element(ratio.begin(), ratio.end());
  EXPECT_LT(*hi / *lo, 1.01);
  const auto peak = std::max_element(F.begin(), F.end()) - F.begin();
  EXPECT_NEAR(tau[peak], tp - T2s * T2s / (2.0 * s.params.T2), 0.05e-6);
}

class AcResponse : public ::testing::TestWithParam<ReadoutPhase> {};

TEST_P(AcResponse, FollowsSinusoidalModel) {
  const SimulationSettings s;
  const double nu = synchronized_ac_frequency(0.6e-6, 50e-9);
  const double b_max = kPi * kPi * nu / (4.0 * s.params.gamma);
  const ScanResult r =
      ac_response_amplitude_scan(linspace(-b_max, b_max, 21), 0.6e-6, GetParam(), Mode::Duplex, s);
  const double A = A_envelope(s);
  const auto& F = r.column("F");
  double ss = 0.0;
  for (std::size_t i = 0; i < F.size(); ++i) {
    const double model = A * response_shape(GetParam(), r.axis[i], nu, s.params.gamma);
    ss += (F[i] - model) * (F[i] - model);
  }
  EXPECT_LT(std::sqrt(ss / F.size()), 0.01 * A);
  EXPECT_NEAR(r.fit_value("nu"), nu, 1e-6);
  // Parity in b over a symmetric grid.
  for (std::size_t i = 0; i < F.size(); ++i) {
    const double mirror = F[F.size() - 1 - i];
    if (GetParam() == ReadoutPhase::PlusMinusX) EXPECT_NEAR(F[i], mirror, 1e-12);
    else EXPECT_NEAR(F[i], -mirror, 1e-12);
  }
}

INSTANTIATE_TEST_SUITE_P(Readouts, AcResponse,
                         ::testing::Values(ReadoutPhase::PlusMinusX, ReadoutPhase::PlusMinusY));

TEST(AcResponse, DuplexGain) {
  const SimulationSettings s;
  const auto b = linspace(-10e-6, 10e-6, 21);
  for (ReadoutPhase ro : {ReadoutPhase::PlusMinusX, ReadoutPhase::PlusMinusY}) {
    const double d = ac_response_amplitude_scan(b, 0.6e-6, ro, Mode::Duplex, s).fit_value("A");
    const double p = ac_response_amplitude_scan(b, 0.6e-6, ro, Mode::SimplexPlus, s).fit_value("A");
    const double m = ac_response_amplitude_scan(b, 0.6e-6, ro, Mode::SimplexMinus, s).fit_value("A");
    EXPECT_GE(d / (0.5 * (p + m)), 1.98);
    EXPECT_LE(d / (0.5 * (p + m)), 2.02);
  }
}

TEST(AcResponse, QuadratureSumInCoherentLimit) {
  // Without dephasing the two readouts are the projections of one Bloch
  // vector, so F_x^2 + F_y^2 stays at A^2.
  SimulationSettings s;
  s.run.dephasing = false;
  const double nu = synchronized_ac_frequency(0.6e-6, 50e-9);
  const double A = A_envelope(s);
  for (double b : linspace(-10e-6, 10e-6, 11)) {
    const AcField ac{std::abs(b), nu, b < 0 ? kPi : 0.0, Parity::Magnetic};
    const double fx = echo_signal(0.6e-6, 0.6e-6, Mode::Duplex, ReadoutPhase::PlusMinusX, ac, s);
    const double fy = echo_signal(0.6e-6, 0.6e-6, Mode::Duplex, ReadoutPhase::PlusMinusY, ac, s);
    EXPECT_NEAR((fx * fx + fy * fy) / (A * A), 1.0, 0.01) << "b = " << b;
  }
}

TEST(AcResponse, SmallSignalSlope) {
  const SimulationSettings s;
  const double nu = synchronized_ac_frequency(0.6e-6, 50e-9);
  const double A_y = ac_response_amplitude_scan(linspace(-10e-6, 10e-6, 21), 0.6e-6,
                                                ReadoutPhase::PlusMinusY, Mode::Duplex, s)
                         .fit_value("A");
  const double h = 0.05e-6;
  const AcField up{h, nu, 0.0, Parity::Magnetic};
  const AcField down{h, nu, kPi, Parity::Magnetic};
  const double slope =
      (echo_signal(0.6e-6, 0.6e-6, Mode::Duplex, ReadoutPhase::PlusMinusY, up, s) -
       echo_signal(0.6e-6, 0.6e-6, Mode::Duplex, ReadoutPhase::PlusMinusY, down, s)) /
      (2.0 * h);
  EXPECT_NEAR(slope / sensitivity(A_y, 0.0014, nu, s.params.gamma).delta_F, 1.0, 0.01);
}

TEST(AcResponse, TauScanPeaksWhereFilterOracleDoes) {
  const SimulationSettings s;
  const double b = 5.75e-6;
  const auto tau = linspace(0.3e-6, 1.2e-6, 91);
  const ScanResult r =
      ac_response_tau_scan(tau, b, ReadoutPhase::PlusMinusY, Mode::Duplex, s, 0.6e-6);
  const double nu = r.fit_value("nu");
  for (double v : r.column("baseline")) EXPECT_NEAR(v, 0.0, 1e-9);

  // Instantaneous-pulse oracle: phase from the two free intervals with
  // opposite sign, pulses of finite length only shifting the windows.
  const double t90 = 25e-9, t180 = 50e-9;
  auto cosint = [&](double t1, double t2) {
    return (std::cos(kTwoPi * nu * t1) - std::cos(kTwoPi * nu * t2)) / (kTwoPi * nu);
  };
  std::vector<double> oracle;
  for (double t : tau) {
    const double phi = s.params.gamma * b *
                       (cosint(t90, t90 + t) - cosint(t90 + t + t180, t90 + 2 * t + t180));
    oracle.push_back(std::abs(std::sin(phi)) * std::exp(-2.0 * t / s.params.T2));
  }
  const auto& F = r.column("F");
  std::vector<double> mag;
  for (double v : F) mag.push_back(std::abs(v));
  const auto sim_peak = std::max_element(mag.begin(), mag.end()) - mag.begin();
  const auto ora_peak = std::max_element(oracle.begin(), oracle.end()) - oracle.begin();
  EXPECT_LE(std::abs(sim_peak - ora_peak), 1);
}

TEST(Sensitivity, ReproducesTableArithmetic) {
  const QuartetParams p;
  const double nu = 769.23e3;
  // A that yields a given delta_F in %/uT.
  auto A_for = [&](double dF_pct_per_uT) { return dF_pct_per_uT * 1e4 * kPi * nu / (2 * p.gamma); };
  const SensitivityReport duplex = sensitivity(A_for(0.0998), 0.00136, nu, p.gamma);
  EXPECT_NEAR(duplex.eta * 1e6, 0.136 / 0.0998, 1e-9);
  EXPECT_NEAR(duplex.eta * 1e6, 1.36, 0.01);
  const SensitivityReport simplex = sensitivity(A_for(0.0524), 0.00148, nu, p.gamma);
  EXPECT_NEAR(simplex.eta * 1e6, 2.83, 0.01);
  EXPECT_NEAR(sensitivity(A_for(0.0998), 0.00068, nu, p.gamma).eta, 0.5 * duplex.eta, 1e-15);
  EXPECT_THROW(sensitivity(0.0, 0.001, nu, p.gamma), ValidationError);
  EXPECT_THROW(sensitivity(0.01, 0.001, 0.0, p.gamma), ValidationError);
}

TEST(Sensitivity, SlopePointForXReadout) {
  const QuartetParams p;
  const double nu = 769.23e3;
  const SensitivityReport x = sensitivity(0.007, 0.0014, nu, p.gamma, Mode::Duplex,
                                          ReadoutPhase::PlusMinusX);
  // At this field 2 phi = pi/2, where cos(2 phi) is steepest.
  EXPECT_NEAR(2.0 * accumulated_phase(x.slope_point_b, nu, p.gamma), kPi / 2, 1e-12);
  EXPECT_EQ(sensitivity(0.007, 0.0014, nu, p.gamma).slope_point_b, 0.0);
}

TEST(MinDetectableField, ScalesAsInverseSqrt) {
  const std::vector<double> T{1.0, 100.0};
  const auto dB = min_detectable_field(1.36e-6, T);
  EXPECT_NEAR(dB[1] * 1e6, 0.136, 1e-12);
  EXPECT_DOUBLE_EQ(dB[0], 1.36e-6);
}

TEST(MonteCarlo, AgreesWithAnalyticEta) {
  const QuartetParams p;
  const double nu = 769.23e3, A = 0.0077, sigma = 0.00144;
  const double eta = sensitivity(A, sigma, nu, p.gamma).eta;
  for (double T : {1.0, 10.0, 100.0}) {
    const double mc = monte_carlo_min_detectable_field(A, sigma, nu, p.gamma, T, 4000, 11);
    EXPECT_NEAR(mc / (eta / std::sqrt(T)), 1.0, 0.05) << "T = " << T;
  }
  EXPECT_EQ(monte_carlo_min_detectable_field(A, sigma, nu, p.gamma, 1.0, 500, 3),
            monte_carlo_min_detectable_field(A, sigma, nu, p.gamma, 1.0, 500, 3));
}

TEST(CwSpectrum, LinePositionsAndWidths) {
  QuartetParams p;
  const double lw = 10e6;
  const std::vector<double> f{70e6, 75e6, 1219.104e6, 1359.104e6, 1364.104e6, 700e6};
  const auto on = cw_spectrum(p, f, lw);
  auto lorentz = [&](double x, double c) {
    return 1.0 / (1.0 + 4.0 * (x - c) * (x - c) / (lw * lw));
  };
  for (std::size_t i = 2; i < f.size(); ++i)
    EXPECT_NEAR(on[i], lorentz(f[i], 1219.104e6) + lorentz(f[i], 1359.104e6), 1e-9);
  EXPECT_NEAR(on[3], 1.0, 2e-3);
  EXPECT_NEAR(on[4], 0.5, 2e-3);
  p.B0 = 0.0;
  const auto zero = cw_spectrum(p, f, lw);
  EXPECT_NEAR(zero[0], 2.0, 1e-12);
  EXPECT_NEAR(zero[1], 1.0, 1e-12);
}

TEST(CwSpectrum, IntegratedWeightIndependentOfField) {
  QuartetParams p;
  const auto f = linspace(-2e9, 4e9, 600001);
  auto area = [&](const QuartetParams& q) {
    double sum = 0.0;
    for (double v : cw_spectrum(q, f, 10e6)) sum += v;
    return sum;
  };
  const double with_field = area(p);
  p.B0 = 0.0;
  EXPECT_NEAR(with_field / area(p), 1.0, 1e-3);
}

TEST(ScanResult, CsvLayoutAndValidation) {
  ScanResult r;
  r.axis_name = "x";
  r.axis = {0.0, 1.0};
  r.add_column("y", {2.0, 3.5});
  r.add_fit("k", 1.5, 0.25);
  r.add_metadata("mode", "duplex");
  EXPECT_THROW(r.add_column("bad", {1.0}), ValidationError);
  EXPECT_THROW((void)r.column("missing"), ValidationError);
  std::istringstream in(to_csv(r));
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0], "# mode: duplex");
  EXPECT_EQ(lines[1], "# fit k = 1.5 +- 0.25");
  EXPECT_EQ(lines[2], "x,y");
  EXPECT_EQ(lines[3], "0,2");
  EXPECT_EQ(lines[4], "1,3.5");
}

TEST(Spacing, LinspaceAndLogspaceHitEndpoints) {
  const auto l = linspace(0.1, 0.7, 7);
  EXPECT_EQ(l.front(), 0.1);
  EXPECT_EQ(l.back(), 0.7);
  const auto g = logspace(1.0, 100.0, 3);
  EXPECT_EQ(g.front(), 1.0);
  EXPECT_NEAR(g[1], 10.0, 1e-12);
  EXPECT_EQ(g.back(), 100.0);
  EXPECT_EQ(linspace(2.0, 5.0, 1), std::vector<double>{2.0});
}

}  // namespace
}  // namespace quartet
