#include "quartet/dynamics.hpp"
#include "quartet/photophysics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

namespace quartet {
namespace {

using namespace std::complex_literals;
constexpr double kPi = std::numbers::pi;
const double kOmega1 = kTwoPi * 10e6;

DensityMatrix4 random_state(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Matrix4cd a;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = {g(rng), g(rng)};
  Matrix4c rho = a * a.adjoint();
  rho /= rho.trace();
  return DensityMatrix4(rho);
}

// |psi> = (|+3/2> + |+1/2>)/sqrt(2): + qubit along +x.
DensityMatrix4 plus_x_state() {
  Eigen::Vector4cd psi(1.0, 1.0, 0.0, 0.0);
  psi /= std::sqrt(2.0);
  return DensityMatrix4(psi * psi.adjoint());
}

TEST(DensityMatrix, FromPopulationsAndValidate) {
  const DensityMatrix4 rho = DensityMatrix4::from_populations(0.1, 0.2, 0.3, 0.4);
  EXPECT_NEAR(rho.trace(), 1.0, 1e-15);
  EXPECT_NEAR(rho.population(3), 0.4, 1e-15);
  EXPECT_NO_THROW(rho.validate());
  EXPECT_THROW(DensityMatrix4::from_populations(0.5, 0.5, 0.5, 0.0).validate(), ValidationError);
  EXPECT_THROW(DensityMatrix4::from_populations(1.2, -0.2, 0.0, 0.0).validate(), ValidationError);
}

TEST(Bloch, InitializedBlocksArePolarizedAlongZ) {
  const DensityMatrix4 rho = initialize();
  const BlochVector plus = bloch_vector(rho, Target::Plus);
  const BlochVector minus = bloch_vector(rho, Target::Minus);
  // + block: z = p(+3/2) - p(+1/2). - block Pauli +z is |-1/2>.
  EXPECT_DOUBLE_EQ(plus.z, -1.0);
  EXPECT_DOUBLE_EQ(minus.z, 1.0);
  EXPECT_DOUBLE_EQ(plus.x, 0.0);
  EXPECT_DOUBLE_EQ(minus.y, 0.0);
}

TEST(BlockPropagation, PiPulseInvertsBothBlocks) {
  const BlockDrive pi{kOmega1, 0.0, 0.0, 0.0};
  const DensityMatrix4 out = propagate_blocks(initialize(), pi, pi, kPi / kOmega1);
  EXPECT_NEAR(out.population(0), 0.5, 1e-12);
  EXPECT_NEAR(out.population(1), 0.0, 1e-12);
  EXPECT_NEAR(out.population(2), 0.0, 1e-12);
  EXPECT_NEAR(out.population(3), 0.5, 1e-12);
}

TEST(BlockPropagation, HalfPiAboutXTakesMinusZToPlusY) {
  const DensityMatrix4 out =
      propagate_block(initialize(), Target::Plus, kOmega1, 0.0, 0.0, 0.5 * kPi / kOmega1);
  const BlochVector v = bloch_vector(out, Target::Plus);
  EXPECT_NEAR(v.x, 0.0, 1e-12);
  EXPECT_NEAR(v.y, 1.0, 1e-12);
  EXPECT_NEAR(v.z, 0.0, 1e-12);
  // Untouched block.
  EXPECT_NEAR(bloch_vector(out, Target::Minus).z, 1.0, 1e-12);
}

TEST(BlockPropagation, ZeroDurationIsIdentity) {
  std::mt19937_64 rng(3);
  const DensityMatrix4 rho = random_state(rng);
  const DensityMatrix4 out = propagate_block(rho, Target::Minus, kOmega1, 0.3, 1e6, 0.0);
  EXPECT_LT((out.matrix() - rho.matrix()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(BlockPropagation, UnitaryIsSpecialUnitary) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const BlockDrive d{kOmega1 * std::abs(u(rng)), 3.0 * u(rng), 1e7 * u(rng), 0.0};
    const Matrix2c U = block_unitary(d, 1e-7 * std::abs(u(rng)));
    EXPECT_LT((U * U.adjoint() - Matrix2c::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(std::abs(U.determinant() - 1.0), 0.0, 1e-12);
  }
}

TEST(BlockPropagation, PreservesTraceHermiticityAndPurity) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const DensityMatrix4 rho = random_state(rng);
    const BlockDrive a{kOmega1 * std::abs(u(rng)), 3.0 * u(rng), 1e7 * u(rng), 1e7 * u(rng)};
    const BlockDrive b{kOmega1 * std::abs(u(rng)), 3.0 * u(rng), 1e7 * u(rng), 1e7 * u(rng)};
    const DensityMatrix4 out = propagate_blocks(rho, a, b, 2e-7 * std::abs(u(rng)));
    EXPECT_NO_THROW(out.validate(1e-10));
    EXPECT_NEAR(out.purity(), rho.purity(), 1e-12);
  }
}

TEST(Dephasing, DefiningProperty) {
  const DensityMatrix4 rho = plus_x_state();
  EXPECT_DOUBLE_EQ(rho(0, 1).real(), 0.5);
  const DensityMatrix4 out = apply_dephasing(rho, 2.1e-6, 2.1e-6);
  EXPECT_NEAR(out(0, 1).real(), 0.5 * std::exp(-1.0), 1e-15);
  EXPECT_NEAR(out(0, 1).real(), 0.1839, 1e-4);
  EXPECT_DOUBLE_EQ(out.population(0), 0.5);
  const DensityMatrix4 same = apply_dephasing(rho, 0.0, 2.1e-6);
  EXPECT_EQ(same.matrix(), rho.matrix());
  EXPECT_THROW(apply_dephasing(rho, 1e-6, 0.0), ValidationError);
}

TEST(Fidelity, Bounds) {
  std::mt19937_64 rng(9);
  const DensityMatrix4 a = random_state(rng);
  const DensityMatrix4 b = random_state(rng);
  EXPECT_NEAR(fidelity(a, a), 1.0, 1e-9);
  const double f = fidelity(a, b);
  EXPECT_GE(f, 0.0);
  EXPECT_LE(f, 1.0 + 1e-12);
  EXPECT_NEAR(f, fidelity(b, a), 1e-9);
  EXPECT_NEAR(fidelity(DensityMatrix4::from_populations(1, 0, 0, 0),
                       DensityMatrix4::from_populations(0, 1, 0, 0)),
              0.0, 1e-12);
}

class NumericEngine : public ::testing::Test {
 protected:
  QuartetParams params;
  Tone plus_tone() const {
    return {resonance_frequency(params, Target::Plus), kOmega1, 0.0, Target::Plus};
  }
  Tone minus_tone() const {
    return {resonance_frequency(params, Target::Minus), kOmega1, 0.0, Target::Minus};
  }
};

TEST_F(NumericEngine, AgreesWithBlockEngineForSingleTonePiPulse) {
  const Tone tone = plus_tone();
  const double t_pi = kPi / kOmega1;
  const DensityMatrix4 numeric =
      propagate_numeric(initialize(), params, {&tone, 1}, Detunings{}, t_pi);
  const DensityMatrix4 block =
      propagate_block(initialize(), Target::Plus, kOmega1, 0.0, 0.0, t_pi);
  EXPECT_GE(fidelity(numeric, block), 0.999);
}

TEST_F(NumericEngine, ConvergesWithStepSize) {
  const Tone tones[2] = {plus_tone(), minus_tone()};
  NumericOptions coarse;
  coarse.dt = 0.1e-9;
  NumericOptions fine;
  fine.dt = 0.05e-9;
  const double t = 0.5 * kPi / kOmega1;
  const DensityMatrix4 a = propagate_numeric(initialize(), params, tones, Detunings{}, t, coarse);
  const DensityMatrix4 b = propagate_numeric(initialize(), params, tones, Detunings{}, t, fine);
  EXPECT_GT(fidelity(a, b), 1.0 - 1e-10);
}

TEST_F(NumericEngine, DuplexCrossTalkLeakageIsSmall) {
  const Tone tones[2] = {plus_tone(), minus_tone()};
  const DensityMatrix4 out =
      propagate_numeric(initialize(), params, tones, Detunings{}, kPi / kOmega1);
  const double eps_plus = out.population(1);
  const double eps_minus = out.population(2);
  EXPECT_LE(eps_plus, 0.01);
  EXPECT_LE(eps_minus, 0.01);
  // The off-resonant partner tone does leave a physical residual.
  EXPECT_GT(eps_plus + eps_minus, 1e-8);
  EXPECT_NEAR(out.population(0), 0.5 - eps_plus, 1e-9);
  EXPECT_NEAR(out.population(3), 0.5 - eps_minus, 1e-9);
}

TEST_F(NumericEngine, NoTonesLeavesPopulationsAndCoherenceUnchanged) {
  std::mt19937_64 rng(2);
  const DensityMatrix4 rho = random_state(rng);
  const DensityMatrix4 out = propagate_numeric(rho, params, {}, Detunings{}, 1e-6);
  EXPECT_LT((out.matrix() - rho.matrix()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST_F(NumericEngine, ContinuousDephasingMatchesClosedForm) {
  NumericOptions opt;
  opt.T2 = 2.1e-6;
  const DensityMatrix4 out = propagate_numeric(plus_x_state(), params, {}, Detunings{}, 2.1e-6, opt);
  EXPECT_NEAR(std::abs(out(0, 1)), 0.5 * std::exp(-1.0), 1e-12);
}

TEST_F(NumericEngine, TimeDependentDetuningAccumulatesPhase) {
  // Sz-linear detuning delta(t) = a t on a +x state: phase = a T^2 / 2.
  Detunings d;
  const double a = 1e13;  // rad/s^2
  d.common_t = [a](double t) { return a * t; };
  const double T = 0.2e-6;
  const DensityMatrix4 out = propagate_numeric(plus_x_state(), params, {}, d, T);
  const BlochVector v = bloch_vector(out, Target::Plus);
  EXPECT_NEAR(std::atan2(v.y, v.x), 0.5 * a * T * T, 1e-9);
}

TEST_F(NumericEngine, RejectsTooCoarseStep) {
  const Tone tone = plus_tone();
  NumericOptions opt;
  opt.dt = 1e-9;  // 140 MHz cross-detuning needs dt <= 0.14 ns
  EXPECT_THROW(propagate_numeric(initialize(), params, {&tone, 1}, Detunings{}, 1e-8, opt),
               ValidationError);
}

TEST(Ensemble, ZeroSpreadIsSingleRun) {
  int calls = 0;
  const double v = ensemble_average(
      [&](double d) {
        ++calls;
        return 1.0 + d;
      },
      0.0, 50, 1);
  EXPECT_EQ(calls, 1);
  EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(Ensemble, DeterministicForSeed) {
  auto f = [](double d) { return std::cos(d * 1e-6); };
  const double sigma = detuning_spread_from_t2_star(1e-6);
  EXPECT_EQ(ensemble_average(f, sigma, 100, 42), ensemble_average(f, sigma, 100, 42));
  EXPECT_NE(ensemble_average(f, sigma, 100, 42), ensemble_average(f, sigma, 100, 43));
}

TEST(Ensemble, FreeInductionDecayIsGaussian) {
  // <exp(i delta t)> over N(0, sigma) = exp(-sigma^2 t^2 / 2) = exp(-(t/T2*)^2).
  const double T2s = 1e-6;
  const double sigma = detuning_spread_from_t2_star(T2s);
  EXPECT_DOUBLE_EQ(sigma, std::sqrt(2.0) / T2s);
  for (double t : {0.25e-6, 0.5e-6, 1.0e-6, 1.5e-6}) {
    const double coherence = ensemble_average(
        [&](double delta) {
          const DensityMatrix4 out =
              propagate_block(plus_x_state(), Target::Plus, 0.0, 0.0, delta, t);
          return 2.0 * out(0, 1).real();
        },
        sigma, 20000, 17);
    EXPECT_NEAR(coherence, std::exp(-(t / T2s) * (t / T2s)), 0.015) << "t = " << t;
  }
}

}  // namespace
}  // namespace quartet
