#include "quartet/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <string>

namespace quartet {

namespace {

using namespace std::complex_literals;

Matrix4c hermitian_sqrt(const Matrix4c& m) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(m);
  Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix4c unitary_from_hermitian(const Matrix4c& k) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(k);
  Eigen::Vector4cd phases;
  for (int i = 0; i < 4; ++i) phases(i) = std::exp(-1i * es.eigenvalues()(i));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

void dephase_in_place(Matrix4c& rho, double factor) {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) rho(i, j) *= factor;
}

}  // namespace

DensityMatrix4 DensityMatrix4::from_populations(double p0, double p1, double p2, double p3) {
  Matrix4c m = Matrix4c::Zero();
  m.diagonal() << p0, p1, p2, p3;
  return DensityMatrix4(m);
}

double DensityMatrix4::purity() const { return (rho_ * rho_).trace().real(); }

void DensityMatrix4::validate(double tol) const {
  if (!rho_.allFinite()) throw ValidationError("density matrix has non-finite entries");
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > tol)
    throw ValidationError("density matrix is not Hermitian");
  if (std::abs(rho_.trace() - 1.0) > tol) throw ValidationError("density matrix trace != 1");
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(0.5 * (rho_ + rho_.adjoint()),
                                             Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol)
    throw ValidationError("density matrix has a negative eigenvalue");
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

BlochVector bloch_vector(const DensityMatrix4& state, Target target) {
  const int u = block_offset(target);
  const double p = state.population(u) + state.population(u + 1);
  if (p <= 0.0) return {};
  const std::complex<double> c = state(u, u + 1);
  return {2.0 * c.real() / p, -2.0 * c.imag() / p,
          (state.population(u) - state.population(u + 1)) / p};
}

double fidelity(const DensityMatrix4& a, const DensityMatrix4& b) {
  const Matrix4c sa = hermitian_sqrt(a.matrix());
  Matrix4c inner = sa * b.matrix() * sa;
  inner = 0.5 * (inner + inner.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(inner, Eigen::EigenvaluesOnly);
  const double tr = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return tr * tr;
}

Matrix2c block_unitary(const BlockDrive& drive, double duration) {
  const double ax = drive.omega1 * std::cos(drive.phi1);
  const double ay = drive.omega1 * std::sin(drive.phi1);
  const double az = drive.delta_omega;
  const double norm = std::sqrt(ax * ax + ay * ay + az * az);
  const double half = 0.5 * norm * duration;

  Matrix2c u = std::cos(half) * Matrix2c::Identity();
  if (norm > 0.0) {
    const Matrix2c n_sigma = (ax * pauli_x() + ay * pauli_y() + az * pauli_z()) / norm;
    u -= 1i * std::sin(half) * n_sigma;
  }
  return std::exp(-1i * (drive.offset * duration)) * u;
}

DensityMatrix4 propagate_blocks(const DensityMatrix4& state, const BlockDrive& plus,
                                const BlockDrive& minus, double duration) {
  if (duration < 0.0) throw ValidationError("duration >= 0 violated");
  Matrix4c u = Matrix4c::Zero();
  u.block<2, 2>(0, 0) = block_unitary(plus, duration);
  u.block<2, 2>(2, 2) = block_unitary(minus, duration);
  return DensityMatrix4(u * state.matrix() * u.adjoint());
}

DensityMatrix4 propagate_block(const DensityMatrix4& state, Target target, double omega1,
                               double phi1, double delta_omega, double duration) {
  const BlockDrive driven{omega1, phi1, delta_omega, 0.0};
  const BlockDrive idle{};
  return target == Target::Plus ? propagate_blocks(state, driven, idle, duration)
                                : propagate_blocks(state, idle, driven, duration);
}

DensityMatrix4 apply_dephasing(const DensityMatrix4& state, double duration, double T2) {
  if (!(T2 > 0.0)) throw ValidationError("T2 > 0 violated");
  Matrix4c rho = state.matrix();
  dephase_in_place(rho, std::exp(-duration / T2));
  return DensityMatrix4(rho);
}

double max_frequency_scale(const QuartetParams& params, std::span<const Tone> tones,
                           const Detunings& detunings) {
  const auto res = resonance_frequencies(params);
  double scale = 0.0;
  for (const Tone& tone : tones) {
    scale = std::max(scale, tone.rabi / kTwoPi);
    scale = std::max(scale, std::abs(res.plus - tone.frequency));
    scale = std::max(scale, std::abs(res.minus - tone.frequency));
  }
  scale = std::max(scale, 1.5 * std::abs(detunings.common) / kTwoPi);
  scale = std::max(scale, std::abs(detunings.parity) / kTwoPi);
  return scale;
}

DensityMatrix4 propagate_numeric(const DensityMatrix4& state, const QuartetParams& params,
                                 std::span<const Tone> tones, const Detunings& detunings,
                                 double duration, const NumericOptions& options) {
  if (duration < 0.0) throw ValidationError("duration >= 0 violated");
  if (!(options.dt > 0.0)) throw ValidationError("dt > 0 violated");
  const double scale = max_frequency_scale(params, tones, detunings);
  if (scale > 0.0 && options.dt > 1.0 / (50.0 * scale)) {
    throw ValidationError("step size " + std::to_string(options.dt) +
                          " s exceeds 1/(50 * " + std::to_string(scale) + " Hz)");
  }
  if (duration == 0.0) return state;

  const auto steps = static_cast<long>(std::ceil(duration / options.dt - 1e-9));
  const double h = duration / static_cast<double>(std::max(1L, steps));
  const double c1 = 0.5 - std::sqrt(3.0) / 6.0;
  const double c2 = 0.5 + std::sqrt(3.0) / 6.0;
  const double comm_weight = std::sqrt(3.0) / 12.0 * h * h;
  const double half_decay = options.T2 ? std::exp(-0.5 * h / *options.T2) : 1.0;

  auto hamiltonian = [&](double t) {
    return rotating_frame_hamiltonian(params, tones, detunings.common_at(t),
                                      detunings.parity_at(t), t, options.frame);
  };

  Matrix4c rho = state.matrix();
  for (long n = 0; n < std::max(1L, steps); ++n) {
    const double t = options.t0 + static_cast<double>(n) * h;
    const Matrix4c h1 = hamiltonian(t + c1 * h);
    const Matrix4c h2 = hamiltonian(t + c2 * h);
    Matrix4c k = 0.5 * h * (h1 + h2) - 1i * comm_weight * (h2 * h1 - h1 * h2);
    k = 0.5 * (k + k.adjoint());
    const Matrix4c u = unitary_from_hermitian(k);

    if (options.T2) dephase_in_place(rho, half_decay);
    rho = u * rho * u.adjoint();
    if (options.T2) dephase_in_place(rho, half_decay);

    if (!rho.allFinite()) throw std::runtime_error("numeric propagation produced non-finite entries");
  }
  rho = 0.5 * (rho + rho.adjoint());
  return DensityMatrix4(rho);
}

std::vector<double> ensemble_average(const std::function<std::vector<double>(double)>& run,
                                     double sigma, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw ValidationError("n_samples >= 1 violated");
  if (!(sigma >= 0.0)) throw ValidationError("sigma >= 0 violated");
  if (sigma == 0.0) return run(0.0);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, sigma);
  std::vector<double> deltas(n_samples);
  for (auto& d : deltas) d = dist(rng);

  std::vector<double> sum;
  for (double delta : deltas) {
    const std::vector<double> sample = run(delta);
    if (sum.empty()) sum.assign(sample.size(), 0.0);
    if (sample.size() != sum.size()) throw std::runtime_error("ensemble samples differ in length");
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += sample[i];
  }
  for (double& v : sum) v /= static_cast<double>(n_samples);
  return sum;
}

double ensemble_average(const std::function<double(double)>& run, double sigma,
                        std::size_t n_samples, std::uint64_t seed) {
  return ensemble_average([&](double d) { return std::vector<double>{run(d)}; }, sigma,
                          n_samples, seed)
      .front();
}

double detuning_spread_from_t2_star(double T2_star) {
  if (!(T2_star > 0.0)) throw ValidationError("T2_star > 0 violated");
  return std::sqrt(2.0) / T2_star;
}

}  // namespace quartet
