#include "quartet/core_model.hpp"

#include <cmath>
#include <complex>

namespace quartet {

namespace {

using namespace std::complex_literals;

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

}  // namespace

const char* to_string(Target t) { return t == Target::Plus ? "+" : "-"; }

void QuartetParams::validate() const {
  require(std::isfinite(D_over_h) && std::isfinite(gamma) && std::isfinite(B0) &&
              std::isfinite(chi) && std::isfinite(T2_star) && std::isfinite(T2) &&
              std::isfinite(sigma_F_1s),
          "quartet parameters must be finite");
  require(gamma > 0.0, "gamma > 0 violated");
  require(D_over_h > 0.0, "D_over_h > 0 violated");
  require(T2_star > 0.0, "T2_star > 0 violated");
  require(T2 >= T2_star, "T2 >= T2_star violated");
  require(chi >= 0.0, "chi >= 0 violated");
  require(sigma_F_1s >= 0.0, "sigma_F_1s >= 0 violated");
}

bool QuartetParams::outside_lac() const {
  return B0 == 0.0 || gamma * B0 / kTwoPi > 2.0 * D_over_h;
}

void Tone::validate() const {
  require(std::isfinite(frequency) && std::isfinite(rabi) && std::isfinite(phase),
          "tone fields must be finite");
  require(frequency > 0.0, "tone frequency > 0 violated");
  require(rabi >= 0.0, "tone rabi_angular_freq >= 0 violated");
}

double rabi_from_field(double gamma, double B1) { return std::sqrt(3.0) * gamma * B1; }

SpinOperators spin_matrices() {
  // <m+1|S+|m> = sqrt(s(s+1) - m(m+1)) for s = 3/2: sqrt(3), 2, sqrt(3).
  const double r3 = std::sqrt(3.0);
  Matrix4c splus = Matrix4c::Zero();
  splus(0, 1) = r3;
  splus(1, 2) = 2.0;
  splus(2, 3) = r3;
  const Matrix4c sminus = splus.adjoint();

  SpinOperators ops;
  ops.Sx = 0.5 * (splus + sminus);
  ops.Sy = -0.5i * (splus - sminus);
  ops.Sz = Matrix4c::Zero();
  ops.Sz.diagonal() << 1.5, 0.5, -0.5, -1.5;
  return ops;
}

ResonancePair resonance_frequencies(const QuartetParams& params) {
  const double larmor = params.gamma * params.B0 / kTwoPi;
  return {larmor + 2.0 * params.D_over_h, larmor - 2.0 * params.D_over_h};
}

double resonance_frequency(const QuartetParams& params, Target target) {
  const auto r = resonance_frequencies(params);
  return target == Target::Plus ? r.plus : r.minus;
}

Matrix4c rotating_frame_hamiltonian(const QuartetParams& params, std::span<const Tone> tones,
                                    double detuning_common, double detuning_parity, double t,
                                    const FrameOptions& options) {
  const auto res = resonance_frequencies(params);

  Matrix4c h = Matrix4c::Zero();
  for (int k = 0; k < 4; ++k) {
    const double m = 1.5 - k;
    h(k, k) = detuning_common * m + 0.5 * detuning_parity * m * m;
  }

  for (const Tone& tone : tones) {
    tone.validate();
    const double f_target = tone.target == Target::Plus ? res.plus : res.minus;
    if (f_target <= 0.0) {
      throw ValidationError(std::string("targeted resonance of ") + to_string(tone.target) +
                            " qubit is not positive; tone not representable in the frame");
    }
    if (std::abs(tone.frequency - f_target) > options.resonance_tolerance) {
      throw ValidationError("tone at " + std::to_string(tone.frequency) +
                            " Hz is off-resonant with its target line (" +
                            std::to_string(f_target) + " Hz)");
    }
    const std::complex<double> drive = 0.5 * tone.rabi * std::exp(-1i * tone.phase);
    const double w_tone = kTwoPi * tone.frequency;
    for (Target block : {Target::Plus, Target::Minus}) {
      const double w0 = kTwoPi * (block == Target::Plus ? res.plus : res.minus);
      const int u = block_offset(block);
      const std::complex<double> c = drive * std::exp(1i * ((w0 - w_tone) * t));
      h(u, u + 1) += c;
      h(u + 1, u) += std::conj(c);
    }
  }
  return h;
}

Matrix2c pauli_x() {
  Matrix2c m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Matrix2c pauli_y() {
  Matrix2c m;
  m << 0.0, -1i, 1i, 0.0;
  return m;
}

Matrix2c pauli_z() {
  Matrix2c m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

Matrix2c qubit_block_hamiltonian(Target /*target*/, double omega1, double phi1,
                                 double delta_omega) {
  return 0.5 * (omega1 * std::cos(phi1) * pauli_x() + omega1 * std::sin(phi1) * pauli_y() +
                delta_omega * pauli_z());
}

}  // namespace quartet
