#pragma once

// State representation and the two propagation engines.
//
// Block engine: exact 2x2 unitaries per qubit block built from the Pauli-form
// block Hamiltonian; cross-block drive terms are ignored.
// Numeric engine: fourth-order Magnus integration of the full 4x4
// rotating-frame Hamiltonian, including the off-resonant cross-talk of each
// tone on the other block.

#include "quartet/core_model.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace quartet {

class DensityMatrix4 {
 public:
  DensityMatrix4() : rho_(Matrix4c::Zero()) {}
  explicit DensityMatrix4(const Matrix4c& rho) : rho_(rho) {}

  static DensityMatrix4 from_populations(double p0, double p1, double p2, double p3);

  [[nodiscard]] const Matrix4c& matrix() const { return rho_; }
  [[nodiscard]] Matrix4c& matrix() { return rho_; }
  [[nodiscard]] std::complex<double> operator()(int i, int j) const { return rho_(i, j); }

  [[nodiscard]] double population(int i) const { return rho_(i, i).real(); }
  [[nodiscard]] double trace() const { return rho_.trace().real(); }
  [[nodiscard]] double purity() const;

  /// Hermiticity, unit trace and positivity within `tol`; throws ValidationError.
  void validate(double tol = 1e-9) const;

 private:
  Matrix4c rho_;
};

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  [[nodiscard]] double norm() const;
};

/// Bloch vector of one qubit block in its Pauli basis, normalized by the
/// block population. For the - block, +z is |-1/2>. Returns the zero vector
/// for an empty block.
BlochVector bloch_vector(const DensityMatrix4& state, Target target);

/// Uhlmann fidelity (tr sqrt(sqrt(a) b sqrt(a)))^2.
double fidelity(const DensityMatrix4& a, const DensityMatrix4& b);

/// Drive parameters of one block in Pauli form. `offset` is the block's
/// common diagonal energy (rad/s); it only affects inter-block coherences.
struct BlockDrive {
  double omega1 = 0.0;
  double phi1 = 0.0;
  double delta_omega = 0.0;
  double offset = 0.0;
};

/// exp(-i H duration) for H = (sigma/2).(omega1 cos phi1, omega1 sin phi1, delta) + offset.
Matrix2c block_unitary(const BlockDrive& drive, double duration);

/// Applies the exact block unitary to `target` and identity to the other block.
DensityMatrix4 propagate_block(const DensityMatrix4& state, Target target, double omega1,
                               double phi1, double delta_omega, double duration);

/// Evolves both blocks simultaneously for `duration`.
DensityMatrix4 propagate_blocks(const DensityMatrix4& state, const BlockDrive& plus,
                                const BlockDrive& minus, double duration);

/// Multiplies every off-diagonal element by exp(-duration / T2).
DensityMatrix4 apply_dephasing(const DensityMatrix4& state, double duration, double T2);

/// Common and parity detunings in rad/s; optional time-dependent parts are
/// added to the static values.
struct Detunings {
  double common = 0.0;
  double parity = 0.0;
  std::function<double(double)> common_t;
  std::function<double(double)> parity_t;

  [[nodiscard]] double common_at(double t) const { return common + (common_t ? common_t(t) : 0.0); }
  [[nodiscard]] double parity_at(double t) const { return parity + (parity_t ? parity_t(t) : 0.0); }
};

struct NumericOptions {
  double dt = 0.1e-9;            // s, maximum step
  double t0 = 0.0;               // s, absolute time of the segment start
  std::optional<double> T2;      // continuous dephasing when set
  FrameOptions frame;
};

/// Largest frequency scale (Hz) of the rotating-frame Hamiltonian for the
/// given tones and static detunings.
double max_frequency_scale(const QuartetParams& params, std::span<const Tone> tones,
                           const Detunings& detunings);

/// Integrates drho/dt = -i[H'(t), rho] with fourth-order Magnus steps of at
/// most `options.dt`. Throws ValidationError if dt exceeds 1/(50 * scale)
/// and std::runtime_error on non-finite entries.
DensityMatrix4 propagate_numeric(const DensityMatrix4& state, const QuartetParams& params,
                                 std::span<const Tone> tones, const Detunings& detunings,
                                 double duration, const NumericOptions& options = {});

/// Mean of `run(delta)` over `n_samples` Gaussian draws delta ~ N(0, sigma).
/// sigma == 0 evaluates `run(0)` once. Deterministic for a fixed seed; the
/// reduction is a fixed-order sum.
std::vector<double> ensemble_average(const std::function<std::vector<double>(double)>& run,
                                     double sigma, std::size_t n_samples, std::uint64_t seed);

double ensemble_average(const std::function<double(double)>& run, double sigma,
                        std::size_t n_samples, std::uint64_t seed);

/// Gaussian quasi-static detuning spread corresponding to T2*: sqrt(2) / T2*.
double detuning_spread_from_t2_star(double T2_star);

}  // namespace quartet
