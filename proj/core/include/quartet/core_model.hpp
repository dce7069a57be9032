#pragma once

// Spin-3/2 operator algebra, the quartet parameter set and the rotating-frame
// Hamiltonians used by both propagation engines.
//
// Basis convention (repo-wide): index 0..3 = |+3/2>, |+1/2>, |-1/2>, |-3/2>.
// The + qubit is the contiguous block {0,1}, the - qubit the block {2,3}.
// Within a block the first state is the Pauli +z state.
//
// Units are SI throughout: Hz for cyclic frequencies, rad/s for angular
// frequencies, seconds, tesla.

#include <Eigen/Dense>

#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

namespace quartet {

using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Raised when a value violates a documented precondition or invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Target { Plus, Minus };

/// Index of the first (Pauli +z) basis state of a qubit block.
constexpr int block_offset(Target t) { return t == Target::Plus ? 0 : 2; }

const char* to_string(Target t);

struct QuartetParams {
  double D_over_h = 35e6;                   // Hz; zero-field line at 2*D_over_h
  double gamma = kTwoPi * 28.024e9;         // rad s^-1 T^-1
  double B0 = 46e-3;                        // T
  double chi = 0.014;                       // readout contrast coefficient
  double T2_star = 1e-6;                    // s
  double T2 = 2.1e-6;                       // s
  double sigma_F_1s = 0.0014;               // F noise in 1 s

  /// Checks the parameter invariants; throws ValidationError naming the one
  /// that fails.
  void validate() const;

  /// True when the static field is outside the level anti-crossing region
  /// (or exactly zero), i.e. the two qubit blocks are well separated.
  [[nodiscard]] bool outside_lac() const;
};

/// A single microwave tone. `rabi` is the angular Rabi frequency
/// omega1 = sqrt(3) * gamma * B1 of the targeted transition.
struct Tone {
  double frequency = 0.0;  // Hz
  double rabi = 0.0;       // rad/s
  double phase = 0.0;      // rad
  Target target = Target::Plus;

  void validate() const;
};

/// omega1 = sqrt(3) * gamma * B1 for a circularly rotating drive field.
double rabi_from_field(double gamma, double B1);

struct SpinOperators {
  Matrix4c Sx;
  Matrix4c Sy;
  Matrix4c Sz;
};

SpinOperators spin_matrices();

struct ResonancePair {
  double plus;   // Hz, transition |+3/2> <-> |+1/2>
  double minus;  // Hz, transition |-1/2> <-> |-3/2>; signed
};

ResonancePair resonance_frequencies(const QuartetParams& params);

/// Resonance of one block in Hz (signed).
double resonance_frequency(const QuartetParams& params, Target target);

struct FrameOptions {
  /// Maximum |tone frequency - targeted resonance| accepted by the frame model.
  double resonance_tolerance = 10e6;  // Hz
};

/// Rotating-frame Hamiltonian H'(t)/hbar in rad/s.
///
/// The frame is the interaction picture of the static lab Hamiltonian
/// D Sz^2 + hbar gamma B0 Sz, so each tone is static on its own block when
/// exactly resonant and oscillates at the inter-line spacing on the other
/// block. The |+1/2> <-> |-1/2> transition is excluded. `detuning_common`
/// adds delta*Sz (same sign on both blocks), `detuning_parity` adds
/// (delta/2)*Sz^2 which shifts the two block transitions by +delta and -delta.
///
/// Throws ValidationError for a tone that is not within the tolerance of its
/// targeted resonance, or whose targeted resonance is not positive.
Matrix4c rotating_frame_hamiltonian(const QuartetParams& params, std::span<const Tone> tones,
                                    double detuning_common, double detuning_parity, double t,
                                    const FrameOptions& options = {});

/// (sigma/2) . (omega1 cos phi1, omega1 sin phi1, delta_omega) in rad/s. The
/// returned 2x2 matrix lives on the block basis selected by `target`; its
/// value does not depend on the target.
Matrix2c qubit_block_hamiltonian(Target target, double omega1, double phi1, double delta_omega);

/// Pauli matrices in the block basis.
Matrix2c pauli_x();
Matrix2c pauli_y();
Matrix2c pauli_z();

}  // namespace quartet
