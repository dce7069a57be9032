#pragma once

// Declarative pulse sequences and their execution.
//
// Block engine: exact per-block rotations. Static detunings and the AC field
// act during pulses through piecewise-constant substeps (the field enters
// each substep as its mean detuning). Clearing
// RunOptions::detuning_during_pulses gives the strong-drive limit, where they
// act during free evolution only. Dephasing acts throughout, and the numeric
// engine always applies every term throughout.
//
// Timing: free intervals (tau, tau') are measured between pulse edges. An AC
// test field is referenced to the start of the first MW element, so with the
// synchronized frequency its zero crossings fall on the start of the first
// pi/2 pulse, the centre of the pi pulse and the end of the last pi/2 pulse.
//
// Phase convention (kMirroredPhase): a pulse "about axis a" rotates the +
// qubit about a and the - qubit about -a, i.e. the - tone carries an extra pi
// of phase. With it the first pi/2 takes both qubits to +y.

#include "quartet/core_model.hpp"
#include "quartet/dynamics.hpp"
#include "quartet/photophysics.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace quartet {

enum class PulseKind { Laser, Mw, Delay };

struct PulseElement {
  PulseKind kind = PulseKind::Delay;
  double duration = 0.0;  // s
  std::vector<Tone> tones;

  static PulseElement laser(double duration);
  static PulseElement delay(double duration);
  static PulseElement mw(double duration, std::vector<Tone> tones);

  void validate() const;
  bool operator==(const PulseElement&) const;
};

struct PulseSequence {
  std::vector<PulseElement> elements;
  int repetitions = 1;

  /// Element invariants plus, when `experiment` is set, laser at both ends.
  void validate(bool experiment = true) const;
  [[nodiscard]] double total_duration() const;
  /// Start time of the first MW element, or 0 when there is none.
  [[nodiscard]] double first_mw_start() const;
  bool operator==(const PulseSequence&) const;
};

enum class Parity { Magnetic, EvenOrder };

/// B(t) = amplitude * sin(2 pi frequency (t - t_ref) + phase), with t_ref the
/// start of the first MW element. The even-order channel shifts the two
/// block transitions by +gamma*B and -gamma*B.
struct AcField {
  double amplitude = 0.0;  // T
  double frequency = 1.0;  // Hz
  double phase = 0.0;      // rad
  Parity parity = Parity::Magnetic;

  void validate() const;
  [[nodiscard]] double value(double t_since_ref) const;
  /// Integral of value() over [t1, t2] (times since reference).
  [[nodiscard]] double integral(double t1, double t2) const;
};

enum class Mode { SimplexPlus, SimplexMinus, Duplex };
enum class ReadoutPhase { PlusMinusX, PlusMinusY, CommonPlusY };
/// Variant of the final pi/2 pulse; B flips its phase by pi.
enum class Acquisition { A, B };
enum class Engine { Block, Numeric };

const char* to_string(Mode m);
const char* to_string(ReadoutPhase r);
const char* to_string(Engine e);
const char* to_string(Parity p);
Mode parse_mode(std::string_view s);
ReadoutPhase parse_readout(std::string_view s);
Engine parse_engine(std::string_view s);
Parity parse_parity(std::string_view s);

/// Whether the mode drives `target`.
bool drives(Mode mode, Target target);

inline constexpr double kMirroredPhase = std::numbers::pi;

struct SequenceTiming {
  double laser_init = 0.5e-6;     // s
  double laser_readout = 0.5e-6;  // s
  double pre_mw_delay = 0.7e-6;   // s
  double omega1 = kTwoPi * 10e6;  // rad/s, matched for both tones
};

/// theta / omega1. Throws ValidationError for omega1 <= 0.
double duration_for_angle(double theta, double omega1);

PulseSequence build_rabi_sequence(double t_mw, Mode mode, const QuartetParams& params,
                                  const SequenceTiming& timing = {});

/// pi/2 - tau' - pi - tau - pi/2(readout) with the mirrored phase convention.
/// For x readout the A acquisition ends in (pi/2)_{-x} on the + qubit, which
/// returns an undisturbed echo to the bright |+-3/2> states, so F_x = +A cos.
PulseSequence build_echo_sequence(double tau_prime, double tau, Mode mode, ReadoutPhase readout,
                                  Acquisition acquisition, const QuartetParams& params,
                                  const SequenceTiming& timing = {});

/// nu = 1 / (2 (tau + t_pi)).
double synchronized_ac_frequency(double tau, double t_pi);

struct RunOptions {
  Engine engine = Engine::Block;
  double numeric_dt = 0.1e-9;       // s
  double pulse_substep = 1e-9;      // s, block-engine splitting step during pulses
  bool detuning_during_pulses = true;  // block engine only
  bool dephasing = true;
  double static_common = 0.0;       // rad/s, quasi-static detuning
  double static_parity = 0.0;       // rad/s
  bool record_states = false;
  FrameOptions frame;
};

struct RunResult {
  double intensity = 0.0;                // final laser readout
  std::vector<double> laser_readouts;    // one per laser element
  std::vector<DensityMatrix4> states;    // after each element, if recorded
};

/// Executes the sequence. Laser elements read out the current state and
/// re-initialize; MW and delay elements evolve under the selected engine.
/// Throws ValidationError for an invalid sequence or when the block engine
/// is asked to run inside the level anti-crossing region.
RunResult run_sequence(const PulseSequence& seq, const std::optional<AcField>& ac,
                       const QuartetParams& params, const RunOptions& options = {});

/// Lossless human-readable text form.
std::string to_text(const PulseSequence& seq);
/// Parses to_text() output; throws ValidationError with the offending line.
PulseSequence parse_sequence(std::string_view text);

}  // namespace quartet
