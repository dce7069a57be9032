#include "quartet/sequence.hpp"

#include <cmath>
#include <complex>
#include <string>

namespace quartet {

namespace {

using namespace std::complex_literals;

const Tone* tone_for(const std::vector<Tone>& tones, Target target) {
  for (const Tone& t : tones)
    if (t.target == target) return &t;
  return nullptr;
}

Tone make_tone(const QuartetParams& params, Target target, double omega1, double axis_phase) {
  const double mirror = target == Target::Minus ? kMirroredPhase : 0.0;
  return Tone{resonance_frequency(params, target), omega1, axis_phase + mirror, target};
}

// Tones for a pulse about the given axes. Each block receives its own axis
// phase before the mirrored convention is applied.
std::vector<Tone> tones_for(Mode mode, const QuartetParams& params, double omega1,
                            double plus_axis, double minus_axis) {
  std::vector<Tone> tones;
  if (drives(mode, Target::Plus)) tones.push_back(make_tone(params, Target::Plus, omega1, plus_axis));
  if (drives(mode, Target::Minus))
    tones.push_back(make_tone(params, Target::Minus, omega1, minus_axis));
  return tones;
}

struct StaticDetunings {
  double common;
  double parity;
};

// Exact evolution under the diagonal (drive-free) Hamiltonian over [t, t + T],
// with t measured from the sequence start.
DensityMatrix4 free_evolution(const DensityMatrix4& state, const QuartetParams& params,
                              const std::optional<AcField>& ac, double t_ref,
                              StaticDetunings det, double t, double duration,
                              std::optional<double> T2) {
  double theta_c = det.common * duration;
  double theta_p = det.parity * duration;
  if (ac) {
    const double phase = params.gamma * ac->integral(t - t_ref, t + duration - t_ref);
    (ac->parity == Parity::Magnetic ? theta_c : theta_p) += phase;
  }
  Matrix4c rho = state.matrix();
  Eigen::Vector4cd u;
  for (int k = 0; k < 4; ++k) {
    const double m = 1.5 - k;
    u(k) = std::exp(-1i * (theta_c * m + 0.5 * theta_p * m * m));
  }
  rho = u.asDiagonal() * rho * u.conjugate().asDiagonal();
  DensityMatrix4 out(rho);
  return T2 ? apply_dephasing(out, duration, *T2) : out;
}

// Block-engine pulse. Dephasing and the AC field are applied by splitting the
// pulse into substeps; the field enters each substep as its mean detuning.
DensityMatrix4 block_pulse(const DensityMatrix4& state, const QuartetParams& params,
                           const std::vector<Tone>& tones, StaticDetunings det,
                           const std::optional<AcField>& ac, double t_ref, double t_start,
                           double duration, std::optional<double> T2, double substep) {
  struct BlockSetup {
    double omega1 = 0.0;
    double phase = 0.0;
    double tone_detuning = 0.0;  // omega0 - omega_tone
    double delta = 0.0;
    double offset = 0.0;
  };
  auto setup = [&](Target target, StaticDetunings det) {
    BlockSetup s;
    const double sign = target == Target::Plus ? 1.0 : -1.0;
    s.delta = det.common + sign * det.parity;
    s.offset = sign * det.common + 0.625 * det.parity;
    if (const Tone* tone = tone_for(tones, target)) {
      s.omega1 = tone->rabi;
      s.phase = tone->phase;
      s.tone_detuning = kTwoPi * (resonance_frequency(params, target) - tone->frequency);
    }
    return s;
  };

  // A detuned tone is handled in a frame co-rotating with it for each step.
  auto step_unitary = [](const BlockSetup& s, double t0, double h) {
    const BlockDrive drive{s.omega1, s.phase - s.tone_detuning * t0, s.delta + s.tone_detuning,
                           s.offset};
    Matrix2c back = Matrix2c::Zero();
    back(0, 0) = std::exp(0.5i * s.tone_detuning * h);
    back(1, 1) = std::exp(-0.5i * s.tone_detuning * h);
    return Matrix2c(back * block_unitary(drive, h));
  };

  const bool split = T2.has_value() || (ac && ac->amplitude > 0.0);
  const long steps = split ? std::max(1L, static_cast<long>(std::ceil(duration / substep - 1e-9))) : 1L;
  const double h = duration / static_cast<double>(steps);
  Matrix4c rho = state.matrix();
  for (long n = 0; n < steps; ++n) {
    const double t0 = t_start + static_cast<double>(n) * h;
    StaticDetunings step_det = det;
    if (ac && h > 0.0) {
      const double mean = params.gamma * ac->integral(t0 - t_ref, t0 + h - t_ref) / h;
      (ac->parity == Parity::Magnetic ? step_det.common : step_det.parity) += mean;
    }
    const BlockSetup plus = setup(Target::Plus, step_det);
    const BlockSetup minus = setup(Target::Minus, step_det);
    Matrix4c u = Matrix4c::Zero();
    u.block<2, 2>(0, 0) = step_unitary(plus, t0, h);
    u.block<2, 2>(2, 2) = step_unitary(minus, t0, h);
    if (T2) rho = apply_dephasing(DensityMatrix4(rho), 0.5 * h, *T2).matrix();
    rho = u * rho * u.adjoint();
    if (T2) rho = apply_dephasing(DensityMatrix4(rho), 0.5 * h, *T2).matrix();
  }
  return DensityMatrix4(rho);
}

}  // namespace

PulseElement PulseElement::laser(double duration) { return {PulseKind::Laser, duration, {}}; }
PulseElement PulseElement::delay(double duration) { return {PulseKind::Delay, duration, {}}; }
PulseElement PulseElement::mw(double duration, std::vector<Tone> tones) {
  return {PulseKind::Mw, duration, std::move(tones)};
}

void PulseElement::validate() const {
  if (!(duration >= 0.0) || !std::isfinite(duration))
    throw ValidationError("pulse element duration >= 0 violated");
  if (kind != PulseKind::Mw) {
    if (!tones.empty()) throw ValidationError("only mw elements may carry tones");
    return;
  }
  if (tones.empty() || tones.size() > 2) throw ValidationError("mw element must carry 1-2 tones");
  for (const Tone& t : tones) t.validate();
  if (tones.size() == 2 && tones[0].target == tones[1].target)
    throw ValidationError("mw element has duplicate tone targets");
}

bool PulseElement::operator==(const PulseElement& o) const {
  if (kind != o.kind || duration != o.duration || tones.size() != o.tones.size()) return false;
  for (std::size_t i = 0; i < tones.size(); ++i) {
    const Tone& a = tones[i];
    const Tone& b = o.tones[i];
    if (a.frequency != b.frequency || a.rabi != b.rabi || a.phase != b.phase ||
        a.target != b.target)
      return false;
  }
  return true;
}

void PulseSequence::validate(bool experiment) const {
  if (repetitions < 1) throw ValidationError("sequence repetitions >= 1 violated");
  for (const auto& e : elements) e.validate();
  if (experiment) {
    if (elements.empty() || elements.front().kind != PulseKind::Laser ||
        elements.back().kind != PulseKind::Laser)
      throw ValidationError("experiment sequence must begin and end with a laser element");
  }
}

double PulseSequence::total_duration() const {
  double t = 0.0;
  for (const auto& e : elements) t += e.duration;
  return t;
}

double PulseSequence::first_mw_start() const {
  double t = 0.0;
  for (const auto& e : elements) {
    if (e.kind == PulseKind::Mw) return t;
    t += e.duration;
  }
  return 0.0;
}

bool PulseSequence::operator==(const PulseSequence& o) const {
  return repetitions == o.repetitions && elements == o.elements;
}

void AcField::validate() const {
  if (!(amplitude >= 0.0)) throw ValidationError("AC field amplitude >= 0 violated");
  if (!(frequency > 0.0)) throw ValidationError("AC field frequency > 0 violated");
  if (!std::isfinite(phase)) throw ValidationError("AC field phase must be finite");
}

double AcField::value(double t) const {
  return amplitude * std::sin(kTwoPi * frequency * t + phase);
}

double AcField::integral(double t1, double t2) const {
  const double w = kTwoPi * frequency;
  return amplitude / w * (std::cos(w * t1 + phase) - std::cos(w * t2 + phase));
}

const char* to_string(Mode m) {
  switch (m) {
    case Mode::SimplexPlus: return "simplex+";
    case Mode::SimplexMinus: return "simplex-";
    case Mode::Duplex: return "duplex";
  }
  return "?";
}

const char* to_string(ReadoutPhase r) {
  switch (r) {
    case ReadoutPhase::PlusMinusX: return "x";
    case ReadoutPhase::PlusMinusY: return "y";
    case ReadoutPhase::CommonPlusY: return "commony";
  }
  return "?";
}

const char* to_string(Engine e) { return e == Engine::Block ? "block" : "numeric"; }
const char* to_string(Parity p) { return p == Parity::Magnetic ? "magnetic" : "even"; }

Mode parse_mode(std::string_view s) {
  if (s == "simplex+") return Mode::SimplexPlus;
  if (s == "simplex-") return Mode::SimplexMinus;
  if (s == "duplex") return Mode::Duplex;
  throw ValidationError("unknown mode '" + std::string(s) + "' (simplex+|simplex-|duplex)");
}

ReadoutPhase parse_readout(std::string_view s) {
  if (s == "x") return ReadoutPhase::PlusMinusX;
  if (s == "y") return ReadoutPhase::PlusMinusY;
  if (s == "commony") return ReadoutPhase::CommonPlusY;
  throw ValidationError("unknown readout '" + std::string(s) + "' (x|y|commony)");
}

Engine parse_engine(std::string_view s) {
  if (s == "block") return Engine::Block;
  if (s == "numeric") return Engine::Numeric;
  throw ValidationError("unknown engine '" + std::string(s) + "' (block|numeric)");
}

Parity parse_parity(std::string_view s) {
  if (s == "magnetic") return Parity::Magnetic;
  if (s == "even") return Parity::EvenOrder;
  throw ValidationError("unknown parity '" + std::string(s) + "' (magnetic|even)");
}

bool drives(Mode mode, Target target) {
  if (mode == Mode::Duplex) return true;
  return (mode == Mode::SimplexPlus) == (target == Target::Plus);
}

double duration_for_angle(double theta, double omega1) {
  if (!(omega1 > 0.0)) throw ValidationError("duration_for_angle: omega1 > 0 violated");
  return theta / omega1;
}

PulseSequence build_rabi_sequence(double t_mw, Mode mode, const QuartetParams& params,
                                  const SequenceTiming& timing) {
  if (!(t_mw >= 0.0)) throw ValidationError("t_mw >= 0 violated");
  PulseSequence seq;
  seq.elements = {PulseElement::laser(timing.laser_init),
                  PulseElement::delay(timing.pre_mw_delay),
                  PulseElement::mw(t_mw, tones_for(mode, params, timing.omega1, 0.0, 0.0)),
                  PulseElement::laser(timing.laser_readout)};
  return seq;
}

PulseSequence build_echo_sequence(double tau_prime, double tau, Mode mode, ReadoutPhase readout,
                                  Acquisition acquisition, const QuartetParams& params,
                                  const SequenceTiming& timing) {
  if (!(tau_prime >= 0.0) || !(tau >= 0.0)) throw ValidationError("tau, tau' >= 0 violated");
  const double half_pi = duration_for_angle(std::numbers::pi / 2, timing.omega1);
  const double pi = duration_for_angle(std::numbers::pi, timing.omega1);
  const double flip = acquisition == Acquisition::B ? std::numbers::pi : 0.0;

  double plus_axis = 0.0;
  double minus_axis = 0.0;
  switch (readout) {
    case ReadoutPhase::PlusMinusX:
      plus_axis = std::numbers::pi + flip;
      minus_axis = plus_axis;
      break;
    case ReadoutPhase::PlusMinusY:
      plus_axis = std::numbers::pi / 2 + flip;
      minus_axis = plus_axis;
      break;
    case ReadoutPhase::CommonPlusY:
      // Same physical axis on both qubits: undo the mirror on the - tone.
      plus_axis = std::numbers::pi / 2 + flip;
      minus_axis = plus_axis - kMirroredPhase;
      break;
  }

  const double w1 = timing.omega1;
  PulseSequence seq;
  seq.elements = {PulseElement::laser(timing.laser_init),
                  PulseElement::delay(timing.pre_mw_delay),
                  PulseElement::mw(half_pi, tones_for(mode, params, w1, 0.0, 0.0)),
                  PulseElement::delay(tau_prime),
                  PulseElement::mw(pi, tones_for(mode, params, w1, 0.0, 0.0)),
                  PulseElement::delay(tau),
                  PulseElement::mw(half_pi, tones_for(mode, params, w1, plus_axis, minus_axis)),
                  PulseElement::laser(timing.laser_readout)};
  return seq;
}

double synchronized_ac_frequency(double tau, double t_pi) {
  if (!(tau + t_pi > 0.0)) throw ValidationError("tau + t_pi > 0 violated");
  return 1.0 / (2.0 * (tau + t_pi));
}

RunResult run_sequence(const PulseSequence& seq, const std::optional<AcField>& ac,
                       const QuartetParams& params, const RunOptions& options) {
  params.validate();
  seq.validate(true);
  if (ac) ac->validate();
  if (options.engine == Engine::Block && !params.outside_lac()) {
    throw ValidationError("block engine requires B0 outside the level anti-crossing region");
  }

  const ReadoutModel readout{params.chi, params.sigma_F_1s};
  const std::optional<double> T2 = options.dephasing ? std::optional<double>(params.T2)
                                                     : std::nullopt;
  const StaticDetunings det{options.static_common, options.static_parity};
  const double t_ref = seq.first_mw_start();

  Detunings numeric_det{options.static_common, options.static_parity, {}, {}};
  if (ac) {
    auto shift = [field = *ac, gamma = params.gamma, t_ref](double t) {
      return gamma * field.value(t - t_ref);
    };
    (ac->parity == Parity::Magnetic ? numeric_det.common_t : numeric_det.parity_t) = shift;
  }

  RunResult result;
  DensityMatrix4 state = initialize();
  double t = 0.0;
  for (const PulseElement& el : seq.elements) {
    switch (el.kind) {
      case PulseKind::Laser:
        result.laser_readouts.push_back(fluorescence(state, readout));
        state = initialize();
        break;
      case PulseKind::Delay:
        state = free_evolution(state, params, ac, t_ref, det, t, el.duration, T2);
        break;
      case PulseKind::Mw:
        if (options.engine == Engine::Block) {
          for (const Tone& tone : el.tones) {
            const double f = resonance_frequency(params, tone.target);
            if (f <= 0.0 || std::abs(tone.frequency - f) > options.frame.resonance_tolerance)
              throw ValidationError("tone off-resonant with its target line");
          }
          if (options.detuning_during_pulses) {
            state = block_pulse(state, params, el.tones, det, ac, t_ref, t, el.duration, T2,
                                options.pulse_substep);
          } else {
            state = block_pulse(state, params, el.tones, {0.0, 0.0}, std::nullopt, t_ref, t,
                                el.duration, T2, options.pulse_substep);
          }
        } else {
          NumericOptions no;
          no.dt = options.numeric_dt;
          no.t0 = t;
          no.T2 = T2;
          no.frame = options.frame;
          state = propagate_numeric(state, params, el.tones, numeric_det, el.duration, no);
        }
        break;
    }
    t += el.duration;
    if (options.record_states) result.states.push_back(state);
  }
  result.intensity = result.laser_readouts.back();
  return result;
}

}  // namespace quartet
