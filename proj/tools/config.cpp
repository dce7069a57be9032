#include "config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

namespace quartet::cli {

namespace {

enum class Dim { None, Time, Frequency, Angular, Field, Gyro, Ratio, Phase };

struct Unit {
  std::string_view name;
  double scale;
};

std::vector<Unit> units_for(Dim dim) {
  switch (dim) {
    case Dim::Time:
      return {{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"µs", 1e-6}, {"ns", 1e-9}};
    case Dim::Frequency:
    case Dim::Angular:
      return {{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}};
    case Dim::Field:
      return {{"T", 1.0}, {"mT", 1e-3}, {"uT", 1e-6}, {"µT", 1e-6}, {"nT", 1e-9}};
    case Dim::Gyro:
      return {{"Hz/T", 1.0}, {"kHz/T", 1e3}, {"MHz/T", 1e6}, {"GHz/T", 1e9}};
    case Dim::Ratio:
      return {{"%", 1e-2}, {"%/sqrtHz", 1e-2}, {"%/sqrt(Hz)", 1e-2}, {"%/√Hz", 1e-2}};
    case Dim::Phase:
      return {{"rad", 1.0}, {"deg", std::numbers::pi / 180.0}};
    case Dim::None:
      break;
  }
  return {};
}

// Angular quantities are written and read as cyclic values (Hz, Hz/T).
double storage_factor(Dim dim) {
  return dim == Dim::Angular || dim == Dim::Gyro ? kTwoPi : 1.0;
}

struct NumberKey {
  std::string_view name;
  Dim dim;
  std::function<double&(RunConfig&)> ref;
};

struct CountKey {
  std::string_view name;
  std::function<std::size_t&(RunConfig&)> ref;
};

struct WordKey {
  std::string_view name;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::vector<NumberKey>& number_keys() {
  static const std::vector<NumberKey> keys = {
      {"D_over_h", Dim::Frequency, [](RunConfig& c) -> double& { return c.settings.params.D_over_h; }},
      {"gamma", Dim::Gyro, [](RunConfig& c) -> double& { return c.settings.params.gamma; }},
      {"B0", Dim::Field, [](RunConfig& c) -> double& { return c.settings.params.B0; }},
      {"chi", Dim::Ratio, [](RunConfig& c) -> double& { return c.settings.params.chi; }},
      {"T2_star", Dim::Time, [](RunConfig& c) -> double& { return c.settings.params.T2_star; }},
      {"T2", Dim::Time, [](RunConfig& c) -> double& { return c.settings.params.T2; }},
      {"sigma_F", Dim::Ratio, [](RunConfig& c) -> double& { return c.settings.params.sigma_F_1s; }},
      {"omega1", Dim::Angular, [](RunConfig& c) -> double& { return c.settings.timing.omega1; }},
      {"laser_init", Dim::Time, [](RunConfig& c) -> double& { return c.settings.timing.laser_init; }},
      {"laser_readout", Dim::Time, [](RunConfig& c) -> double& { return c.settings.timing.laser_readout; }},
      {"pre_mw_delay", Dim::Time, [](RunConfig& c) -> double& { return c.settings.timing.pre_mw_delay; }},
      {"numeric_dt", Dim::Time, [](RunConfig& c) -> double& { return c.settings.run.numeric_dt; }},
      {"pulse_substep", Dim::Time, [](RunConfig& c) -> double& { return c.settings.run.pulse_substep; }},
      {"ac_phase", Dim::Phase, [](RunConfig& c) -> double& { return c.settings.ac_phase; }},
      {"integration_time", Dim::Time, [](RunConfig& c) -> double& { return c.integration_time; }},
      {"rabi_t_start", Dim::Time, [](RunConfig& c) -> double& { return c.scan.rabi_t_start; }},
      {"rabi_t_stop", Dim::Time, [](RunConfig& c) -> double& { return c.scan.rabi_t_stop; }},
      {"echo_tau_start", Dim::Time, [](RunConfig& c) -> double& { return c.scan.echo_tau_start; }},
      {"echo_tau_stop", Dim::Time, [](RunConfig& c) -> double& { return c.scan.echo_tau_stop; }},
      {"echo_tau_prime", Dim::Time, [](RunConfig& c) -> double& { return c.scan.echo_tau_prime; }},
      {"acmag_tau", Dim::Time, [](RunConfig& c) -> double& { return c.scan.acmag_tau; }},
      {"acmag_b_start", Dim::Field, [](RunConfig& c) -> double& { return c.scan.acmag_b_start; }},
      {"acmag_b_stop", Dim::Field, [](RunConfig& c) -> double& { return c.scan.acmag_b_stop; }},
      {"acmag_b", Dim::Field, [](RunConfig& c) -> double& { return c.scan.acmag_b; }},
      {"acmag_tau_start", Dim::Time, [](RunConfig& c) -> double& { return c.scan.acmag_tau_start; }},
      {"acmag_tau_stop", Dim::Time, [](RunConfig& c) -> double& { return c.scan.acmag_tau_stop; }},
      {"cw_f_start", Dim::Frequency, [](RunConfig& c) -> double& { return c.scan.cw_f_start; }},
      {"cw_f_stop", Dim::Frequency, [](RunConfig& c) -> double& { return c.scan.cw_f_stop; }},
      {"cw_linewidth", Dim::Frequency, [](RunConfig& c) -> double& { return c.scan.cw_linewidth; }},
      {"scaling_T_start", Dim::Time, [](RunConfig& c) -> double& { return c.scan.scaling_T_start; }},
      {"scaling_T_stop", Dim::Time, [](RunConfig& c) -> double& { return c.scan.scaling_T_stop; }},
  };
  return keys;
}

const std::vector<CountKey>& count_keys() {
  static const std::vector<CountKey> keys = {
      {"ensemble_samples", [](RunConfig& c) -> std::size_t& { return c.settings.ensemble_samples; }},
      {"rabi_points", [](RunConfig& c) -> std::size_t& { return c.scan.rabi_points; }},
      {"echo_points", [](RunConfig& c) -> std::size_t& { return c.scan.echo_points; }},
      {"acmag_points", [](RunConfig& c) -> std::size_t& { return c.scan.acmag_points; }},
      {"acmag_tau_points", [](RunConfig& c) -> std::size_t& { return c.scan.acmag_tau_points; }},
      {"cw_points", [](RunConfig& c) -> std::size_t& { return c.scan.cw_points; }},
      {"scaling_points", [](RunConfig& c) -> std::size_t& { return c.scan.scaling_points; }},
      {"mc_samples", [](RunConfig& c) -> std::size_t& { return c.scan.mc_samples; }},
  };
  return keys;
}

bool parse_switch(const std::string& v) {
  if (v == "on" || v == "true" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "no") return false;
  throw ValidationError("expected on|off, got '" + v + "'");
}

const std::vector<WordKey>& word_keys() {
  static const std::vector<WordKey> keys = {
      {"engine", [](RunConfig& c, const std::string& v) { c.settings.run.engine = parse_engine(v); },
       [](const RunConfig& c) -> std::string { return to_string(c.settings.run.engine); }},
      {"mode", [](RunConfig& c, const std::string& v) { c.mode = parse_mode(v); },
       [](const RunConfig& c) -> std::string { return to_string(c.mode); }},
      {"readout", [](RunConfig& c, const std::string& v) { c.readout = parse_readout(v); },
       [](const RunConfig& c) -> std::string { return to_string(c.readout); }},
      {"ac_parity", [](RunConfig& c, const std::string& v) { c.settings.ac_parity = parse_parity(v); },
       [](const RunConfig& c) -> std::string { return to_string(c.settings.ac_parity); }},
      {"dephasing", [](RunConfig& c, const std::string& v) { c.settings.run.dephasing = parse_switch(v); },
       [](const RunConfig& c) -> std::string { return c.settings.run.dephasing ? "on" : "off"; }},
      {"detuning_during_pulses",
       [](RunConfig& c, const std::string& v) {
         c.settings.run.detuning_during_pulses = parse_switch(v);
       },
       [](const RunConfig& c) -> std::string {
         return c.settings.run.detuning_during_pulses ? "on" : "off";
       }},
      {"noise", [](RunConfig& c, const std::string& v) { c.noise = parse_switch(v); },
       [](const RunConfig& c) -> std::string { return c.noise ? "on" : "off"; }},
      {"acmag_sweep",
       [](RunConfig& c, const std::string& v) {
         if (v == "b") c.scan.acmag_sweep = AcSweep::Amplitude;
         else if (v == "tau") c.scan.acmag_sweep = AcSweep::Tau;
         else throw ValidationError("unknown acmag_sweep '" + v + "' (b|tau)");
       },
       [](const RunConfig& c) -> std::string {
         return c.scan.acmag_sweep == AcSweep::Amplitude ? "b" : "tau";
       }},
      {"seed",
       [](RunConfig& c, const std::string& v) {
         std::uint64_t s = 0;
         const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), s);
         if (ec != std::errc() || p != v.data() + v.size())
           throw ValidationError("seed must be a non-negative integer");
         c.settings.seed = s;
       },
       [](const RunConfig& c) -> std::string { return std::to_string(c.settings.seed); }},
      {"out", [](RunConfig& c, const std::string& v) { c.out = v; },
       [](const RunConfig& c) -> std::string { return c.out; }},
  };
  return keys;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double parse_quantity(const std::string& value, Dim dim) {
  const char* begin = value.c_str();
  char* end = nullptr;
  const double number = std::strtod(begin, &end);
  if (end == begin) throw ConfigError("expected a number, got '" + value + "'");
  if (!std::isfinite(number)) throw ConfigError("value must be finite");
  const std::string unit = trim(end);
  double scale = 1.0;
  if (!unit.empty()) {
    bool found = false;
    for (const Unit& u : units_for(dim)) {
      if (u.name == unit) {
        scale = u.scale;
        found = true;
        break;
      }
    }
    if (!found) throw ConfigError("unit '" + unit + "' not valid here");
  }
  return number * scale * storage_factor(dim);
}

std::size_t parse_count(const std::string& value) {
  std::size_t n = 0;
  const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
  if (ec != std::errc() || p != value.data() + value.size())
    throw ConfigError("expected a non-negative integer, got '" + value + "'");
  return n;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void apply(RunConfig& config, const std::string& key, const std::string& value) {
  for (const NumberKey& k : number_keys()) {
    if (k.name == key) {
      k.ref(config) = parse_quantity(value, k.dim);
      return;
    }
  }
  for (const CountKey& k : count_keys()) {
    if (k.name == key) {
      k.ref(config) = parse_count(value);
      return;
    }
  }
  for (const WordKey& k : word_keys()) {
    if (k.name == key) {
      try {
        k.set(config, value);
      } catch (const ValidationError& e) {
        throw ConfigError(e.what());
      }
      return;
    }
  }
  throw ConfigError("unknown key '" + key + "'");
}

void require(bool ok, const char* what) {
  if (!ok) throw ValidationError(what);
}

}  // namespace

void RunConfig::validate() const {
  const QuartetParams& p = settings.params;
  p.validate();
  readout_model().validate();
  if (settings.run.engine == Engine::Block && !p.outside_lac())
    throw ValidationError(
        "block engine requires B0 = 0 or gamma B0 / 2pi > 2 D/h (outside the level anti-crossing)");
  const SequenceTiming& t = settings.timing;
  require(t.omega1 > 0.0, "omega1 > 0 violated");
  require(t.laser_init > 0.0 && t.laser_readout > 0.0, "laser durations > 0 violated");
  require(t.pre_mw_delay >= 0.0, "pre_mw_delay >= 0 violated");
  require(settings.run.numeric_dt > 0.0, "numeric_dt > 0 violated");
  require(settings.run.pulse_substep > 0.0, "pulse_substep > 0 violated");
  require(integration_time > 0.0, "integration_time > 0 violated");

  const ScanRanges& s = scan;
  require(s.rabi_t_start >= 0.0 && s.rabi_t_stop > s.rabi_t_start, "rabi range invalid");
  require(s.rabi_points >= 8, "rabi_points >= 8 violated");
  require(s.echo_tau_start >= 0.0 && s.echo_tau_stop > s.echo_tau_start, "echo range invalid");
  require(s.echo_points >= 3, "echo_points >= 3 violated");
  require(s.echo_tau_prime >= 0.0, "echo_tau_prime >= 0 violated");
  require(s.acmag_tau > 0.0, "acmag_tau > 0 violated");
  require(s.acmag_b_stop > s.acmag_b_start, "acmag b range invalid");
  require(s.acmag_points >= 2, "acmag_points >= 2 violated");
  require(s.acmag_tau_start > 0.0 && s.acmag_tau_stop > s.acmag_tau_start,
          "acmag tau range invalid");
  require(s.acmag_tau_points >= 2, "acmag_tau_points >= 2 violated");
  require(s.cw_f_stop > s.cw_f_start, "cw range invalid");
  require(s.cw_points >= 2, "cw_points >= 2 violated");
  require(s.cw_linewidth > 0.0, "cw_linewidth > 0 violated");
  require(s.scaling_T_start > 0.0 && s.scaling_T_stop >= s.scaling_T_start,
          "scaling range invalid");
  require(s.scaling_points >= 1, "scaling_points >= 1 violated");
  require(s.mc_samples >= 2, "mc_samples >= 2 violated");
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(std::string_view(content).substr(0, eq));
    const std::string value = trim(std::string_view(content).substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key or value");
    try {
      apply(base, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  base.validate();
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

std::string to_text(const RunConfig& config) {
  RunConfig copy = config;
  std::ostringstream os;
  for (const NumberKey& k : number_keys())
    os << k.name << " = " << format_double(k.ref(copy) / storage_factor(k.dim)) << '\n';
  for (const CountKey& k : count_keys()) os << k.name << " = " << k.ref(copy) << '\n';
  for (const WordKey& k : word_keys()) {
    const std::string v = k.get(config);
    if (!v.empty()) os << k.name << " = " << v << '\n';
  }
  return os.str();
}

const std::vector<Recipe>& recipes() {
  static const std::vector<Recipe> list = {
      {"fig3a", "cw", "CW spectrum with and without the static field",
       "cw_f_start = 0 MHz\ncw_f_stop = 1500 MHz\ncw_points = 1501\ncw_linewidth = 10 MHz\n"},
      {"fig3c", "rabi", "Rabi oscillation, simplex and duplex",
       "rabi_t_start = 0 ns\nrabi_t_stop = 395 ns\nrabi_points = 80\nensemble_samples = 64\n"},
      {"fig3d", "echo", "Echo tau sweep at fixed tau' = 1 us",
       "echo_tau_prime = 1 us\necho_tau_start = 0.5 us\necho_tau_stop = 1.5 us\n"
       "echo_points = 101\nensemble_samples = 64\n"},
      {"fig3e", "echo", "Echo envelope at tau' = tau",
       "echo_tau_prime = 0 s\necho_tau_start = 0.1 us\necho_tau_stop = 3 us\necho_points = 30\n"},
      {"fig4a", "acmag", "AC response versus tau, +-x readout",
       "readout = x\nacmag_sweep = tau\nacmag_b = 5.75 uT\nacmag_tau_start = 0.2 us\n"
       "acmag_tau_stop = 1.5 us\nacmag_tau_points = 66\n"},
      {"fig4b", "acmag", "AC response versus amplitude, +-x readout",
       "readout = x\nacmag_sweep = b\nacmag_tau = 0.6 us\nacmag_b_start = -20 uT\n"
       "acmag_b_stop = 20 uT\nacmag_points = 41\n"},
      {"fig4c", "acmag", "AC response versus tau, +-y readout",
       "readout = y\nacmag_sweep = tau\nacmag_b = 5.75 uT\nacmag_tau_start = 0.2 us\n"
       "acmag_tau_stop = 1.5 us\nacmag_tau_points = 66\n"},
      {"fig4d", "acmag", "AC response versus amplitude, +-y readout",
       "readout = y\nacmag_sweep = b\nacmag_tau = 0.6 us\nacmag_b_start = -20 uT\n"
       "acmag_b_stop = 20 uT\nacmag_points = 41\n"},
      {"fig5", "scaling", "Minimum detectable field versus integration time",
       "readout = y\nsigma_F = 0.144 %\nscaling_T_start = 1 s\nscaling_T_stop = 100 s\n"
       "scaling_points = 3\nmc_samples = 4000\n"},
  };
  return list;
}

const Recipe& find_recipe(std::string_view name) {
  std::string known;
  for (const Recipe& r : recipes()) {
    if (r.name == name) return r;
    known += (known.empty() ? "" : ", ") + r.name;
  }
  throw ConfigError("unknown recipe '" + std::string(name) + "' (known: " + known + ")");
}

}  // namespace quartet::cli
