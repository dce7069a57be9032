#include "quartet/sequence.hpp"

#include <cstdio>
#include <sstream>
#include <string>

namespace quartet {

namespace {

std::string exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& token, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != token.size() || token.empty())
    throw ValidationError("sequence line " + std::to_string(line) + ": bad number '" + token + "'");
  return v;
}

}  // namespace

std::string to_text(const PulseSequence& seq) {
  std::ostringstream os;
  os << "# pulse sequence: kind duration_s [tone target frequency_hz rabi_rad_s phase_rad]...\n";
  os << "repetitions " << seq.repetitions << '\n';
  for (const PulseElement& el : seq.elements) {
    switch (el.kind) {
      case PulseKind::Laser: os << "laser"; break;
      case PulseKind::Delay: os << "delay"; break;
      case PulseKind::Mw: os << "mw"; break;
    }
    os << ' ' << exact(el.duration);
    for (const Tone& t : el.tones) {
      os << " tone " << to_string(t.target) << ' ' << exact(t.frequency) << ' ' << exact(t.rabi)
         << ' ' << exact(t.phase);
    }
    os << '\n';
  }
  return os.str();
}

PulseSequence parse_sequence(std::string_view text) {
  PulseSequence seq;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string s; ls >> s;) tok.push_back(s);
    if (tok.empty()) continue;

    auto fail = [&](const std::string& what) {
      throw ValidationError("sequence line " + std::to_string(line_no) + ": " + what);
    };

    if (tok[0] == "repetitions") {
      if (tok.size() != 2) fail("expected 'repetitions N'");
      seq.repetitions = static_cast<int>(parse_double(tok[1], line_no));
      continue;
    }

    PulseElement el;
    if (tok[0] == "laser") el.kind = PulseKind::Laser;
    else if (tok[0] == "delay") el.kind = PulseKind::Delay;
    else if (tok[0] == "mw") el.kind = PulseKind::Mw;
    else fail("unknown element '" + tok[0] + "'");
    if (tok.size() < 2) fail("missing duration");
    el.duration = parse_double(tok[1], line_no);

    std::size_t i = 2;
    while (i < tok.size()) {
      if (tok[i] != "tone" || i + 5 > tok.size())
        fail("expected 'tone target frequency rabi phase'");
      Tone t;
      if (tok[i + 1] == "+") t.target = Target::Plus;
      else if (tok[i + 1] == "-") t.target = Target::Minus;
      else fail("tone target must be + or -");
      t.frequency = parse_double(tok[i + 2], line_no);
      t.rabi = parse_double(tok[i + 3], line_no);
      t.phase = parse_double(tok[i + 4], line_no);
      el.tones.push_back(t);
      i += 5;
    }
    try {
      el.validate();
    } catch (const ValidationError& e) {
      fail(e.what());
    }
    seq.elements.push_back(std::move(el));
  }
  seq.validate(false);
  return seq;
}

}  // namespace quartet
