#pragma once

// Optical initialization and spin-dependent fluorescence readout.
//
// The optical cycle is collapsed into a single linear contrast coefficient:
// |+-3/2> fluoresce brighter by `chi` relative to |+-1/2>, symmetrically for
// both signs of m.

#include "quartet/dynamics.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace quartet {

struct ReadoutModel {
  double chi = 0.014;
  double sigma_F_1s = 0.0014;

  void validate() const;
};

/// Equal populations in |+1/2> and |-1/2>, no coherence.
DensityMatrix4 initialize();

/// I_rel = 1 + chi * (p(+3/2) + p(-3/2)).
double fluorescence(const DensityMatrix4& state, const ReadoutModel& model);

/// (I - mean(I)) / mean(I). Throws on empty input or non-positive mean.
std::vector<double> contrast_trace(std::span<const double> intensities);

/// F = 2 (I_a - I_b) / (I_a + I_b).
double complementary_signal(double intensity_a, double intensity_b);

/// Adds i.i.d. N(0, sigma_F_1s / sqrt(T)) to each element.
std::vector<double> add_readout_noise(std::span<const double> signal, const ReadoutModel& model,
                                      double integration_time, std::uint64_t seed);

}  // namespace quartet
