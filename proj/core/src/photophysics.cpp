#include "quartet/photophysics.hpp"

#include <cmath>
#include <numeric>
#include <random>

namespace quartet {

void ReadoutModel::validate() const {
  if (!(chi >= 0.0)) throw ValidationError("chi >= 0 violated");
  if (!(sigma_F_1s >= 0.0)) throw ValidationError("sigma_F_1s >= 0 violated");
}

DensityMatrix4 initialize() { return DensityMatrix4::from_populations(0.0, 0.5, 0.5, 0.0); }

double fluorescence(const DensityMatrix4& state, const ReadoutModel& model) {
  return 1.0 + model.chi * (state.population(0) + state.population(3));
}

std::vector<double> contrast_trace(std::span<const double> intensities) {
  if (intensities.empty()) throw ValidationError("contrast_trace: empty series");
  const double mean = std::accumulate(intensities.begin(), intensities.end(), 0.0) /
                      static_cast<double>(intensities.size());
  if (!(mean > 0.0)) throw ValidationError("contrast_trace: mean intensity must be positive");
  std::vector<double> out;
  out.reserve(intensities.size());
  for (double i : intensities) out.push_back((i - mean) / mean);
  return out;
}

double complementary_signal(double intensity_a, double intensity_b) {
  const double sum = intensity_a + intensity_b;
  if (!(sum > 0.0)) throw ValidationError("complementary_signal: I_a + I_b must be positive");
  return 2.0 * (intensity_a - intensity_b) / sum;
}

std::vector<double> add_readout_noise(std::span<const double> signal, const ReadoutModel& model,
                                      double integration_time, std::uint64_t seed) {
  if (!(integration_time > 0.0)) throw ValidationError("integration time T > 0 violated");
  model.validate();
  std::vector<double> out(signal.begin(), signal.end());
  if (model.sigma_F_1s == 0.0) return out;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, model.sigma_F_1s / std::sqrt(integration_time));
  for (double& v : out) v += noise(rng);
  return out;
}

}  // namespace quartet
