#include "jpa/synth.hpp"

#include <cmath>

#include "jpa/fit.hpp"
#include "jpa/rng.hpp"

namespace jpa {

namespace {
void require_seeded(double noise, std::uint64_t seed) {
  if (noise < 0.0) throw validation_error("noise level must be non-negative");
  if (noise > 0.0 && seed == 0) {
    throw validation_error("a nonzero seed is required when noise > 0");
  }
}
}  // namespace

TuningCurveData synth_tuning_curve(const CircuitParams& cp, std::span<const double> flux_grid,
                                   double noise, std::uint64_t seed) {
  cp.validate();
  require_seeded(noise, seed);
  if (flux_grid.size() < 6) throw validation_error("flux grid needs at least 6 points");
  GaussianRng rng(seed);
  TuningCurveData data;
  data.flux_mode = true;
  data.bias.assign(flux_grid.begin(), flux_grid.end());
  data.frequency.resize(flux_grid.size());
  for (std::size_t k = 0; k < flux_grid.size(); ++k) {
    const double f = resonance_frequency(cp, FluxBias{flux_grid[k]});
    data.frequency[k] = noise > 0.0 ? f * (1.0 + noise * rng.gaussian()) : f;
  }
  return data;
}

TuningCurveData synth_tuning_curve_current(const CircuitParams& cp, double alpha,
                                           double current_offset,
                                           std::span<const double> current_grid, double noise,
                                           std::uint64_t seed) {
  cp.validate();
  require_seeded(noise, seed);
  if (alpha == 0.0) throw validation_error("alpha must be nonzero in coil-current mode");
  if (current_grid.size() < 6) throw validation_error("current grid needs at least 6 points");
  GaussianRng rng(seed);
  TuningCurveData data;
  data.flux_mode = false;
  data.bias.assign(current_grid.begin(), current_grid.end());
  data.frequency.resize(current_grid.size());
  for (std::size_t k = 0; k < current_grid.size(); ++k) {
    const double phi = alpha * (current_grid[k] - current_offset);
    const double f = resonance_frequency(cp, FluxBias{phi});
    data.frequency[k] = noise > 0.0 ? f * (1.0 + noise * rng.gaussian()) : f;
  }
  return data;
}

ReflectionTrace synth_reflection_trace(double f0, double kappa_c, double kappa_i, double tau,
                                       double theta0, std::span<const double> frequency_grid,
                                       double noise, std::uint64_t seed) {
  require_seeded(noise, seed);
  if (!(f0 > 0.0) || !(kappa_c > 0.0) || kappa_i < 0.0) {
    throw validation_error("reflection synthesis needs f0 > 0, kappa_c > 0, kappa_i >= 0");
  }
  if (frequency_grid.size() < 5) throw validation_error("frequency grid needs at least 5 points");
  ReflectionTrace trace;
  trace.frequency.assign(frequency_grid.begin(), frequency_grid.end());
  trace.reflection.resize(frequency_grid.size());
  GaussianRng rng(seed);
  for (std::size_t k = 0; k < frequency_grid.size(); ++k) {
    std::complex<double> g = reflection_model(trace.frequency[k], f0, kappa_c, kappa_i, tau,
                                              theta0);
    if (noise > 0.0) g += std::complex<double>(noise * rng.gaussian(), noise * rng.gaussian());
    trace.reflection[k] = g;
  }
  return trace;
}

}  // namespace jpa
