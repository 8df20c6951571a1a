#pragma once

#include <cstdint>
#include <span>

#include "jpa/circuit.hpp"
#include "jpa/trace.hpp"

namespace jpa {

// Synthetic tuning curve in reduced-flux mode; noise is multiplicative
// Gaussian on frequency (f -> f*(1 + noise*xi)). Deterministic per seed.
TuningCurveData synth_tuning_curve(const CircuitParams& cp, std::span<const double> flux_grid,
                                   double noise, std::uint64_t seed);

// Coil-current mode: bias values are currents, phi = alpha*(I - offset).
TuningCurveData synth_tuning_curve_current(const CircuitParams& cp, double alpha,
                                           double current_offset,
                                           std::span<const double> current_grid, double noise,
                                           std::uint64_t seed);

// Synthetic reflection trace from the resonance model with additive complex
// Gaussian noise (sigma per quadrature per point). Deterministic per seed.
ReflectionTrace synth_reflection_trace(double f0, double kappa_c, double kappa_i, double tau,
                                       double theta0, std::span<const double> frequency_grid,
                                       double noise, std::uint64_t seed);

}  // namespace jpa
