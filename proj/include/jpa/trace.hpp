#pragma once

#include <complex>
#include <vector>

#include "jpa/errors.hpp"

namespace jpa {

// Resonance frequency versus flux bias. Bias values are either reduced flux
// (dimensionless) or coil current (A) pending an affine calibration.
struct TuningCurveData {
  std::vector<double> bias;
  std::vector<double> frequency;  // Hz
  bool flux_mode = true;          // true: bias is reduced flux; false: coil current in A

  // >= 6 points, equal lengths, positive frequencies.
  void validate() const;
};

// Single-port complex reflection versus frequency.
struct ReflectionTrace {
  std::vector<double> frequency;               // Hz, strictly increasing
  std::vector<std::complex<double>> reflection;

  // Strictly increasing grid, matched lengths, |reflection| <= 1 + tolerance.
  void validate(double magnitude_tolerance = 0.05) const;
};

}  // namespace jpa
