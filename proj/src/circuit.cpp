#include "jpa/circuit.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "jpa/constants.hpp"

namespace jpa {

namespace {
constexpr double pi = std::numbers::pi;

void require_finite_positive(double v, const char* name) {
  if (!std::isfinite(v) || v <= 0.0) {
    throw validation_error(std::string(name) + " must be positive and finite, got " +
                           std::to_string(v));
  }
}
}  // namespace

void CircuitParams::validate() const {
  require_finite_positive(critical_current, "critical_current");
  require_finite_positive(capacitance, "capacitance");
  require_finite_positive(stray_inductance, "stray_inductance");
}

double josephson_inductance(FluxBias flux, double critical_current) {
  require_finite_positive(critical_current, "critical_current");
  if (!std::isfinite(flux.reduced_flux) || std::abs(flux.reduced_flux) >= 0.5) {
    throw validation_error("reduced flux must satisfy |phi| < 1/2, got " +
                           std::to_string(flux.reduced_flux));
  }
  const double lj0 = constants::flux_quantum / (2.0 * pi * critical_current);
  return lj0 / std::cos(pi * flux.reduced_flux);
}

double resonance_frequency(const CircuitParams& cp, FluxBias flux) {
  cp.validate();
  const double l_tot = cp.stray_inductance + josephson_inductance(flux, cp.critical_current);
  return 1.0 / (2.0 * pi * std::sqrt(cp.capacitance * l_tot));
}

double participation_ratio(const CircuitParams& cp, FluxBias flux) {
  cp.validate();
  const double lj = josephson_inductance(flux, cp.critical_current);
  return lj / (lj + cp.stray_inductance);
}

double characteristic_impedance(const CircuitParams& cp, FluxBias flux) {
  cp.validate();
  const double l_tot = cp.stray_inductance + josephson_inductance(flux, cp.critical_current);
  return std::sqrt(l_tot / cp.capacitance);
}

OperatingPoint operating_point(const CircuitParams& cp, FluxBias flux) {
  cp.validate();
  OperatingPoint op;
  op.reduced_flux = flux.reduced_flux;
  op.josephson_inductance = josephson_inductance(flux, cp.critical_current);
  op.total_inductance = cp.stray_inductance + op.josephson_inductance;
  op.resonance_frequency = 1.0 / (2.0 * pi * std::sqrt(cp.capacitance * op.total_inductance));
  op.participation = op.josephson_inductance / op.total_inductance;
  op.characteristic_impedance = std::sqrt(op.total_inductance / cp.capacitance);
  return op;
}

FluxBias flux_for_frequency(const CircuitParams& cp, double f0) {
  cp.validate();
  if (!std::isfinite(f0) || f0 <= 0.0) {
    throw validation_error("target frequency must be positive, got " + std::to_string(f0));
  }
  // Invert f0 = 1/(2 pi sqrt(C L_tot)): L_J = L_tot - L_stray must be >= L_J0.
  const double l_tot = 1.0 / (cp.capacitance * (2.0 * pi * f0) * (2.0 * pi * f0));
  const double lj = l_tot - cp.stray_inductance;
  const double lj0 = constants::flux_quantum / (2.0 * pi * cp.critical_current);
  if (lj < lj0 * (1.0 - 1e-12)) {
    throw validation_error("frequency above the zero-flux resonance is unreachable");
  }
  const double c = std::min(1.0, lj0 / lj);
  return FluxBias{std::acos(c) / pi};
}

QpVerdict amplification_feasibility(double loaded_q, const CircuitParams& cp, FluxBias flux,
                                    double threshold, double band_top) {
  if (!std::isfinite(loaded_q) || loaded_q <= 0.0) {
    throw validation_error("loaded Q must be positive, got " + std::to_string(loaded_q));
  }
  QpVerdict v;
  v.threshold = threshold;
  v.band_top = band_top;
  v.qp = loaded_q * participation_ratio(cp, flux);
  v.feasible = v.qp >= threshold;
  v.in_design_band = v.feasible && v.qp <= band_top;
  return v;
}

}  // namespace jpa
