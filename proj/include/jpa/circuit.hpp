#pragma once

#include "jpa/errors.hpp"

namespace jpa {

// Lumped model of a flux-tunable junction resonator: a SQUID (critical
// current I0 at zero flux) in series with stray inductance, shunted by a
// plate capacitance, read out in reflection.
struct CircuitParams {
  double critical_current = 0.0;  // A, SQUID I0 at zero flux
  double capacitance = 0.0;       // F, shunt plate capacitor
  double stray_inductance = 0.0;  // H, series lead/pad inductance

  // Throws validation_error unless all three are positive and finite.
  void validate() const;
};

// Reduced applied flux phi = Phi / Phi0. The junction inductance diverges at
// |phi| = 1/2, so operations require |phi| < 1/2.
struct FluxBias {
  double reduced_flux = 0.0;
};

// Everything the rest of the toolkit needs about one bias point.
struct OperatingPoint {
  double reduced_flux = 0.0;
  double josephson_inductance = 0.0;      // H
  double total_inductance = 0.0;          // H
  double resonance_frequency = 0.0;       // Hz
  double participation = 0.0;             // L_J / (L_J + L_stray)
  double characteristic_impedance = 0.0;  // Ohm, sqrt(L_tot / C)
};

// L_J(phi) = Phi0 / (2 pi I0 cos(pi phi)). Diverges at half flux; throws
// validation_error for |phi| >= 1/2 or I0 <= 0.
double josephson_inductance(FluxBias flux, double critical_current);

// f0(phi) = 1 / (2 pi sqrt(C (L_stray + L_J(phi)))), monotonically
// decreasing in |phi| on [0, 1/2).
double resonance_frequency(const CircuitParams& cp, FluxBias flux);

// p = L_J / (L_J + L_stray), in (0, 1]; grows toward half flux.
double participation_ratio(const CircuitParams& cp, FluxBias flux);

// Z_c = sqrt((L_stray + L_J) / C), the lumped-resonator impedance scale.
double characteristic_impedance(const CircuitParams& cp, FluxBias flux);

OperatingPoint operating_point(const CircuitParams& cp, FluxBias flux);

// Inverse of the tuning curve on phi in [0, 1/2): the non-negative bias at
// which the resonance sits at f0. Throws validation_error if f0 is above the
// zero-flux resonance or not reachable (f0 <= 0 or L_tot(f0) <= L_stray +
// L_J0 is violated).
FluxBias flux_for_frequency(const CircuitParams& cp, double f0);

// Gain-feasibility figure of merit. Parametric gain needs Q p >= threshold
// (default 5); the comfortable design band is Q p in [5, 10] --- above it the
// device saturates early, below it the pump cannot reach threshold.
struct QpVerdict {
  double qp = 0.0;
  bool feasible = false;      // qp >= threshold
  bool in_design_band = false;  // threshold <= qp <= band_top
  double threshold = 5.0;
  double band_top = 10.0;
};

QpVerdict amplification_feasibility(double loaded_q, const CircuitParams& cp, FluxBias flux,
                                    double threshold = 5.0, double band_top = 10.0);

}  // namespace jpa
