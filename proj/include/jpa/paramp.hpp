#pragma once

#include <span>
#include <vector>

#include "jpa/circuit.hpp"

namespace jpa {

// Two pump tones symmetrically detuned about the signal center; powers are
// generator-referenced dBm, reduced to the cavity by an explicit line
// attenuation (a calibration input, never derivable from the device alone).
struct PumpConfig {
  double f_pump_low = 0.0;     // Hz
  double f_pump_high = 0.0;    // Hz
  double power_low_dbm = 0.0;  // dBm at the generator
  double power_high_dbm = 0.0;
  double signal_center = 0.0;  // Hz; must satisfy f_pump_low + f_pump_high = 2*signal_center

  void validate() const;  // symmetry within 1 Hz, positive frequencies
};

// Self-Kerr coefficient of the junction resonator and the bifurcation photon
// scale. K < 0 for a Josephson nonlinearity.
struct KerrParams {
  double kerr = 0.0;             // rad/s per photon
  double critical_photons = 0.0;  // kappa / (sqrt(3)|K|)
  double linewidth = 0.0;        // rad/s, total kappa = omega0/Q
};

// Linearized degenerately pumped Kerr cavity under the stiff-pump
// approximation: everything downstream depends only on (lambda, kappa).
struct EffectivePump {
  double strength = 0.0;   // lambda, rad/s
  double linewidth = 0.0;  // kappa, rad/s
};

struct NoiseConfig {
  double system_temperature = 35.0;       // K, following-amplifier chain referenced
  double added_temperature = 0.0;         // K, amplifier added noise T_N
  double resolution_bandwidth = 2.5e6;    // Hz, spectrum-analyzer rbw

  void validate() const;
};

// K = -p^3 e^2 / (2 hbar C): participation-cubed scaling of the single-
// electron charging-energy nonlinearity. kappa = 2*pi*f0/Q.
KerrParams kerr_coefficient(const CircuitParams& cp, FluxBias flux, double loaded_q);

struct DuffingRoot {
  double photons = 0.0;
  bool stable = true;
};

// Steady states of the driven Kerr cavity: real non-negative roots of
//   n*((delta - K*n)^2 + kappa^2/4) = drive
// with drive in photons*(rad/s)^2. One or three physical roots; when three,
// the middle one is dynamically unstable. At a fold the merged root is
// labeled unstable.
std::vector<DuffingRoot> duffing_steady_states(double drive, double detuning, double kerr,
                                               double linewidth);

struct BifurcationPoint {
  double critical_detuning = 0.0;  // rad/s, sqrt(3)*kappa/2 * sign(K)
  double critical_photons = 0.0;   // kappa / (sqrt(3)|K|)
  double critical_drive = 0.0;     // kappa^3 / (3*sqrt(3)|K|); cubic has a triple root here
};

BifurcationPoint bifurcation_point(double kerr, double linewidth);

// lambda = 2|K| sqrt(n_p1 n_p2) with stiff-pump intracavity photon numbers
// n_p = kappa * (P/(hbar*omega_p)) / (Delta_p^2 + kappa^2/4) per pump after
// line attenuation. Throws validation_error at or beyond the oscillation
// threshold lambda >= kappa/2.
EffectivePump effective_pump_strength(const PumpConfig& pump, const KerrParams& kerr,
                                      double line_attenuation_db);

// Line attenuation (dB) that lands the chained small-signal gain on
// target_gain_db at zero detuning; closed form since lambda ~ 10^(-att/10).
double calibrate_pump_attenuation(const PumpConfig& pump, const KerrParams& kerr,
                                  double target_gain_db);

// Phase-preserving power reflection gain of the degenerately pumped cavity,
//   G(delta) = (k^2/4 + d^2 + l^2)^2 / ((k^2/4 - d^2 - l^2)^2 + k^2 d^2),
// from inverting the 2x2 signal/idler response. Even in delta, G(0 pump)=1.
double small_signal_gain(const EffectivePump& ep, double detuning);

// lambda that produces the given zero-detuning power gain (dB):
// x = lambda/(kappa/2), x^2 = (sqrt(G)-1)/(sqrt(G)+1).
double pump_strength_for_gain(double gain_db, double linewidth);

struct GainProfile {
  double f_center = 0.0;  // Hz
  double strength = 0.0;    // lambda, rad/s (generating parameters kept for noise overlays)
  double linewidth = 0.0;   // kappa, rad/s
  std::vector<double> frequency;  // Hz
  std::vector<double> gain_db;
  double peak_gain_db = 0.0;
  double bandwidth = 0.0;               // Hz, full width at half-maximum power; NaN below 3 dB
  double gain_bandwidth_product = 0.0;  // Hz, sqrt(G_peak)*B; NaN below 3 dB
};

// Gain across a frequency grid (Hz, absolute). Bandwidth is the exact
// half-power full width from the closed-form quadratic in delta^2, not a
// grid estimate. Parallel over grid points; _serial is the reference.
GainProfile gain_profile(const EffectivePump& ep, double f_center, std::span<const double> grid);
GainProfile gain_profile_serial(const EffectivePump& ep, double f_center,
                                std::span<const double> grid);

// FWHM stored in the profile; throws validation_error when the peak gain is
// at or below 3.01 dB (half-maximum would sit below 0 dB).
double gain_bandwidth(const GainProfile& profile);

struct QuadratureGains {
  double amplified = 1.0;    // sqrt(G) + sqrt(G-1)
  double deamplified = 1.0;  // sqrt(G) - sqrt(G-1); product is identically 1
};

QuadratureGains quadrature_gains(double power_gain);

// n = P / (hbar * 2*pi*f * B): photons per bandwidth-time unit at power P.
double photon_number(double power_dbm, double frequency, double bandwidth);

struct SaturationAnchor {
  double power_ref_dbm = -132.0;  // measured 1-dB-compression anchor
  double gain_ref_db = 20.0;
  double slope = 1.0;  // ideal parametric scaling: -1 dB of reach per dB of gain
};

// P_-1dB(G) = P_ref - slope*(G - G_ref), all in dB units.
double saturation_power(double gain_db, const SaturationAnchor& anchor = {});

// Half-photon quantum temperature hbar*omega/(2 k_B).
double quantum_temperature(double frequency);

// NVR = 10 log10((G*(T_Q + T_N) + T_sys) / (T_Q + T_sys)): rise of the
// measured noise floor when the amplifier turns on, referenced to the
// following-amplifier system noise.
double noise_visibility(double power_gain, const NoiseConfig& cfg, double frequency);

struct NoiseBound {
  double added_temperature = 0.0;  // K
  double ratio_to_quantum = 0.0;   // T_N / T_Q
  bool clamped = false;            // inversion produced T_N < 0; reported as 0
};

// Inverts noise_visibility for T_N at the given gain.
NoiseBound noise_temperature_bound(double nvr_db, double power_gain, double system_temperature,
                                   double frequency);

struct NvrTrace {
  std::vector<double> frequency;  // Hz
  std::vector<double> nvr_db;     // as a spectrum analyzer with the given rbw sees it
};

// Noise-visibility spectrum over the profile grid: NVR(G(f)) with a -3.01 dB
// single-quadrature correction over an intrinsically narrow band of width
// dip_width at the center frequency, then convolved with a rectangular rbw
// window in linear power. rbw -> 0 reduces to the pointwise ideal spectrum.
// Parallel over grid points; _serial is the reference.
NvrTrace nvr_spectrum(const GainProfile& profile, const NoiseConfig& cfg,
                      double dip_width = 0.5e6);
NvrTrace nvr_spectrum_serial(const GainProfile& profile, const NoiseConfig& cfg,
                             double dip_width = 0.5e6);

}  // namespace jpa
