#include "jpa/paramp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "jpa/constants.hpp"
#include "jpa/cubic.hpp"

namespace jpa {

namespace {
constexpr double pi = std::numbers::pi;
constexpr double nan = std::numeric_limits<double>::quiet_NaN();
constexpr double half_power_db = 10.0 * 0.30102999566398120;  // 10*log10(2)

double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

// Stiff-pump intracavity photon number of one strong tone on the linear
// cavity: input photon flux times the Lorentzian response.
double pump_photons(double power_dbm, double attenuation_db, double f_pump, double detuning,
                    double kappa) {
  const double watts = dbm_to_watts(power_dbm - attenuation_db);
  const double flux = watts / (constants::reduced_planck * 2.0 * pi * f_pump);
  return kappa * flux / (detuning * detuning + kappa * kappa / 4.0);
}

// Exact half-power full width (rad/s) of G(delta): with a = k^2/4 + l^2 and
// e = k^2/4 - l^2, u = delta^2 solves
//   (2e^2 - a^2) u^2 + (4ae^2 + 2a^2 e - a^2 k^2) u + a^2 e^2 = 0.
double half_power_full_width(double lambda, double kappa) {
  const double a = kappa * kappa / 4.0 + lambda * lambda;
  const double e = kappa * kappa / 4.0 - lambda * lambda;
  const double qa = 2.0 * e * e - a * a;
  const double qb = 4.0 * a * e * e + 2.0 * a * a * e - a * a * kappa * kappa;
  const double qc = a * a * e * e;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0) return nan;
  const double s = std::sqrt(disc);
  double u = nan;
  for (double cand : {(-qb + s) / (2.0 * qa), (-qb - s) / (2.0 * qa)}) {
    if (cand > 0.0 && (std::isnan(u) || cand < u)) u = cand;
  }
  return std::isnan(u) ? nan : 2.0 * std::sqrt(u);
}

}  // namespace

void PumpConfig::validate() const {
  if (!std::isfinite(f_pump_low) || !std::isfinite(f_pump_high) || !std::isfinite(signal_center) ||
      f_pump_low <= 0.0 || f_pump_high <= 0.0 || signal_center <= 0.0) {
    throw validation_error("pump frequencies must be positive and finite");
  }
  if (f_pump_low >= f_pump_high) {
    throw validation_error("pump tones must satisfy f_pump_low < f_pump_high");
  }
  if (std::abs(f_pump_low + f_pump_high - 2.0 * signal_center) > 1.0) {
    throw validation_error("pump tones must be symmetric about the signal center to within 1 Hz");
  }
  if (!std::isfinite(power_low_dbm) || !std::isfinite(power_high_dbm)) {
    throw validation_error("pump powers must be finite");
  }
}

void NoiseConfig::validate() const {
  if (!std::isfinite(system_temperature) || system_temperature <= 0.0) {
    throw validation_error("system_temperature must be positive");
  }
  if (!std::isfinite(added_temperature) || added_temperature < 0.0) {
    throw validation_error("added_temperature must be non-negative");
  }
  if (!std::isfinite(resolution_bandwidth) || resolution_bandwidth <= 0.0) {
    throw validation_error("resolution_bandwidth must be positive");
  }
}

KerrParams kerr_coefficient(const CircuitParams& cp, FluxBias flux, double loaded_q) {
  if (!std::isfinite(loaded_q) || loaded_q <= 0.0) {
    throw validation_error("loaded_q must be positive");
  }
  const OperatingPoint op = operating_point(cp, flux);
  const double p = op.participation;
  const double e = constants::electron_charge;
  KerrParams k;
  k.kerr = -(p * p * p) * e * e / (2.0 * constants::reduced_planck * cp.capacitance);
  k.linewidth = 2.0 * pi * op.resonance_frequency / loaded_q;
  k.critical_photons = k.linewidth / (std::sqrt(3.0) * std::abs(k.kerr));
  return k;
}

std::vector<DuffingRoot> duffing_steady_states(double drive, double detuning, double kerr,
                                               double linewidth) {
  if (!std::isfinite(linewidth) || linewidth <= 0.0) {
    throw validation_error("linewidth must be positive");
  }
  if (!std::isfinite(drive) || drive < 0.0) {
    throw validation_error("drive must be non-negative");
  }
  const double lorentz = detuning * detuning + linewidth * linewidth / 4.0;
  if (kerr == 0.0) {
    return {DuffingRoot{drive / lorentz, true}};
  }
  // K^2 n^3 - 2 delta K n^2 + (delta^2 + kappa^2/4) n - drive = 0
  std::vector<double> roots =
      solve_cubic_real(kerr * kerr, -2.0 * detuning * kerr, lorentz, -drive);
  std::vector<DuffingRoot> out;
  for (double n : roots) {
    if (n >= -1e-12 * (std::abs(drive) / lorentz + 1.0)) {
      out.push_back(DuffingRoot{std::max(n, 0.0), true});
    }
  }
  if (out.size() == 3) {
    // Bistable: the middle state sits on the unstable segment of the
    // response curve.
    out[1].stable = false;
  } else if (out.size() == 2) {
    // Fold point: the merged (double) root is the marginal one; identify it
    // by the smaller cubic-derivative magnitude.
    auto slope = [&](double n) {
      return std::abs(3.0 * kerr * kerr * n * n - 4.0 * detuning * kerr * n + lorentz);
    };
    out[slope(out[0].photons) <= slope(out[1].photons) ? 0 : 1].stable = false;
  }
  return out;
}

BifurcationPoint bifurcation_point(double kerr, double linewidth) {
  if (kerr == 0.0) throw validation_error("bifurcation undefined for a linear cavity (K=0)");
  if (!std::isfinite(linewidth) || linewidth <= 0.0) {
    throw validation_error("linewidth must be positive");
  }
  BifurcationPoint b;
  b.critical_detuning = std::sqrt(3.0) / 2.0 * linewidth * (kerr > 0.0 ? 1.0 : -1.0);
  b.critical_photons = linewidth / (std::sqrt(3.0) * std::abs(kerr));
  b.critical_drive = linewidth * linewidth * linewidth / (3.0 * std::sqrt(3.0) * std::abs(kerr));
  return b;
}

EffectivePump effective_pump_strength(const PumpConfig& pump, const KerrParams& kerr,
                                      double line_attenuation_db) {
  pump.validate();
  if (kerr.kerr == 0.0) throw validation_error("effective pump undefined for K=0");
  const double kappa = kerr.linewidth;
  const double d_low = 2.0 * pi * (pump.f_pump_low - pump.signal_center);
  const double d_high = 2.0 * pi * (pump.f_pump_high - pump.signal_center);
  const double n_low = pump_photons(pump.power_low_dbm, line_attenuation_db, pump.f_pump_low,
                                    d_low, kappa);
  const double n_high = pump_photons(pump.power_high_dbm, line_attenuation_db, pump.f_pump_high,
                                     d_high, kappa);
  EffectivePump ep;
  ep.linewidth = kappa;
  ep.strength = 2.0 * std::abs(kerr.kerr) * std::sqrt(n_low * n_high);
  if (ep.strength >= kappa / 2.0) {
    throw validation_error("pump beyond parametric oscillation threshold: lambda = " +
                           std::to_string(ep.strength) + " rad/s >= kappa/2 = " +
                           std::to_string(kappa / 2.0) + " rad/s");
  }
  return ep;
}

double calibrate_pump_attenuation(const PumpConfig& pump, const KerrParams& kerr,
                                  double target_gain_db) {
  const double target = pump_strength_for_gain(target_gain_db, kerr.linewidth);
  // lambda scales as 10^(-att/10) through both photon numbers' sqrt product.
  const double kappa = kerr.linewidth;
  const double d_low = 2.0 * pi * (pump.f_pump_low - pump.signal_center);
  const double d_high = 2.0 * pi * (pump.f_pump_high - pump.signal_center);
  const double n_low = pump_photons(pump.power_low_dbm, 0.0, pump.f_pump_low, d_low, kappa);
  const double n_high = pump_photons(pump.power_high_dbm, 0.0, pump.f_pump_high, d_high, kappa);
  const double lambda0 = 2.0 * std::abs(kerr.kerr) * std::sqrt(n_low * n_high);
  if (lambda0 <= 0.0) throw validation_error("zero pump drive cannot be calibrated");
  return 10.0 * std::log10(lambda0 / target);
}

double small_signal_gain(const EffectivePump& ep, double detuning) {
  const double k2_4 = ep.linewidth * ep.linewidth / 4.0;
  if (!std::isfinite(ep.strength) || ep.strength < 0.0) {
    throw validation_error("pump strength must be non-negative");
  }
  if (ep.strength * ep.strength >= k2_4) {
    throw validation_error("pump at or beyond the oscillation threshold (lambda >= kappa/2)");
  }
  const double d2 = detuning * detuning;
  const double l2 = ep.strength * ep.strength;
  const double num = k2_4 + d2 + l2;
  const double re = k2_4 - d2 - l2;
  const double den = re * re + ep.linewidth * ep.linewidth * d2;
  return num * num / den;
}

double pump_strength_for_gain(double gain_db, double linewidth) {
  if (!std::isfinite(gain_db) || gain_db < 0.0) {
    throw validation_error("target gain must be >= 0 dB");
  }
  const double root_g = std::pow(10.0, gain_db / 20.0);  // sqrt of the power gain
  const double x2 = (root_g - 1.0) / (root_g + 1.0);
  return std::sqrt(x2) * linewidth / 2.0;
}

namespace {

GainProfile make_profile_shell(const EffectivePump& ep, double f_center,
                               std::span<const double> grid) {
  if (grid.empty()) throw validation_error("gain profile grid is empty");
  if (!std::isfinite(f_center) || f_center <= 0.0) {
    throw validation_error("profile center frequency must be positive");
  }
  (void)small_signal_gain(ep, 0.0);  // validates the pump up front
  GainProfile gp;
  gp.f_center = f_center;
  gp.strength = ep.strength;
  gp.linewidth = ep.linewidth;
  gp.frequency.assign(grid.begin(), grid.end());
  gp.gain_db.resize(grid.size());
  return gp;
}

void finalize_profile(GainProfile& gp) {
  const EffectivePump ep{gp.strength, gp.linewidth};
  gp.peak_gain_db = 10.0 * std::log10(small_signal_gain(ep, 0.0));
  if (gp.peak_gain_db > half_power_db) {
    const double width = half_power_full_width(gp.strength, gp.linewidth);
    gp.bandwidth = width / (2.0 * pi);
    gp.gain_bandwidth_product = std::pow(10.0, gp.peak_gain_db / 20.0) * gp.bandwidth;
  } else {
    gp.bandwidth = nan;
    gp.gain_bandwidth_product = nan;
  }
}

}  // namespace

GainProfile gain_profile_serial(const EffectivePump& ep, double f_center,
                                std::span<const double> grid) {
  GainProfile gp = make_profile_shell(ep, f_center, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double delta = 2.0 * pi * (grid[i] - f_center);
    gp.gain_db[i] = 10.0 * std::log10(small_signal_gain(ep, delta));
  }
  finalize_profile(gp);
  return gp;
}

GainProfile gain_profile(const EffectivePump& ep, double f_center, std::span<const double> grid) {
  GainProfile gp = make_profile_shell(ep, f_center, grid);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double delta = 2.0 * pi * (grid[i] - f_center);
    gp.gain_db[i] = 10.0 * std::log10(small_signal_gain(ep, delta));
  }
  finalize_profile(gp);
  return gp;
}

double gain_bandwidth(const GainProfile& profile) {
  if (!(profile.peak_gain_db > half_power_db)) {
    throw validation_error("bandwidth undefined: peak gain " +
                           std::to_string(profile.peak_gain_db) + " dB is at or below 3 dB");
  }
  return profile.bandwidth;
}

QuadratureGains quadrature_gains(double power_gain) {
  if (!std::isfinite(power_gain) || power_gain < 1.0) {
    throw validation_error("power gain must be >= 1 for quadrature decomposition");
  }
  const double amplified = std::sqrt(power_gain) + std::sqrt(power_gain - 1.0);
  // sqrt(G) - sqrt(G-1) = 1/(sqrt(G) + sqrt(G-1)); the reciprocal form avoids
  // the cancellation that would erode the unit quadrature product at high gain.
  return QuadratureGains{amplified, 1.0 / amplified};
}

double photon_number(double power_dbm, double frequency, double bandwidth) {
  if (!std::isfinite(frequency) || frequency <= 0.0 || !std::isfinite(bandwidth) ||
      bandwidth <= 0.0) {
    throw validation_error("photon_number requires positive frequency and bandwidth");
  }
  return dbm_to_watts(power_dbm) / (constants::reduced_planck * 2.0 * pi * frequency * bandwidth);
}

double saturation_power(double gain_db, const SaturationAnchor& anchor) {
  if (!std::isfinite(gain_db) || gain_db <= 3.0) {
    throw validation_error("saturation model defined only above 3 dB gain");
  }
  return anchor.power_ref_dbm - anchor.slope * (gain_db - anchor.gain_ref_db);
}

double quantum_temperature(double frequency) {
  if (!std::isfinite(frequency) || frequency <= 0.0) {
    throw validation_error("frequency must be positive");
  }
  return constants::reduced_planck * 2.0 * pi * frequency / (2.0 * constants::boltzmann);
}

double noise_visibility(double power_gain, const NoiseConfig& cfg, double frequency) {
  cfg.validate();
  if (!std::isfinite(power_gain) || power_gain < 1.0) {
    throw validation_error("power gain must be >= 1 for noise visibility");
  }
  const double tq = quantum_temperature(frequency);
  const double on = power_gain * (tq + cfg.added_temperature) + cfg.system_temperature;
  const double off = tq + cfg.system_temperature;
  return 10.0 * std::log10(on / off);
}

NoiseBound noise_temperature_bound(double nvr_db, double power_gain, double system_temperature,
                                   double frequency) {
  if (!std::isfinite(power_gain) || power_gain <= 1.0) {
    throw validation_error("noise bound requires power gain > 1");
  }
  if (!std::isfinite(nvr_db) || nvr_db <= 0.0) {
    throw validation_error("noise bound requires NVR > 0 dB");
  }
  if (!std::isfinite(system_temperature) || system_temperature <= 0.0) {
    throw validation_error("system_temperature must be positive");
  }
  const double tq = quantum_temperature(frequency);
  const double ratio = std::pow(10.0, nvr_db / 10.0);
  const double tn = (ratio * (tq + system_temperature) - system_temperature) / power_gain - tq;
  NoiseBound nb;
  nb.clamped = tn < 0.0;
  nb.added_temperature = std::max(tn, 0.0);
  nb.ratio_to_quantum = nb.added_temperature / tq;
  return nb;
}

namespace {

// 16-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr std::array<double, 8> gl_x = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
constexpr std::array<double, 8> gl_w = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

struct NvrKernel {
  double lambda, kappa, f_center;
  double tq, tn, tsys;
  double dip_lo, dip_hi;  // intrinsic dip band edges, Hz

  // Linear-power noise ratio at frequency f, including the intrinsic
  // single-quadrature factor-of-two dip.
  double linear_ratio(double f) const {
    const double delta = 2.0 * pi * (f - f_center);
    const double g = small_signal_gain(EffectivePump{lambda, kappa}, delta);
    double r = (g * (tq + tn) + tsys) / (tq + tsys);
    if (f > dip_lo && f < dip_hi) r *= 0.5;
    return r;
  }

  double integrate(double lo, double hi) const {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double acc = 0.0;
    for (int i = 0; i < 8; ++i) {
      acc += gl_w[i] * (linear_ratio(mid - half * gl_x[i]) + linear_ratio(mid + half * gl_x[i]));
    }
    return acc * half;
  }

  // Rectangular rbw window centered at f, split at the dip edges so each
  // Gauss-Legendre panel sees a smooth integrand.
  double measured_db(double f, double rbw) const {
    if (rbw <= 0.0) return 10.0 * std::log10(linear_ratio(f));
    const double lo = f - rbw / 2.0;
    const double hi = f + rbw / 2.0;
    double cuts[4] = {lo, std::clamp(dip_lo, lo, hi), std::clamp(dip_hi, lo, hi), hi};
    double acc = 0.0;
    for (int s = 0; s < 3; ++s) {
      if (cuts[s + 1] > cuts[s]) acc += integrate(cuts[s], cuts[s + 1]);
    }
    return 10.0 * std::log10(acc / rbw);
  }
};

NvrKernel make_kernel(const GainProfile& profile, const NoiseConfig& cfg, double dip_width) {
  cfg.validate();
  if (!std::isfinite(dip_width) || dip_width < 0.0) {
    throw validation_error("dip_width must be non-negative");
  }
  if (profile.frequency.empty()) throw validation_error("gain profile has no grid");
  NvrKernel k;
  k.lambda = profile.strength;
  k.kappa = profile.linewidth;
  k.f_center = profile.f_center;
  k.tq = quantum_temperature(profile.f_center);
  k.tn = cfg.added_temperature;
  k.tsys = cfg.system_temperature;
  k.dip_lo = profile.f_center - dip_width / 2.0;
  k.dip_hi = profile.f_center + dip_width / 2.0;
  return k;
}

}  // namespace

NvrTrace nvr_spectrum_serial(const GainProfile& profile, const NoiseConfig& cfg,
                             double dip_width) {
  const NvrKernel kernel = make_kernel(profile, cfg, dip_width);
  NvrTrace trace;
  trace.frequency = profile.frequency;
  trace.nvr_db.resize(profile.frequency.size());
  for (std::size_t i = 0; i < trace.frequency.size(); ++i) {
    trace.nvr_db[i] = kernel.measured_db(trace.frequency[i], cfg.resolution_bandwidth);
  }
  return trace;
}

NvrTrace nvr_spectrum(const GainProfile& profile, const NoiseConfig& cfg, double dip_width) {
  const NvrKernel kernel = make_kernel(profile, cfg, dip_width);
  NvrTrace trace;
  trace.frequency = profile.frequency;
  trace.nvr_db.resize(profile.frequency.size());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(trace.frequency.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    trace.nvr_db[i] = kernel.measured_db(trace.frequency[i], cfg.resolution_bandwidth);
  }
  return trace;
}

}  // namespace jpa
