#include "jpa/fit.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "jpa/constants.hpp"

namespace jpa {

namespace {
constexpr double pi = std::numbers::pi;
constexpr double inf = std::numeric_limits<double>::infinity();
}  // namespace

void TuningCurveData::validate() const {
  if (bias.size() != frequency.size()) {
    throw validation_error("tuning curve bias/frequency lengths differ");
  }
  if (bias.size() < 6) {
    throw validation_error("tuning curve needs at least 6 points, got " +
                           std::to_string(bias.size()));
  }
  for (double f : frequency) {
    if (!std::isfinite(f) || f <= 0.0) {
      throw validation_error("tuning curve frequencies must be positive and finite");
    }
  }
  for (double b : bias) {
    if (!std::isfinite(b)) throw validation_error("tuning curve bias values must be finite");
  }
}

void ReflectionTrace::validate(double magnitude_tolerance) const {
  if (frequency.size() != reflection.size()) {
    throw validation_error("reflection trace frequency/value lengths differ");
  }
  if (frequency.size() < 5) {
    throw validation_error("reflection trace needs at least 5 points, got " +
                           std::to_string(frequency.size()));
  }
  for (std::size_t i = 0; i < frequency.size(); ++i) {
    if (!std::isfinite(frequency[i]) || frequency[i] <= 0.0) {
      throw validation_error("reflection trace frequencies must be positive and finite");
    }
    if (i > 0 && frequency[i] <= frequency[i - 1]) {
      throw validation_error("reflection trace frequencies must be strictly increasing");
    }
    if (!std::isfinite(reflection[i].real()) || !std::isfinite(reflection[i].imag())) {
      throw validation_error("reflection trace values must be finite");
    }
    if (std::abs(reflection[i]) > 1.0 + magnitude_tolerance) {
      throw validation_error("reflection magnitude exceeds 1 + " +
                             std::to_string(magnitude_tolerance) + " at point " +
                             std::to_string(i));
    }
  }
}

// ---------------------------------------------------------------- flux fit

FitOptions flux_fit_defaults() {
  FitOptions opt;
  opt.multistart = 8;
  opt.multistart_spread = 0.03;
  return opt;
}

std::array<double, 3> flux_model_gradient(const CircuitParams& cp, FluxBias flux) {
  const OperatingPoint op = operating_point(cp, flux);
  const double f = op.resonance_frequency;
  const double l = op.total_inductance;
  return {
      f * op.josephson_inductance / (2.0 * l * cp.critical_current),  // d f / d I0
      -f / (2.0 * cp.capacitance),                                    // d f / d C
      -f / (2.0 * l),                                                 // d f / d L_stray
  };
}

FluxFitResult fit_flux_tuning(const TuningCurveData& data, const FluxFitInit& init,
                              FitOptions options) {
  data.validate();
  init.circuit.validate();
  const bool current_mode = !data.flux_mode;
  if (current_mode && init.alpha == 0.0) {
    throw validation_error("coil-current mode needs a nonzero alpha initialization");
  }

  const std::size_t n_params = current_mode ? 5 : 3;
  std::vector<double> start{init.circuit.critical_current, init.circuit.capacitance,
                            init.circuit.stray_inductance};
  if (current_mode) {
    start.push_back(init.alpha);
    start.push_back(init.current_offset);
  }

  if (options.lower.empty() && options.upper.empty()) {
    // Keep the physical parameters positive and within three decades of the
    // initialization; calibration parameters stay free.
    options.lower.assign(n_params, -inf);
    options.upper.assign(n_params, inf);
    for (std::size_t i = 0; i < 3; ++i) {
      options.lower[i] = start[i] * 1e-3;
      options.upper[i] = start[i] * 1e3;
    }
  }

  const std::size_t n_pts = data.bias.size();
  const auto residuals = [&](std::span<const double> p, std::span<double> out) {
    const CircuitParams cp{p[0], p[1], p[2]};
    for (std::size_t k = 0; k < n_pts; ++k) {
      const double phi = current_mode ? p[3] * (data.bias[k] - p[4]) : data.bias[k];
      if (std::abs(phi) >= 0.5) return false;
      const double l_tot =
          cp.stray_inductance +
          constants::flux_quantum / (2.0 * pi * cp.critical_current * std::cos(pi * phi));
      if (l_tot <= 0.0) return false;
      const double f_model = 1.0 / (2.0 * pi * std::sqrt(cp.capacitance * l_tot));
      out[k] = (f_model - data.frequency[k]) / data.frequency[k];
    }
    return true;
  };

  FluxFitResult res;
  res.base = damped_least_squares(residuals, n_pts, start, options);
  res.parameter_names = {"critical_current_A", "capacitance_F", "stray_inductance_H"};
  if (current_mode) {
    res.parameter_names.push_back("alpha_per_A");
    res.parameter_names.push_back("current_offset_A");
  }
  res.circuit = CircuitParams{res.base.estimates[0], res.base.estimates[1],
                              res.base.estimates[2]};
  if (current_mode) {
    res.alpha = res.base.estimates[3];
    res.current_offset = res.base.estimates[4];
  }

  const auto [f_lo, f_hi] = std::minmax_element(data.frequency.begin(), data.frequency.end());
  if ((*f_hi - *f_lo) / *f_hi < 0.02) {
    res.base.warnings.push_back(
        "narrow tuning span: data covers under 2% in frequency; C and L_stray are "
        "effectively degenerate");
  }
  return res;
}

// ---------------------------------------------------------- reflection fit

std::complex<double> reflection_model(double f, double f0, double kappa_c, double kappa_i,
                                      double tau, double theta0) {
  const std::complex<double> i(0.0, 1.0);
  const double det = 4.0 * pi * (f - f0);
  const std::complex<double> resonance =
      (kappa_c - kappa_i + i * det) / (kappa_c + kappa_i - i * det);
  return std::exp(i * (theta0 + 2.0 * pi * f * tau)) * resonance;
}

namespace {

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * pi);
  return a == -pi ? pi : a;
}

// Least-squares slope of y over x (used on trace edges for the delay guess).
double linear_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  const double denom = n * sxx - sx * sx;
  return denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
}

std::vector<double> unwrapped_phase(const std::vector<std::complex<double>>& z) {
  std::vector<double> phase(z.size());
  phase[0] = std::arg(z[0]);
  for (std::size_t k = 1; k < z.size(); ++k) {
    phase[k] = phase[k - 1] + std::arg(z[k] * std::conj(z[k - 1]));
  }
  return phase;
}

}  // namespace

ReflectionFitInit estimate_reflection_init(const ReflectionTrace& trace) {
  trace.validate();
  const std::size_t n = trace.frequency.size();
  const std::size_t edge = std::max<std::size_t>(3, n / 10);
  const std::vector<double> phase = unwrapped_phase(trace.reflection);

  // Away from resonance the phase slope is the delay term alone; average the
  // two edges (the resonance adds equal slope signs on both).
  const double slope_lo = linear_slope(std::span(trace.frequency).subspan(0, edge),
                                       std::span(phase).subspan(0, edge));
  const double slope_hi = linear_slope(std::span(trace.frequency).subspan(n - edge, edge),
                                       std::span(phase).subspan(n - edge, edge));
  ReflectionFitInit init;
  init.tau = 0.5 * (slope_lo + slope_hi) / (2.0 * pi);

  // Delay-corrected phase: resonance winding remains; its steepest descent
  // marks f0 and the +/-90 degree excursions bracket kappa_c.
  const double f_ref = 0.5 * (trace.frequency.front() + trace.frequency.back());
  std::vector<std::complex<double>> detrended(n);
  const std::complex<double> i(0.0, 1.0);
  for (std::size_t k = 0; k < n; ++k) {
    detrended[k] = trace.reflection[k] *
                   std::exp(-i * 2.0 * pi * (trace.frequency[k] - f_ref) * init.tau);
  }
  const std::vector<double> dphase = unwrapped_phase(detrended);

  std::size_t peak = n / 2;
  double best = -1.0;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double gd = std::abs((dphase[k + 1] - dphase[k - 1]) /
                               (trace.frequency[k + 1] - trace.frequency[k - 1]));
    if (gd > best) {
      best = gd;
      peak = k;
    }
  }
  init.f0 = trace.frequency[peak];

  // Phase relative to resonance center; crossings at +/- pi/2 sit at
  // detunings +/- kappa_c/(4 pi), so their separation is kappa_c/(2 pi).
  const double center_phase = dphase[peak];
  double f_minus = trace.frequency.front();
  double f_plus = trace.frequency.back();
  bool found_minus = false, found_plus = false;
  for (std::size_t k = peak; k-- > 0;) {
    const double rel = dphase[k] - center_phase;
    if (std::abs(rel) >= pi / 2.0) {
      const double prev = dphase[k + 1] - center_phase;
      const double t = (std::copysign(pi / 2.0, rel) - prev) / (rel - prev);
      f_minus = trace.frequency[k + 1] + t * (trace.frequency[k] - trace.frequency[k + 1]);
      found_minus = true;
      break;
    }
  }
  for (std::size_t k = peak + 1; k < n; ++k) {
    const double rel = dphase[k] - center_phase;
    if (std::abs(rel) >= pi / 2.0) {
      const double prev = dphase[k - 1] - center_phase;
      const double t = (std::copysign(pi / 2.0, rel) - prev) / (rel - prev);
      f_plus = trace.frequency[k - 1] + t * (trace.frequency[k] - trace.frequency[k - 1]);
      found_plus = true;
      break;
    }
  }
  const double span = trace.frequency.back() - trace.frequency.front();
  init.kappa_c = (found_minus && found_plus) ? 2.0 * pi * (f_plus - f_minus)
                                             : 2.0 * pi * span / 6.0;
  init.kappa_i = 0.0;

  // Residual rotation between the delay-corrected data and the resonance
  // model gives the overall phase offset (angle-averaged via the mean vector).
  std::complex<double> acc(0.0, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const std::complex<double> model =
        reflection_model(trace.frequency[k], init.f0, init.kappa_c, init.kappa_i, 0.0, 0.0);
    acc += detrended[k] * std::conj(model);
  }
  const double theta_c = std::arg(acc);
  init.theta0 = wrap_angle(theta_c - 2.0 * pi * f_ref * init.tau);
  return init;
}

ReflectionFitResult fit_reflection_phase(const ReflectionTrace& trace,
                                         const std::optional<ReflectionFitInit>& init,
                                         FitOptions options) {
  trace.validate();
  const ReflectionFitInit start_pub = init ? *init : estimate_reflection_init(trace);
  const std::size_t n = trace.frequency.size();
  const double f_ref = 0.5 * (trace.frequency.front() + trace.frequency.back());
  const double span = trace.frequency.back() - trace.frequency.front();

  // Internal parameterization: the delay phase is referenced to the trace
  // center (theta_c = theta0 + 2 pi f_ref tau) — with an absolute-frequency
  // reference, theta0 and tau are maximally correlated and the fit stalls.
  // Zero inits carry no scale for the engine, so they are seeded with
  // span-relative epsilons (starting values, not constraints).
  std::vector<double> start{
      start_pub.f0,
      start_pub.kappa_c,
      start_pub.kappa_i != 0.0 ? start_pub.kappa_i : 1e-4 * start_pub.kappa_c,
      start_pub.tau != 0.0 ? start_pub.tau : 1e-3 / span,
      wrap_angle(start_pub.theta0 + 2.0 * pi * f_ref * start_pub.tau),
  };
  if (options.lower.empty() && options.upper.empty()) {
    options.lower = {trace.frequency.front() - span, 2.0 * pi * span * 1e-6, 0.0, -1e-6, -inf};
    options.upper = {trace.frequency.back() + span, 2.0 * pi * span * 1e3,
                     2.0 * pi * span * 1e3, 1e-6, inf};
  }

  const auto residuals = [&](std::span<const double> p, std::span<double> out) {
    const std::complex<double> i(0.0, 1.0);
    for (std::size_t k = 0; k < n; ++k) {
      const double f = trace.frequency[k];
      const double det = 4.0 * pi * (f - p[0]);
      const std::complex<double> model =
          std::exp(i * (p[4] + 2.0 * pi * (f - f_ref) * p[3])) *
          ((p[1] - p[2] + i * det) / (p[1] + p[2] - i * det));
      out[2 * k] = model.real() - trace.reflection[k].real();
      out[2 * k + 1] = model.imag() - trace.reflection[k].imag();
    }
    return true;
  };

  ReflectionFitResult res;
  res.base = damped_least_squares(residuals, 2 * n, start, options);
  res.parameter_names = {"f0_Hz", "kappa_c_rad_s", "kappa_i_rad_s", "tau_s", "theta0_rad"};
  res.f0 = res.base.estimates[0];
  res.kappa_c = res.base.estimates[1];
  res.kappa_i = res.base.estimates[2];
  res.tau = res.base.estimates[3];
  const double theta_c = res.base.estimates[4];
  res.theta0 = wrap_angle(theta_c - 2.0 * pi * f_ref * res.tau);
  res.base.estimates[4] = res.theta0;  // report the absolute-reference offset

  res.q_c = 2.0 * pi * res.f0 / res.kappa_c;
  res.q_i = res.kappa_i > 0.0 ? 2.0 * pi * res.f0 / res.kappa_i : inf;
  res.q_loaded = 2.0 * pi * res.f0 / (res.kappa_c + res.kappa_i);

  // Winding diagnostics on the delay-corrected data.
  std::vector<std::complex<double>> detrended(n);
  const std::complex<double> i(0.0, 1.0);
  for (std::size_t k = 0; k < n; ++k) {
    detrended[k] = trace.reflection[k] *
                   std::exp(-i * 2.0 * pi * (trace.frequency[k] - f_ref) * res.tau);
  }
  const std::vector<double> phase = unwrapped_phase(detrended);
  res.data_winding_deg = std::abs(phase.back() - phase.front()) * 180.0 / pi;
  res.model_winding_deg = res.kappa_c > res.kappa_i ? 360.0 : 0.0;
  res.undercoupled = res.kappa_i > res.kappa_c;
  res.off_resonance = res.data_winding_deg < 180.0;
  if (res.undercoupled) {
    res.base.warnings.push_back("undercoupled fit: internal loss exceeds external coupling");
  }
  if (res.off_resonance) {
    res.base.warnings.push_back("off-resonance trace: data phase winding below 180 degrees");
  }
  const double linewidths = span * 2.0 * pi / (res.kappa_c + res.kappa_i);
  if (linewidths < 3.0) {
    res.base.warnings.push_back("trace spans fewer than 3 linewidths around resonance");
  }
  return res;
}

// ------------------------------------------------------------- batch table

namespace {

QTable extract_table_common(const std::vector<FluxTaggedTrace>& traces,
                            const CircuitParams& circuit_init, const FitOptions& trace_options,
                            bool parallel) {
  circuit_init.validate();
  if (traces.empty()) throw validation_error("no traces to extract from");

  struct PerTrace {
    bool ok = false;
    std::string message;
    double f0 = 0.0, q_loaded = 0.0;
  };
  std::vector<PerTrace> fits(traces.size());

  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(traces.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    try {
      const ReflectionFitResult fr =
          fit_reflection_phase(traces[k].trace, std::nullopt, trace_options);
      if (!fr.base.converged) {
        fits[k].message = "trace fit did not converge";
      } else {
        fits[k].ok = true;
        fits[k].f0 = fr.f0;
        fits[k].q_loaded = fr.q_loaded;
      }
    } catch (const std::exception& e) {
      fits[k].message = e.what();
    }
  }

  QTable table;
  TuningCurveData pairs;
  pairs.flux_mode = true;
  for (std::size_t k = 0; k < traces.size(); ++k) {
    if (fits[k].ok) {
      pairs.bias.push_back(traces[k].reduced_flux);
      pairs.frequency.push_back(fits[k].f0);
    } else {
      table.failures.push_back({k, fits[k].message});
    }
  }

  table.circuit = circuit_init;
  if (pairs.bias.size() >= 6) {
    const FluxFitResult cf = fit_flux_tuning(pairs, FluxFitInit{circuit_init});
    table.circuit_fit = cf.base;
    if (cf.base.converged) table.circuit = cf.circuit;
  } else {
    table.circuit_fit.warnings.push_back(
        "fewer than 6 usable traces: circuit parameters kept at initialization");
  }

  for (std::size_t k = 0; k < traces.size(); ++k) {
    if (!fits[k].ok) continue;
    QTableRow row;
    row.reduced_flux = traces[k].reduced_flux;
    row.f0 = fits[k].f0;
    row.q_loaded = fits[k].q_loaded;
    row.participation = participation_ratio(table.circuit, FluxBias{traces[k].reduced_flux});
    row.qp = row.q_loaded * row.participation;
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace

QTable extract_q_vs_frequency(const std::vector<FluxTaggedTrace>& traces,
                              const CircuitParams& circuit_init,
                              const FitOptions& trace_options) {
  return extract_table_common(traces, circuit_init, trace_options, true);
}

QTable extract_q_vs_frequency_serial(const std::vector<FluxTaggedTrace>& traces,
                                     const CircuitParams& circuit_init,
                                     const FitOptions& trace_options) {
  return extract_table_common(traces, circuit_init, trace_options, false);
}

}  // namespace jpa
