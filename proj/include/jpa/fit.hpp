#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "jpa/circuit.hpp"
#include "jpa/lsq.hpp"
#include "jpa/trace.hpp"

namespace jpa {

// ---- flux-tuning-curve fit: f0(phi) -> (I0, C, L_stray [, alpha, I_off]) ----

struct FluxFitInit {
  CircuitParams circuit;
  // Coil-current mode only: phi = alpha * (I_coil - current_offset).
  double alpha = 0.0;           // flux quanta per ampere
  double current_offset = 0.0;  // A
};

struct FluxFitResult {
  FitResult base;  // estimates ordered as parameter_names
  std::vector<std::string> parameter_names;
  CircuitParams circuit;
  double alpha = 0.0;
  double current_offset = 0.0;
};

FitOptions flux_fit_defaults();

// Fits the tuning model f(phi) = 1/(2 pi sqrt(C (L_stray + L_J(phi)))) with
// relative frequency residuals (matching the multiplicative noise of real
// tuning data). In reduced-flux mode three parameters are free; in coil-
// current mode the affine flux calibration (alpha, I_off) is fitted jointly.
// Multi-start (default 8 perturbed starts) guards the cos-induced local
// minima. Note: reduced-flux data determines only the products C*L_stray and
// C*L_J0 — the fit converges but flags the flat direction via the condition-
// number warning.
FluxFitResult fit_flux_tuning(const TuningCurveData& data, const FluxFitInit& init,
                              FitOptions options = flux_fit_defaults());

// Analytic gradient of the tuning model with respect to (I0, C, L_stray) at
// one bias point; cross-checks the engine's numeric differentiation.
std::array<double, 3> flux_model_gradient(const CircuitParams& cp, FluxBias flux);

// ---- reflection-phase fit: Gamma(f) -> (f0, kappa_c, kappa_i, tau, theta0) ----

struct ReflectionFitInit {
  double f0 = 0.0;       // Hz
  double kappa_c = 0.0;  // rad/s, external coupling rate
  double kappa_i = 0.0;  // rad/s, internal loss rate
  double tau = 0.0;      // s, electrical delay
  double theta0 = 0.0;   // rad, phase offset at f = 0
};

struct ReflectionFitResult {
  FitResult base;  // estimates ordered as parameter_names
  std::vector<std::string> parameter_names;
  double f0 = 0.0;
  double kappa_c = 0.0;
  double kappa_i = 0.0;
  double tau = 0.0;
  double theta0 = 0.0;
  double q_c = 0.0;      // 2 pi f0 / kappa_c
  double q_i = 0.0;      // 2 pi f0 / kappa_i; +inf for a lossless fit
  double q_loaded = 0.0;  // 2 pi f0 / (kappa_c + kappa_i)
  // Unwrapped end-to-end phase change of the delay-corrected data, degrees.
  double data_winding_deg = 0.0;
  // Asymptotic winding of the fitted resonance term: 360 when overcoupled
  // (kappa_c > kappa_i), else 0.
  double model_winding_deg = 0.0;
  bool undercoupled = false;   // kappa_i > kappa_c
  bool off_resonance = false;  // data winding below 180 degrees
};

// Reflection model fitted to the complex trace (stacked Re/Im residuals):
//   Gamma(f) = e^{i(theta0 + 2 pi f tau)} *
//              (kappa_c - kappa_i + 4 pi i (f - f0)) / (kappa_c + kappa_i - 4 pi i (f - f0)).
// Internally the delay phase is referenced to the trace center so theta0 and
// tau decouple. Supply an init or let estimate_reflection_init derive one.
ReflectionFitResult fit_reflection_phase(const ReflectionTrace& trace,
                                         const std::optional<ReflectionFitInit>& init = {},
                                         FitOptions options = {});

// Heuristic starting point: delay from the edge phase slopes, f0 from the
// group-delay extremum, kappa_c from the +/-90 degree phase crossings.
ReflectionFitInit estimate_reflection_init(const ReflectionTrace& trace);

// Model evaluation for one frequency (exposed for synthesis and tests).
std::complex<double> reflection_model(double f, double f0, double kappa_c, double kappa_i,
                                      double tau, double theta0);

// ---- batch extraction: reflection traces tagged by flux -> (f0, Q, p, Qp) ----

struct FluxTaggedTrace {
  double reduced_flux = 0.0;
  ReflectionTrace trace;
};

struct QTableRow {
  double reduced_flux = 0.0;
  double f0 = 0.0;        // Hz, from the per-trace fit
  double q_loaded = 0.0;  // from the per-trace fit
  double participation = 0.0;
  double qp = 0.0;
};

struct QTableFailure {
  std::size_t index = 0;
  std::string message;
};

struct QTable {
  std::vector<QTableRow> rows;          // successful traces, input order
  std::vector<QTableFailure> failures;  // skipped traces with reasons
  CircuitParams circuit;                // jointly refit on the (flux, f0) pairs
  FitResult circuit_fit;
};

// Fits every trace, then refits the circuit parameters on the extracted
// (flux, f0) pairs and derives participation/Qp per row. Per-trace failures
// are recorded and skipped; the batch continues. Trace fits run in parallel;
// the _serial variant is the reference implementation.
QTable extract_q_vs_frequency(const std::vector<FluxTaggedTrace>& traces,
                              const CircuitParams& circuit_init, const FitOptions& trace_options = {});
QTable extract_q_vs_frequency_serial(const std::vector<FluxTaggedTrace>& traces,
                                     const CircuitParams& circuit_init,
                                     const FitOptions& trace_options = {});

}  // namespace jpa
