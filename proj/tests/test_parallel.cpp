#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "jpa/circuit.hpp"
#include "jpa/fit.hpp"
#include "jpa/paramp.hpp"
#include "jpa/synth.hpp"
#include "jpa/waveguide.hpp"

using namespace jpa;

// The parallel kernels must be bit-identical to their serial references: the
// per-point math is independent, so scheduling cannot be allowed to change
// results between machines or thread counts.

namespace {
constexpr double pi = std::numbers::pi;

CircuitParams reference_circuit() { return {4.6e-6, 1.0e-12, 120e-12}; }

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

bool same_bits(double a, double b) {
  return (std::isnan(a) && std::isnan(b)) || a == b;
}
}  // namespace

TEST_CASE("length sweep: parallel equals serial bitwise") {
  const CircuitParams cp = reference_circuit();
  const WaveguideSpec wg = WaveguideSpec::wr90();
  AntennaSpec ant;
  ant.pad_length = 1.2e-3;
  ant.pad_width = 0.25e-3;
  ant.gap = 150e-6;
  ant.coupling_slope = default_coupling_slope;
  const double f = 9.5e9;
  const FluxBias flux{flux_for_frequency(cp, f)};
  const PlacementSpec placement{guide_wavelength(wg, f) / 4.0};
  const auto lengths = linspace(0.5e-3, 5.0e-3, 181);

  const SweepTable par = q_vs_length_sweep(cp, flux, wg, ant, placement, f, lengths);
  const SweepTable ser = q_vs_length_sweep_serial(cp, flux, wg, ant, placement, f, lengths);
  CHECK(par.axis == ser.axis);
  REQUIRE(par.rows.size() == ser.rows.size());
  for (std::size_t k = 0; k < par.rows.size(); ++k) {
    CHECK(par.rows[k].x == ser.rows[k].x);
    CHECK(same_bits(par.rows[k].q, ser.rows[k].q));
    CHECK(par.rows[k].coupling_capacitance == ser.rows[k].coupling_capacitance);
    CHECK(par.rows[k].load_impedance == ser.rows[k].load_impedance);
    CHECK(par.rows[k].uncoupled == ser.rows[k].uncoupled);
    CHECK(par.rows[k].beyond_cap == ser.rows[k].beyond_cap);
  }
  CHECK(par.min_q_x == ser.min_q_x);
  CHECK(par.divergence_x == ser.divergence_x);
}

TEST_CASE("distance sweep: parallel equals serial bitwise across nodes") {
  const CircuitParams cp = reference_circuit();
  const WaveguideSpec wg = WaveguideSpec::wr90();
  AntennaSpec ant;
  ant.pad_length = 1.2e-3;
  ant.pad_width = 0.25e-3;
  ant.gap = 150e-6;
  ant.coupling_slope = default_coupling_slope;
  const double f = 9.5e9;
  const FluxBias flux{flux_for_frequency(cp, f)};
  const double lg = guide_wavelength(wg, f);
  // Grid hits the lambda_g/2 node exactly: 0.02 .. 0.98 lambda_g in 0.005 steps
  // includes 0.5 at index 96.
  const auto distances = linspace(0.02 * lg, 0.98 * lg, 193);

  const SweepTable par = q_vs_distance_sweep(cp, flux, wg, ant, f, distances);
  const SweepTable ser = q_vs_distance_sweep_serial(cp, flux, wg, ant, f, distances);
  REQUIRE(par.rows.size() == ser.rows.size());
  bool saw_uncoupled = false;
  for (std::size_t k = 0; k < par.rows.size(); ++k) {
    CHECK(same_bits(par.rows[k].q, ser.rows[k].q));
    CHECK(par.rows[k].load_impedance == ser.rows[k].load_impedance);
    CHECK(par.rows[k].uncoupled == ser.rows[k].uncoupled);
    saw_uncoupled = saw_uncoupled || par.rows[k].uncoupled;
  }
  CHECK(saw_uncoupled);  // the node row exercises the infinite-Q path
  CHECK(par.divergence_x == ser.divergence_x);
}

TEST_CASE("gain profile: parallel equals serial bitwise on a large grid") {
  const double kappa = 2.0 * pi * 95e6;
  const EffectivePump ep{pump_strength_for_gain(20.0, kappa), kappa};
  const auto grid = linspace(9.46e9, 9.54e9, 10001);

  const GainProfile par = gain_profile(ep, 9.5e9, grid);
  const GainProfile ser = gain_profile_serial(ep, 9.5e9, grid);
  REQUIRE(par.gain_db.size() == ser.gain_db.size());
  for (std::size_t k = 0; k < par.gain_db.size(); ++k) {
    CHECK(par.gain_db[k] == ser.gain_db[k]);
  }
  CHECK(par.peak_gain_db == ser.peak_gain_db);
  CHECK(same_bits(par.bandwidth, ser.bandwidth));
  CHECK(same_bits(par.gain_bandwidth_product, ser.gain_bandwidth_product));
}

TEST_CASE("nvr spectrum: parallel equals serial bitwise") {
  const double kappa = 2.0 * pi * 95e6;
  const EffectivePump ep{pump_strength_for_gain(20.0, kappa), kappa};
  const auto grid = linspace(9.46e9, 9.54e9, 3001);
  const GainProfile prof = gain_profile_serial(ep, 9.5e9, grid);

  NoiseConfig cfg;
  cfg.system_temperature = 35.0;
  cfg.added_temperature = 0.41;
  cfg.resolution_bandwidth = 2.5e6;

  const NvrTrace par = nvr_spectrum(prof, cfg, 0.5e6);
  const NvrTrace ser = nvr_spectrum_serial(prof, cfg, 0.5e6);
  REQUIRE(par.nvr_db.size() == ser.nvr_db.size());
  for (std::size_t k = 0; k < par.nvr_db.size(); ++k) {
    CHECK(par.frequency[k] == ser.frequency[k]);
    CHECK(par.nvr_db[k] == ser.nvr_db[k]);
  }
}

TEST_CASE("batch q extraction: parallel equals serial bitwise") {
  const CircuitParams truth = reference_circuit();
  std::vector<FluxTaggedTrace> traces;
  for (int k = 0; k < 8; ++k) {
    const double flux = 0.05 + 0.05 * k;
    const double f0 = resonance_frequency(truth, FluxBias{flux});
    const double kappa_c = 2.0 * pi * f0 / 100.0;
    const double half_span = 4.0 * kappa_c / (2.0 * pi);
    const auto grid = linspace(f0 - half_span, f0 + half_span, 161);
    traces.push_back({flux, synth_reflection_trace(f0, kappa_c, kappa_c / 500.0, 0.4e-9, 0.2,
                                                   grid, 1e-4, 50 + k)});
  }

  const QTable par = extract_q_vs_frequency(traces, truth);
  const QTable ser = extract_q_vs_frequency_serial(traces, truth);
  REQUIRE(par.rows.size() == ser.rows.size());
  REQUIRE(par.failures.size() == ser.failures.size());
  for (std::size_t k = 0; k < par.rows.size(); ++k) {
    CHECK(par.rows[k].f0 == ser.rows[k].f0);
    CHECK(par.rows[k].q_loaded == ser.rows[k].q_loaded);
    CHECK(par.rows[k].participation == ser.rows[k].participation);
    CHECK(par.rows[k].qp == ser.rows[k].qp);
  }
  CHECK(par.circuit.critical_current == ser.circuit.critical_current);
  CHECK(par.circuit.capacitance == ser.circuit.capacitance);
  CHECK(par.circuit.stray_inductance == ser.circuit.stray_inductance);
}

TEST_CASE("multistart fits repeat bitwise") {
  const CircuitParams truth = reference_circuit();
  const auto grid = linspace(0.0, 0.45, 40);
  const TuningCurveData data = synth_tuning_curve(truth, grid, 0.002, 9);

  CircuitParams init = truth;
  init.critical_current *= 1.04;
  const FluxFitResult a = fit_flux_tuning(data, FluxFitInit{init});
  const FluxFitResult b = fit_flux_tuning(data, FluxFitInit{init});
  REQUIRE(a.base.estimates.size() == b.base.estimates.size());
  for (std::size_t k = 0; k < a.base.estimates.size(); ++k) {
    CHECK(a.base.estimates[k] == b.base.estimates[k]);
  }
  CHECK(a.base.residual_norm == b.base.residual_norm);
  CHECK(a.base.iterations == b.base.iterations);
  CHECK(a.base.converged == b.base.converged);
}
