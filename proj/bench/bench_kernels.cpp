// Timing harness for the parallel kernels against their serial reference
// implementations. Prints one line per kernel with both wall times and the
// speedup; build with -DJPAKIT_ENABLE_OPENMP=ON/OFF to compare. Not part of
// the test suite.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <vector>

#include "jpa/circuit.hpp"
#include "jpa/fit.hpp"
#include "jpa/paramp.hpp"
#include "jpa/synth.hpp"
#include "jpa/waveguide.hpp"

using namespace jpa;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
  fn();  // warm-up, also first-touch allocation
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void row(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-28s serial %9.3f ms   parallel %9.3f ms   speedup %5.2fx\n", name, serial_ms,
              parallel_ms, serial_ms / parallel_ms);
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

}  // namespace

int main() {
  const CircuitParams cp{4.6e-6, 1.0e-12, 120e-12};
  const WaveguideSpec wg = WaveguideSpec::wr90();
  const double f = 9.5e9;
  const FluxBias flux{flux_for_frequency(cp, f)};
  const double lg = guide_wavelength(wg, f);
  AntennaSpec ant;
  ant.pad_length = 1.2e-3;
  ant.pad_width = 0.25e-3;
  ant.gap = 150e-6;
  ant.coupling_slope = default_coupling_slope;
  const PlacementSpec quarter{lg / 4.0};

  {
    const auto grid = linspace(0.2e-3, 1.5e-3, 20001);
    row("q_vs_length_sweep",
        time_ms([&] { q_vs_length_sweep_serial(cp, flux, wg, ant, quarter, f, grid); }, 5),
        time_ms([&] { q_vs_length_sweep(cp, flux, wg, ant, quarter, f, grid); }, 5));
  }
  {
    const auto grid = linspace(0.02 * lg, 0.98 * lg, 20001);
    row("q_vs_distance_sweep",
        time_ms([&] { q_vs_distance_sweep_serial(cp, flux, wg, ant, f, grid); }, 5),
        time_ms([&] { q_vs_distance_sweep(cp, flux, wg, ant, f, grid); }, 5));
  }
  {
    const double kappa = 2.0 * std::numbers::pi * 18e6;
    const EffectivePump ep{pump_strength_for_gain(20.0, kappa), kappa};
    const auto grid = linspace(f - 40e6, f + 40e6, 200001);
    row("gain_profile",
        time_ms([&] { gain_profile_serial(ep, f, grid); }, 5),
        time_ms([&] { gain_profile(ep, f, grid); }, 5));

    const GainProfile prof = gain_profile(ep, f, grid);
    NoiseConfig noise;
    noise.added_temperature = 0.41;
    row("nvr_spectrum",
        time_ms([&] { nvr_spectrum_serial(prof, noise); }, 5),
        time_ms([&] { nvr_spectrum(prof, noise); }, 5));
  }
  {
    std::vector<FluxTaggedTrace> traces;
    for (int k = 0; k < 32; ++k) {
      const double phi = 0.05 + 0.35 * k / 31.0;
      const double f0 = resonance_frequency(cp, FluxBias{phi});
      const double kappa_c = 2.0 * std::numbers::pi * f0 / 100.0;
      const auto grid = linspace(f0 - 4.0 * kappa_c / (2.0 * std::numbers::pi),
                                 f0 + 4.0 * kappa_c / (2.0 * std::numbers::pi), 201);
      traces.push_back({phi, synth_reflection_trace(f0, kappa_c, kappa_c / 1000.0, 1e-9, 0.7,
                                                    grid, 1e-4, 100 + k)});
    }
    row("extract_q_vs_frequency",
        time_ms([&] { extract_q_vs_frequency_serial(traces, cp); }, 3),
        time_ms([&] { extract_q_vs_frequency(traces, cp); }, 3));
  }
  return 0;
}
