#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "jpa/circuit.hpp"
#include "jpa/cubic.hpp"
#include "jpa/paramp.hpp"
#include "jpa/rng.hpp"

using namespace jpa;

namespace {
constexpr double pi = std::numbers::pi;

// Circuit with participation exactly 1/2 at zero flux: L_J0 = L_stray = 120 pH.
CircuitParams half_participation() { return {2.742549820628777e-06, 1e-12, 120e-12}; }

// Brute-force steady-state roots: sign-change scan + bisection on
// f(n) = n*((delta - K n)^2 + kappa^2/4) - drive.
std::vector<double> brute_roots(double drive, double delta, double kerr, double kappa) {
  auto f = [&](double n) {
    const double d = delta - kerr * n;
    return n * (d * d + kappa * kappa / 4.0) - drive;
  };
  const double scale = 2.0 * (std::abs(delta / kerr) + std::cbrt(drive / (kerr * kerr)) +
                              kappa / std::abs(kerr)) + 1e-30;
  const int grid = 40000;
  std::vector<double> roots;
  double prev_n = 0.0, prev_f = f(0.0);
  for (int i = 1; i <= grid; ++i) {
    const double n = scale * i / grid;
    const double fn = f(n);
    if (prev_f == 0.0) roots.push_back(prev_n);
    if (prev_f * fn < 0.0) {
      double lo = prev_n, hi = n;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(lo) * f(mid) <= 0.0 ? hi : lo) = mid;
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev_n = n;
    prev_f = fn;
  }
  return roots;
}
}  // namespace

TEST_CASE("cubic solver: factored polynomials") {
  // (x-1)(x-2)(x-3)
  auto r = solve_cubic_real(1.0, -6.0, 11.0, -6.0);
  REQUIRE(r.size() == 3);
  CHECK(r[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r[2] == doctest::Approx(3.0).epsilon(1e-12));

  // (x-1)^2 (x-4): multiplicity collapsed, double root listed once.
  r = solve_cubic_real(1.0, -6.0, 9.0, -4.0);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r[1] == doctest::Approx(4.0).epsilon(1e-9));

  // (x-2)^3 collapses to a single root.
  r = solve_cubic_real(1.0, -6.0, 12.0, -8.0);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == doctest::Approx(2.0).epsilon(1e-5));

  // one real root: (x-1)(x^2+1)
  r = solve_cubic_real(1.0, -1.0, 1.0, -1.0);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == doctest::Approx(1.0).epsilon(1e-12));

  // degenerate: quadratic and linear
  r = solve_cubic_real(0.0, 2.0, 0.0, -8.0);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(r[1] == doctest::Approx(2.0).epsilon(1e-12));
  r = solve_cubic_real(0.0, 0.0, 3.0, -6.0);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("cubic solver: random draws against direct evaluation") {
  GaussianRng rng(17);
  for (int k = 0; k < 50; ++k) {
    const double a = 1.0 + std::abs(rng.gaussian());  // keep the cubic non-degenerate
    const double b = 3.0 * rng.gaussian();
    const double c = 3.0 * rng.gaussian();
    const double d = 3.0 * rng.gaussian();
    const auto roots = solve_cubic_real(a, b, c, d);
    CHECK(!roots.empty());
    for (double x : roots) {
      const double val = ((a * x + b) * x + c) * x + d;
      const double scale = std::abs(a * x * x * x) + std::abs(b * x * x) + std::abs(c * x) +
                           std::abs(d) + 1e-30;
      CHECK(std::abs(val) / scale < 1e-9);
    }
  }
}

TEST_CASE("kerr coefficient: pinned value at participation 1/2") {
  const KerrParams kp = kerr_coefficient(half_participation(), FluxBias{0.0}, 100.0);
  CHECK(kp.kerr / (2.0 * pi) == doctest::Approx(-2421278.6655823905).epsilon(1e-9));
  CHECK(kp.kerr < 0.0);
  const double f0 = resonance_frequency(half_participation(), FluxBias{0.0});
  CHECK(kp.linewidth == doctest::Approx(2.0 * pi * f0 / 100.0).epsilon(1e-12));
  CHECK(kp.critical_photons ==
        doctest::Approx(kp.linewidth / (std::sqrt(3.0) * std::abs(kp.kerr))).epsilon(1e-12));
}

TEST_CASE("kerr scales as participation cubed") {
  const KerrParams base = kerr_coefficient(half_participation(), FluxBias{0.0}, 100.0);
  // Retune to higher flux: p grows, |K| grows as p^3.
  const FluxBias phi{0.3};
  const double p = participation_ratio(half_participation(), phi);
  const KerrParams tuned = kerr_coefficient(half_participation(), phi, 100.0);
  CHECK(tuned.kerr == doctest::Approx(base.kerr * std::pow(p / 0.5, 3.0)).epsilon(1e-12));
}

TEST_CASE("duffing steady states: linear limit and root structure") {
  const double kappa = 2.0 * pi * 10e6;
  // K = 0: single Lorentzian root.
  const double drive = 1e3 * kappa * kappa;
  const auto lin = duffing_steady_states(drive, 0.3 * kappa, 0.0, kappa);
  REQUIRE(lin.size() == 1);
  CHECK(lin[0].photons ==
        doctest::Approx(drive / (0.09 * kappa * kappa + kappa * kappa / 4.0)).epsilon(1e-12));
  CHECK(lin[0].stable);

  const double kerr = -2.0 * pi * 5e4;
  const BifurcationPoint bp = bifurcation_point(kerr, kappa);
  // Below the bifurcation detuning: single stable root for any drive.
  const auto below = duffing_steady_states(bp.critical_drive, 0.5 * bp.critical_detuning,
                                           kerr, kappa);
  REQUIRE(below.size() == 1);
  CHECK(below[0].stable);

  // Beyond it: a drive range with three roots, middle one unstable.
  const double delta = 3.0 * bp.critical_detuning;
  bool saw_three = false;
  for (double s = 0.2; s <= 5.0; s *= 1.15) {
    const auto roots = duffing_steady_states(s * bp.critical_drive, delta, kerr, kappa);
    if (roots.size() == 3) {
      saw_three = true;
      CHECK(roots[0].photons < roots[1].photons);
      CHECK(roots[1].photons < roots[2].photons);
      CHECK(roots[0].stable);
      CHECK(!roots[1].stable);
      CHECK(roots[2].stable);
      // The slope criterion marks exactly the middle root unstable.
      for (const auto& root : roots) {
        const double n = root.photons;
        const double fp = 3.0 * kerr * kerr * n * n - 4.0 * delta * kerr * n +
                          (delta * delta + kappa * kappa / 4.0);
        CHECK(root.stable == (fp > 0.0));
      }
    }
  }
  CHECK(saw_three);
}

TEST_CASE("duffing steady states: random draws against brute-force scan") {
  const double kappa = 2.0 * pi * 12e6;
  GaussianRng rng(5);
  for (int k = 0; k < 25; ++k) {
    const double kerr = -std::pow(10.0, 3.5 + 1.5 * rng.uniform()) * 2.0 * pi;
    const BifurcationPoint bp = bifurcation_point(kerr, kappa);
    const double delta = bp.critical_detuning * (0.2 + 2.8 * rng.uniform());
    const double drive = bp.critical_drive * (0.05 + 3.0 * rng.uniform());
    const auto got = duffing_steady_states(drive, delta, kerr, kappa);
    const auto expect = brute_roots(drive, delta, kerr, kappa);
    REQUIRE(got.size() == expect.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].photons == doctest::Approx(expect[i]).epsilon(1e-6));
    }
  }
}

TEST_CASE("bifurcation point: closed forms and degenerate cubic") {
  const double kappa = 2.0 * pi * 10e6;
  const double kerr = -2.0 * pi * 1e5;
  const BifurcationPoint bp = bifurcation_point(kerr, kappa);
  CHECK(bp.critical_detuning ==
        doctest::Approx(-std::sqrt(3.0) * kappa / 2.0).epsilon(1e-12));  // sign of K
  CHECK(bp.critical_photons ==
        doctest::Approx(kappa / (std::sqrt(3.0) * std::abs(kerr))).epsilon(1e-12));
  CHECK(bp.critical_drive ==
        doctest::Approx(kappa * kappa * kappa / (3.0 * std::sqrt(3.0) * std::abs(kerr)))
            .epsilon(1e-12));

  // At the critical point the steady-state cubic has a triple root: its
  // normalized discriminant collapses to zero.
  const double a = kerr * kerr;
  const double b = -2.0 * bp.critical_detuning * kerr;
  const double c = bp.critical_detuning * bp.critical_detuning + kappa * kappa / 4.0;
  const double d = -bp.critical_drive;
  CHECK(std::abs(cubic_discriminant_normalized(a, b, c, d)) < 1e-9);

  // The merged root equals the critical photon number.
  const auto roots = duffing_steady_states(bp.critical_drive, bp.critical_detuning, kerr, kappa);
  REQUIRE(!roots.empty());
  for (const auto& r : roots) {
    CHECK(r.photons == doctest::Approx(bp.critical_photons).epsilon(1e-4));
  }
}

TEST_CASE("pump config validation") {
  PumpConfig ok{9.0e9, 10.0e9, -64.0, -64.0, 9.5e9};
  CHECK_NOTHROW(ok.validate());
  PumpConfig skewed{9.0e9, 10.0e9, -64.0, -64.0, 9.6e9};  // asymmetric about the center
  CHECK_THROWS_AS(skewed.validate(), validation_error);
  PumpConfig negative{-9.0e9, 10.0e9, -64.0, -64.0, 0.5e9};
  CHECK_THROWS_AS(negative.validate(), validation_error);
}

TEST_CASE("effective pump: attenuation calibration round trip and threshold") {
  const KerrParams kp = kerr_coefficient(half_participation(), FluxBias{0.0}, 100.0);
  const double f0 = resonance_frequency(half_participation(), FluxBias{0.0});
  PumpConfig pump{f0 - 500e6, f0 + 500e6, -64.0, -64.0, f0};

  for (double target : {6.0, 15.0, 20.0, 30.0}) {
    const double att = calibrate_pump_attenuation(pump, kp, target);
    const EffectivePump ep = effective_pump_strength(pump, kp, att);
    CHECK(10.0 * std::log10(small_signal_gain(ep, 0.0)) ==
          doctest::Approx(target).epsilon(1e-9));
  }

  // Removing attenuation pushes lambda past the oscillation threshold.
  CHECK_THROWS_AS(effective_pump_strength(pump, kp, -60.0), validation_error);
}

TEST_CASE("small-signal gain: identities") {
  const double kappa = 2.0 * pi * 95e6;
  const EffectivePump off{0.0, kappa};
  CHECK(small_signal_gain(off, 0.0) == 1.0);  // exactly 0 dB
  // Off center the algebraic identity (a+b)^2 = (a-b)^2 + 4ab survives only
  // to rounding.
  CHECK(small_signal_gain(off, 0.3 * kappa) == doctest::Approx(1.0).epsilon(1e-14));

  const double lambda = pump_strength_for_gain(20.0, kappa);
  const EffectivePump ep{lambda, kappa};
  // sqrt(G(0)) = (kappa^2/4 + lambda^2) / (kappa^2/4 - lambda^2)
  const double q = kappa * kappa / 4.0;
  CHECK(std::sqrt(small_signal_gain(ep, 0.0)) ==
        doctest::Approx((q + lambda * lambda) / (q - lambda * lambda)).epsilon(1e-12));
  // Even in detuning, decreasing in |detuning|.
  for (double frac : {0.05, 0.2, 0.7}) {
    CHECK(small_signal_gain(ep, frac * kappa) ==
          small_signal_gain(ep, -frac * kappa));
  }
  CHECK(small_signal_gain(ep, 0.1 * kappa) < small_signal_gain(ep, 0.0));
  CHECK(small_signal_gain(ep, 0.5 * kappa) < small_signal_gain(ep, 0.1 * kappa));

  // Round trip gain -> lambda -> gain.
  for (double gdb : {3.5, 10.0, 20.0, 40.0}) {
    const double lam = pump_strength_for_gain(gdb, kappa);
    CHECK(10.0 * std::log10(small_signal_gain(EffectivePump{lam, kappa}, 0.0)) ==
          doctest::Approx(gdb).epsilon(1e-12));
  }

  // 40 dB is reached at lambda/(kappa/2) = 0.990050.
  CHECK(pump_strength_for_gain(40.0, kappa) / (kappa / 2.0) ==
        doctest::Approx(0.9900495037128094).epsilon(1e-12));
}

TEST_CASE("gain profile: exact bandwidth matches a dense grid estimate") {
  const double kappa = 2.0 * pi * 95e6;
  const double f0 = 9.5e9;
  const EffectivePump ep{pump_strength_for_gain(20.0, kappa), kappa};

  std::vector<double> grid;
  const int n = 20001;
  for (int i = 0; i < n; ++i) grid.push_back(f0 - 40e6 + 80e6 * i / (n - 1));
  const GainProfile prof = gain_profile(ep, f0, grid);

  CHECK(prof.peak_gain_db == doctest::Approx(20.0).epsilon(1e-9));
  // Pinned exact full width at half maximum for kappa/2pi = 95 MHz, 20 dB.
  CHECK(prof.bandwidth == doctest::Approx(9138236.332862126).epsilon(1e-9));
  CHECK(prof.gain_bandwidth_product ==
        doctest::Approx(std::sqrt(100.0) * prof.bandwidth).epsilon(1e-12));

  // Grid interpolation of the half-power crossings agrees with the closed form.
  const double half_db = prof.peak_gain_db - 10.0 * std::log10(2.0);
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 1; i < prof.frequency.size(); ++i) {
    if (prof.gain_db[i - 1] < half_db && prof.gain_db[i] >= half_db) {
      const double t = (half_db - prof.gain_db[i - 1]) / (prof.gain_db[i] - prof.gain_db[i - 1]);
      lo = prof.frequency[i - 1] + t * (prof.frequency[i] - prof.frequency[i - 1]);
    }
    if (prof.gain_db[i - 1] >= half_db && prof.gain_db[i] < half_db) {
      const double t = (prof.gain_db[i - 1] - half_db) / (prof.gain_db[i - 1] - prof.gain_db[i]);
      hi = prof.frequency[i - 1] + t * (prof.frequency[i] - prof.frequency[i - 1]);
    }
  }
  CHECK(hi - lo == doctest::Approx(prof.bandwidth).epsilon(1e-6));

  // Peak sits at the center of a symmetric grid.
  CHECK(gain_bandwidth(prof) == prof.bandwidth);
}

TEST_CASE("gain bandwidth undefined at or below half-maximum peaks") {
  const double kappa = 2.0 * pi * 95e6;
  const EffectivePump weak{pump_strength_for_gain(2.0, kappa), kappa};
  std::vector<double> grid = {9.4e9, 9.5e9, 9.6e9};
  const GainProfile prof = gain_profile(weak, 9.5e9, grid);
  CHECK(std::isnan(prof.bandwidth));
  CHECK_THROWS_AS(gain_bandwidth(prof), validation_error);
}

TEST_CASE("quadrature gains: unit product and asymptote") {
  for (double gdb : {0.0, 3.0, 10.0, 20.0, 30.0, 60.0}) {
    const double g = std::pow(10.0, gdb / 10.0);
    const QuadratureGains qg = quadrature_gains(g);
    CHECK(qg.amplified * qg.deamplified == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(qg.amplified >= 1.0);
  }
  // G -> infinity: amplified quadrature approaches 2 sqrt(G).
  const double g = 1e6;
  CHECK(quadrature_gains(g).amplified / (2.0 * std::sqrt(g)) ==
        doctest::Approx(1.0).epsilon(1e-3));
  CHECK_THROWS_AS(quadrature_gains(0.5), validation_error);  // power gain below 1
}

TEST_CASE("photon number: pinned value") {
  CHECK(photon_number(-132.0, 9.7e9, 13e6) ==
        doctest::Approx(0.7551424488997617).epsilon(1e-9));
  CHECK_THROWS_AS(photon_number(-132.0, 0.0, 13e6), validation_error);
  CHECK_THROWS_AS(photon_number(-132.0, 9.7e9, 0.0), validation_error);
}

TEST_CASE("saturation power: affine with slope exactly -1 through the anchor") {
  CHECK(saturation_power(20.0) == -132.0);
  CHECK(saturation_power(21.0) - saturation_power(20.0) == -1.0);
  CHECK(saturation_power(10.0) == -122.0);
  const SaturationAnchor steeper{-130.0, 18.0, 1.2};
  CHECK(saturation_power(18.0, steeper) == -130.0);
  CHECK(saturation_power(19.0, steeper) - saturation_power(18.0, steeper) ==
        doctest::Approx(-1.2).epsilon(1e-12));
  CHECK_THROWS_AS(saturation_power(2.0), validation_error);
}

TEST_CASE("quantum temperature: pinned value and linearity") {
  CHECK(quantum_temperature(9.7e9) == doctest::Approx(0.23276328905826169).epsilon(1e-12));
  CHECK(quantum_temperature(2.0 * 9.7e9) ==
        doctest::Approx(2.0 * quantum_temperature(9.7e9)).epsilon(1e-12));
}

TEST_CASE("noise visibility: pinned table, monotonicity, inversion round trip") {
  NoiseConfig cfg;
  cfg.system_temperature = 35.0;
  cfg.added_temperature = 0.41;
  const double f = 9.7e9;

  CHECK(noise_visibility(std::pow(10.0, 1.0), cfg, f) ==
        doctest::Approx(0.7034341307839902).epsilon(1e-9));
  CHECK(noise_visibility(std::pow(10.0, 1.7), cfg, f) ==
        doctest::Approx(2.8051610780790472).epsilon(1e-9));
  CHECK(noise_visibility(std::pow(10.0, 2.0), cfg, f) ==
        doctest::Approx(4.498990031806138).epsilon(1e-9));
  CHECK(noise_visibility(std::pow(10.0, 2.5), cfg, f) ==
        doctest::Approx(8.301037004421323).epsilon(1e-9));

  // Monotone in gain and in added temperature.
  double prev = -1.0;
  for (double gdb = 0.0; gdb <= 30.0; gdb += 2.5) {
    const double v = noise_visibility(std::pow(10.0, gdb / 10.0), cfg, f);
    CHECK(v > prev);
    prev = v;
  }
  NoiseConfig hot = cfg;
  hot.added_temperature = 1.0;
  CHECK(noise_visibility(100.0, hot, f) > noise_visibility(100.0, cfg, f));

  // noise_temperature_bound inverts noise_visibility.
  for (double tn : {0.05, 0.41, 1.3}) {
    NoiseConfig c = cfg;
    c.added_temperature = tn;
    const double nvr = noise_visibility(100.0, c, f);
    const NoiseBound bound = noise_temperature_bound(nvr, 100.0, 35.0, f);
    CHECK(bound.added_temperature == doctest::Approx(tn).epsilon(1e-9));
    CHECK(!bound.clamped);
  }

  // Pinned: 4.5 dB rise at 20 dB gain bounds T_N at 1.76 T_Q.
  const NoiseBound bound = noise_temperature_bound(4.5, 100.0, 35.0, f);
  CHECK(bound.added_temperature == doctest::Approx(0.41023089769336485).epsilon(1e-9));
  CHECK(bound.ratio_to_quantum == doctest::Approx(1.7624381377025577).epsilon(1e-9));

  // An NVR below the zero-added-noise floor clamps at T_N = 0.
  const double floor_nvr = noise_visibility(100.0, NoiseConfig{35.0, 0.0, 2.5e6}, f);
  const NoiseBound clamped = noise_temperature_bound(floor_nvr - 0.5, 100.0, 35.0, f);
  CHECK(clamped.clamped);
  CHECK(clamped.added_temperature == 0.0);
}

TEST_CASE("nvr spectrum: smeared center dip depth and width") {
  const double kappa = 2.0 * pi * 95e6;
  const double f0 = 9.5e9;
  const EffectivePump ep{pump_strength_for_gain(20.0, kappa), kappa};
  std::vector<double> grid;
  const int n = 2001;  // 40 kHz step over +/- 40 MHz
  for (int i = 0; i < n; ++i) grid.push_back(f0 - 40e6 + 80e6 * i / (n - 1));
  const GainProfile prof = gain_profile(ep, f0, grid);

  NoiseConfig cfg;
  cfg.system_temperature = 35.0;
  cfg.added_temperature = 0.41;
  cfg.resolution_bandwidth = 2.5e6;

  const NvrTrace with_dip = nvr_spectrum(prof, cfg, 0.5e6);
  const NvrTrace baseline = nvr_spectrum(prof, cfg, 0.0);  // dip disabled

  std::vector<double> diff(with_dip.nvr_db.size());
  double depth = 0.0;
  for (std::size_t i = 0; i < diff.size(); ++i) {
    diff[i] = baseline.nvr_db[i] - with_dip.nvr_db[i];
    depth = std::max(depth, diff[i]);
  }
  // Independent reference at the center: trapezoid integration of the linear
  // ratio over the rbw window, split at the dip edges. The quantum
  // temperature is pinned to the profile center, matching the spectrum's
  // convention.
  const auto ref_window_db = [&](double fc, double dip_width) {
    const auto ratio = [&](double f, bool dipped) {
      const double g = small_signal_gain(ep, 2.0 * pi * (f - f0));
      const double r = std::pow(10.0, noise_visibility(g, cfg, prof.f_center) / 10.0);
      return dipped ? 0.5 * r : r;
    };
    const double lo = fc - cfg.resolution_bandwidth / 2.0;
    const double hi = fc + cfg.resolution_bandwidth / 2.0;
    const double edges[4] = {lo, std::clamp(f0 - dip_width / 2.0, lo, hi),
                             std::clamp(f0 + dip_width / 2.0, lo, hi), hi};
    double acc = 0.0;
    for (int s = 0; s < 3; ++s) {
      const int np = 20000;
      if (edges[s + 1] <= edges[s]) continue;
      // The dip factor is constant within a panel; deciding it at the panel
      // midpoint keeps the discontinuity off the trapezoid endpoints.
      const double fmid = 0.5 * (edges[s] + edges[s + 1]);
      const bool dipped = fmid > f0 - dip_width / 2.0 && fmid < f0 + dip_width / 2.0;
      const double h = (edges[s + 1] - edges[s]) / np;
      double panel = 0.5 * (ratio(edges[s], dipped) + ratio(edges[s + 1], dipped));
      for (int k = 1; k < np; ++k) panel += ratio(edges[s] + k * h, dipped);
      acc += panel * h;
    }
    return 10.0 * std::log10(acc / cfg.resolution_bandwidth);
  };
  const std::size_t mid = grid.size() / 2;  // exactly f0
  CHECK(with_dip.nvr_db[mid] == doctest::Approx(ref_window_db(f0, 0.5e6)).epsilon(1e-8));
  CHECK(baseline.nvr_db[mid] == doctest::Approx(ref_window_db(f0, 0.0)).epsilon(1e-8));
  // The gain peak weights the dip band above the window mean, so the smeared
  // depth sits above the flat-background estimate -10 log10(1 - 0.5*dip/rbw)
  // yet stays beneath the intrinsic half-power floor.
  CHECK(depth > 0.4575749056067512);
  CHECK(depth < 3.01);

  // Width at half depth tracks the resolution bandwidth.
  const double half = depth / 2.0;
  std::size_t first = diff.size(), last = 0;
  for (std::size_t i = 0; i < diff.size(); ++i) {
    if (diff[i] > half) {
      first = std::min(first, i);
      last = std::max(last, i);
    }
  }
  REQUIRE(first < last);
  const double width = with_dip.frequency[last] - with_dip.frequency[first];
  const double step = grid[1] - grid[0];
  CHECK(std::abs(width - cfg.resolution_bandwidth) <= 3.0 * step);

  // rbw far below the grid step: the dip approaches the full half-power 3.01 dB.
  NoiseConfig narrow = cfg;
  narrow.resolution_bandwidth = 1.0;
  const NvrTrace sharp = nvr_spectrum(prof, narrow, 0.5e6);
  const NvrTrace sharp_base = nvr_spectrum(prof, narrow, 0.0);
  const std::size_t center = sharp.frequency.size() / 2;  // grid point exactly at f0
  CHECK(sharp_base.nvr_db[center] - sharp.nvr_db[center] ==
        doctest::Approx(3.010299956639812).epsilon(1e-4));
}

TEST_CASE("nvr spectrum: away from the dip the window average tracks the ideal") {
  const double kappa = 2.0 * pi * 95e6;
  const double f0 = 9.5e9;
  const EffectivePump ep{pump_strength_for_gain(20.0, kappa), kappa};
  std::vector<double> grid;
  for (int i = 0; i < 801; ++i) grid.push_back(f0 - 40e6 + 80e6 * i / 800.0);
  const GainProfile prof = gain_profile(ep, f0, grid);

  NoiseConfig cfg;
  cfg.system_temperature = 35.0;
  cfg.added_temperature = 0.41;
  cfg.resolution_bandwidth = 1.0;  // effectively pointwise

  const NvrTrace t = nvr_spectrum(prof, cfg, 0.5e6);
  // At 10 MHz off center the dip is far away and a 1 Hz window is pointwise;
  // the spectrum keeps the quantum temperature pinned to the profile center.
  const std::size_t i = 500;  // f0 + 10 MHz
  const double g = std::pow(10.0, prof.gain_db[i] / 10.0);
  CHECK(t.nvr_db[i] == doctest::Approx(noise_visibility(g, cfg, prof.f_center)).epsilon(1e-9));
}
