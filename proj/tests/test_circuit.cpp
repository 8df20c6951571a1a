#include "doctest.h"

#include <cmath>
#include <numbers>

#include "jpa/circuit.hpp"
#include "jpa/constants.hpp"

using namespace jpa;

namespace {
// Reference device: SQUID I0 = 4.6 uA, 1 pF shunt, 120 pH stray.
CircuitParams ref() { return {4.6e-6, 1e-12, 120e-12}; }
}  // namespace

TEST_CASE("josephson inductance: zero-flux value and flux law") {
  const double lj0 = josephson_inductance(FluxBias{0.0}, 4.6e-6);
  CHECK(lj0 == doctest::Approx(7.154477792944635e-11).epsilon(1e-12));

  // L_J(phi) = L_J(0) / cos(pi phi); even in phi.
  for (double phi : {0.1, 0.25, 0.4, 0.49}) {
    const double lj = josephson_inductance(FluxBias{phi}, 4.6e-6);
    CHECK(lj == doctest::Approx(lj0 / std::cos(std::numbers::pi * phi)).epsilon(1e-12));
    CHECK(lj == josephson_inductance(FluxBias{-phi}, 4.6e-6));  // exactly even
    CHECK(lj > lj0);
  }
}

TEST_CASE("josephson inductance: domain errors") {
  CHECK_THROWS_AS(josephson_inductance(FluxBias{0.5}, 4.6e-6), validation_error);
  CHECK_THROWS_AS(josephson_inductance(FluxBias{-0.5}, 4.6e-6), validation_error);
  CHECK_THROWS_AS(josephson_inductance(FluxBias{0.7}, 4.6e-6), validation_error);
  CHECK_THROWS_AS(josephson_inductance(FluxBias{0.0}, 0.0), validation_error);
  CHECK_THROWS_AS(josephson_inductance(FluxBias{0.0}, -1e-6), validation_error);
}

TEST_CASE("circuit validation") {
  CHECK_NOTHROW(ref().validate());
  CHECK_THROWS_AS((CircuitParams{0.0, 1e-12, 120e-12}.validate()), validation_error);
  CHECK_THROWS_AS((CircuitParams{4.6e-6, -1e-12, 120e-12}.validate()), validation_error);
  CHECK_THROWS_AS((CircuitParams{4.6e-6, 1e-12, 0.0}.validate()), validation_error);
}

TEST_CASE("resonance frequency: pinned zero-flux value, monotone tuning") {
  CHECK(resonance_frequency(ref(), FluxBias{0.0}) ==
        doctest::Approx(11499659293.466122).epsilon(1e-10));

  double prev = resonance_frequency(ref(), FluxBias{0.0});
  for (double phi = 0.05; phi < 0.5; phi += 0.05) {
    const double f = resonance_frequency(ref(), FluxBias{phi});
    CHECK(f < prev);
    prev = f;
  }
}

TEST_CASE("participation: pinned values and growth toward half flux") {
  CHECK(participation_ratio(ref(), FluxBias{0.0}) ==
        doctest::Approx(0.37351463560024156).epsilon(1e-10));
  double prev = participation_ratio(ref(), FluxBias{0.0});
  for (double phi = 0.1; phi < 0.5; phi += 0.1) {
    const double p = participation_ratio(ref(), FluxBias{phi});
    CHECK(p > prev);
    CHECK(p < 1.0);
    prev = p;
  }
}

TEST_CASE("characteristic impedance: pinned zero-flux value") {
  CHECK(characteristic_impedance(ref(), FluxBias{0.0}) ==
        doctest::Approx(13.839970300887439).epsilon(1e-10));
}

TEST_CASE("operating point agrees with the scalar functions") {
  const OperatingPoint op = operating_point(ref(), FluxBias{0.3});
  CHECK(op.reduced_flux == 0.3);
  CHECK(op.josephson_inductance == josephson_inductance(FluxBias{0.3}, 4.6e-6));
  CHECK(op.resonance_frequency == resonance_frequency(ref(), FluxBias{0.3}));
  CHECK(op.participation == participation_ratio(ref(), FluxBias{0.3}));
  CHECK(op.characteristic_impedance == characteristic_impedance(ref(), FluxBias{0.3}));
  CHECK(op.total_inductance == doctest::Approx(op.josephson_inductance + 120e-12).epsilon(1e-15));
}

TEST_CASE("flux_for_frequency inverts the tuning curve") {
  for (double phi : {0.0, 0.05, 0.15, 0.25, 0.35, 0.45}) {
    const double f = resonance_frequency(ref(), FluxBias{phi});
    const FluxBias back = flux_for_frequency(ref(), f);
    CHECK(back.reduced_flux == doctest::Approx(phi).epsilon(1e-10));
  }
  // Pinned: the 9.5 GHz working point of the reference device.
  CHECK(flux_for_frequency(ref(), 9.5e9).reduced_flux ==
        doctest::Approx(0.3530986391517206).epsilon(1e-10));
}

TEST_CASE("flux_for_frequency rejects unreachable targets") {
  const double fmax = resonance_frequency(ref(), FluxBias{0.0});
  CHECK_THROWS_AS(flux_for_frequency(ref(), fmax * 1.01), validation_error);
  CHECK_THROWS_AS(flux_for_frequency(ref(), 0.0), validation_error);
  CHECK_THROWS_AS(flux_for_frequency(ref(), -1e9), validation_error);
  // At the zero-flux maximum itself the inversion lands on phi = 0.
  CHECK(flux_for_frequency(ref(), fmax).reduced_flux == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("amplification feasibility thresholds") {
  // Q*p at the reference zero-flux point with Q = 100: 37.35 -> feasible, above band.
  const QpVerdict high = amplification_feasibility(100.0, ref(), FluxBias{0.0});
  CHECK(high.qp == doctest::Approx(37.351463560024156).epsilon(1e-10));
  CHECK(high.feasible);
  CHECK(!high.in_design_band);

  const QpVerdict low = amplification_feasibility(10.0, ref(), FluxBias{0.0});
  CHECK(low.qp == doctest::Approx(3.7351463560024156).epsilon(1e-10));
  CHECK(!low.feasible);
  CHECK(!low.in_design_band);

  // Q = 20 -> Qp = 7.47: inside the [5, 10] design band.
  const QpVerdict band = amplification_feasibility(20.0, ref(), FluxBias{0.0});
  CHECK(band.feasible);
  CHECK(band.in_design_band);

  // Custom thresholds are honored.
  const QpVerdict custom = amplification_feasibility(100.0, ref(), FluxBias{0.0}, 30.0, 40.0);
  CHECK(custom.feasible);
  CHECK(custom.in_design_band);
}
