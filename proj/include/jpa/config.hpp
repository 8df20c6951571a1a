#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jpa/circuit.hpp"
#include "jpa/paramp.hpp"
#include "jpa/toml.hpp"
#include "jpa/waveguide.hpp"

namespace jpa {

// One self-describing configuration per run. Every default is resolved at
// load time and echoed into the Report, so a run is reproducible from its
// Report alone. All file values are SI base units; dB/dBm only in keys
// suffixed _dB/_dBm.
struct DesignConfig {
  CircuitParams circuit;
  WaveguideSpec waveguide;
  AntennaSpec antenna;

  // Antenna slope calibration request: solve coupling_slope so the predicted
  // Q equals target at the anchor (overrides coupling_slope_F_per_m).
  struct Calibration {
    double target_q = 0.0;
    double anchor_length = 0.0;  // m
    double frequency = 0.0;      // Hz
  };
  std::optional<Calibration> calibrate;

  // Exactly one of the two placement forms.
  std::optional<double> placement_distance;  // m
  std::optional<double> quarter_wave_at;     // Hz

  double design_frequency = 0.0;  // Hz, resolved default
  double operating_flux = 0.0;

  struct Pump {
    double detuning = 500e6;  // Hz, each tone from the signal center
    double power_low_dbm = -64.0;
    double power_high_dbm = -64.0;
    std::optional<double> attenuation_db;  // explicit line calibration
    std::optional<double> target_gain_db;  // or: solve attenuation for this gain
    double signal_center = 0.0;            // Hz, resolved default = design frequency
  } pump;

  NoiseConfig noise;
  std::vector<double> noise_gains_db{10.0, 17.0, 20.0, 25.0};
  double dip_width = 0.5e6;  // Hz, intrinsic phase-sensitive dip band

  struct Thresholds {
    double qp_feasibility = 5.0;
    double qp_band_top = 10.0;
  } thresholds;

  struct SweepGrids {
    double length_min = 0.5e-3;  // m
    double length_max = 5.0e-3;
    int length_points = 46;
    double distance_min_frac = 0.02;  // in units of lambda_g at the design frequency
    double distance_max_frac = 0.98;
    int distance_points = 193;
  } sweep;

  struct GainGrid {
    double span = 80e6;  // Hz, full width around the signal center
    int points = 2001;
  } gain;

  struct FitSettings {
    int multistart = 8;
    int max_iterations = 200;
    // Coil-current tuning data only: starting guesses for the affine flux
    // calibration. Absent -> estimated from the data.
    std::optional<double> alpha_init;           // flux quanta per ampere
    std::optional<double> current_offset_init;  // A
  } fit;

  // Resolved placement distance at the design frequency.
  double placement_distance_m() const;

  // Cross-field validation; throws validation_error naming the config path.
  void validate() const;
};

// Parses and fully resolves a config document; unknown keys are rejected so
// typos cannot silently fall back to defaults.
DesignConfig load_config(const ConfigDoc& doc);
DesignConfig load_config_file(const std::string& path);

}  // namespace jpa
