#include "jpa/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "jpa/constants.hpp"
#include "jpa/errors.hpp"

namespace jpa {
namespace {

WaveguideSpec waveguide_from(const ConfigDoc& doc) {
  const bool has_preset = doc.has("waveguide.preset");
  const bool has_dims = doc.has("waveguide.width_m") || doc.has("waveguide.height_m");
  if (has_preset && has_dims) {
    throw validation_error("waveguide: give either preset or explicit width_m/height_m, not both");
  }
  if (has_preset) {
    const std::string name = doc.string_or("waveguide.preset", "");
    if (name == "WR-90" || name == "WR90" || name == "wr90") return WaveguideSpec::wr90();
    throw validation_error("waveguide.preset: unknown preset '" + name + "' (supported: WR-90)");
  }
  WaveguideSpec wg = WaveguideSpec::wr90();
  if (has_dims) {
    if (!doc.has("waveguide.width_m") || !doc.has("waveguide.height_m")) {
      throw validation_error("waveguide: width_m and height_m must be given together");
    }
    wg.width = doc.number("waveguide.width_m");
    wg.height = doc.number("waveguide.height_m");
    wg.label = "custom";
  }
  return wg;
}

void reject_unknown_keys(const ConfigDoc& doc) {
  static const std::set<std::string> known = {
      "circuit.critical_current_A",
      "circuit.capacitance_F",
      "circuit.stray_inductance_H",
      "waveguide.preset",
      "waveguide.width_m",
      "waveguide.height_m",
      "antenna.pad_length_m",
      "antenna.pad_width_m",
      "antenna.gap_m",
      "antenna.coupling_slope_F_per_m",
      "antenna.analytic_length_cap_m",
      "antenna.calibrate_q",
      "antenna.calibrate_length_m",
      "antenna.calibrate_frequency_Hz",
      "placement.distance_m",
      "placement.quarter_wave_at_Hz",
      "design.frequency_Hz",
      "design.operating_flux",
      "pump.detuning_Hz",
      "pump.power_low_dBm",
      "pump.power_high_dBm",
      "pump.attenuation_dB",
      "pump.target_gain_dB",
      "pump.signal_center_Hz",
      "noise.system_temperature_K",
      "noise.added_temperature_K",
      "noise.resolution_bandwidth_Hz",
      "noise.gains_dB",
      "noise.dip_width_Hz",
      "thresholds.qp_feasibility",
      "thresholds.qp_band_top",
      "sweep.length_min_m",
      "sweep.length_max_m",
      "sweep.length_points",
      "sweep.distance_min_frac",
      "sweep.distance_max_frac",
      "sweep.distance_points",
      "gain.span_Hz",
      "gain.points",
      "fit.multistart",
      "fit.max_iterations",
      "fit.flux_per_ampere_init",
      "fit.current_offset_init_A",
  };
  for (const std::string& key : doc.keys()) {
    if (!known.count(key)) {
      throw validation_error("unknown config key '" + key + "' (typo? defaults apply only to absent keys)");
    }
  }
}

void require_positive(double v, const char* key) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw validation_error(std::string{key} + " must be a positive finite number");
  }
}

}  // namespace

double DesignConfig::placement_distance_m() const {
  if (placement_distance) return *placement_distance;
  // Quarter of the guide wavelength at the requested frequency.
  return guide_wavelength(waveguide, *quarter_wave_at) / 4.0;
}

void DesignConfig::validate() const {
  circuit.validate();
  waveguide.validate();
  antenna.validate();

  if (placement_distance.has_value() == quarter_wave_at.has_value()) {
    throw validation_error(
        "placement: exactly one of distance_m or quarter_wave_at_Hz is required");
  }
  if (placement_distance) require_positive(*placement_distance, "placement.distance_m");
  if (quarter_wave_at) {
    require_positive(*quarter_wave_at, "placement.quarter_wave_at_Hz");
    if (*quarter_wave_at <= cutoff_frequency(waveguide)) {
      throw validation_error("placement.quarter_wave_at_Hz is below the waveguide cutoff");
    }
  }

  require_positive(design_frequency, "design.frequency_Hz");
  if (design_frequency <= cutoff_frequency(waveguide)) {
    throw validation_error("design.frequency_Hz is below the waveguide cutoff");
  }
  if (!(std::abs(operating_flux) < 0.5)) {
    throw validation_error("design.operating_flux must satisfy |flux| < 0.5");
  }

  if (calibrate) {
    require_positive(calibrate->target_q, "antenna.calibrate_q");
    require_positive(calibrate->anchor_length, "antenna.calibrate_length_m");
    require_positive(calibrate->frequency, "antenna.calibrate_frequency_Hz");
  }

  require_positive(pump.detuning, "pump.detuning_Hz");
  require_positive(pump.signal_center, "pump.signal_center_Hz");
  if (!std::isfinite(pump.power_low_dbm) || !std::isfinite(pump.power_high_dbm)) {
    throw validation_error("pump powers must be finite dBm values");
  }
  if (pump.attenuation_db && pump.target_gain_db) {
    throw validation_error(
        "pump: give either attenuation_dB or target_gain_dB, not both");
  }
  if (pump.attenuation_db && !std::isfinite(*pump.attenuation_db)) {
    throw validation_error("pump.attenuation_dB must be finite");
  }
  if (pump.target_gain_db && !(*pump.target_gain_db > 0.0)) {
    throw validation_error("pump.target_gain_dB must be positive");
  }

  noise.validate();
  if (noise_gains_db.empty()) {
    throw validation_error("noise.gains_dB must not be empty");
  }
  for (double g : noise_gains_db) {
    if (!std::isfinite(g) || g < 0.0) {
      throw validation_error("noise.gains_dB entries must be finite and >= 0");
    }
  }
  require_positive(dip_width, "noise.dip_width_Hz");

  require_positive(thresholds.qp_feasibility, "thresholds.qp_feasibility");
  if (!(thresholds.qp_band_top > thresholds.qp_feasibility)) {
    throw validation_error("thresholds.qp_band_top must exceed thresholds.qp_feasibility");
  }

  require_positive(sweep.length_min, "sweep.length_min_m");
  if (!(sweep.length_max > sweep.length_min)) {
    throw validation_error("sweep.length_max_m must exceed sweep.length_min_m");
  }
  if (sweep.length_points < 2) {
    throw validation_error("sweep.length_points must be at least 2");
  }
  if (!(sweep.distance_min_frac > 0.0 && sweep.distance_max_frac < 1.0 &&
        sweep.distance_max_frac > sweep.distance_min_frac)) {
    throw validation_error(
        "sweep distance fractions must satisfy 0 < min < max < 1 (units of guide wavelength)");
  }
  if (sweep.distance_points < 2) {
    throw validation_error("sweep.distance_points must be at least 2");
  }

  require_positive(gain.span, "gain.span_Hz");
  if (gain.points < 3) {
    throw validation_error("gain.points must be at least 3");
  }

  if (fit.multistart < 1) {
    throw validation_error("fit.multistart must be at least 1");
  }
  if (fit.max_iterations < 1) {
    throw validation_error("fit.max_iterations must be at least 1");
  }
}

DesignConfig load_config(const ConfigDoc& doc) {
  reject_unknown_keys(doc);

  DesignConfig cfg;
  cfg.circuit.critical_current = doc.number("circuit.critical_current_A");
  cfg.circuit.capacitance = doc.number("circuit.capacitance_F");
  cfg.circuit.stray_inductance = doc.number("circuit.stray_inductance_H");

  cfg.waveguide = waveguide_from(doc);

  cfg.antenna.pad_length = doc.number_or("antenna.pad_length_m", 2.5e-3);
  cfg.antenna.pad_width = doc.number_or("antenna.pad_width_m", 0.25e-3);
  cfg.antenna.gap = doc.number_or("antenna.gap_m", 150e-6);
  cfg.antenna.coupling_slope =
      doc.number_or("antenna.coupling_slope_F_per_m", default_coupling_slope);
  cfg.antenna.analytic_length_cap = doc.number_or("antenna.analytic_length_cap_m", 1.5e-3);

  if (doc.has("placement.distance_m")) cfg.placement_distance = doc.number("placement.distance_m");
  if (doc.has("placement.quarter_wave_at_Hz")) {
    cfg.quarter_wave_at = doc.number("placement.quarter_wave_at_Hz");
  }

  // Design frequency default: the quarter-wave anchor when given, otherwise
  // the zero-flux resonance of the circuit itself.
  double default_design = 0.0;
  if (cfg.quarter_wave_at) {
    default_design = *cfg.quarter_wave_at;
  } else if (cfg.circuit.critical_current > 0.0 && cfg.circuit.capacitance > 0.0 &&
             cfg.circuit.stray_inductance > 0.0) {
    default_design = resonance_frequency(cfg.circuit, FluxBias{0.0});
  }
  cfg.design_frequency = doc.number_or("design.frequency_Hz", default_design);
  cfg.operating_flux = doc.number_or("design.operating_flux", 0.0);

  if (doc.has("antenna.calibrate_q")) {
    DesignConfig::Calibration cal;
    cal.target_q = doc.number("antenna.calibrate_q");
    cal.anchor_length = doc.number_or("antenna.calibrate_length_m", cfg.antenna.pad_length);
    cal.frequency = doc.number_or("antenna.calibrate_frequency_Hz", cfg.design_frequency);
    cfg.calibrate = cal;
  } else if (doc.has("antenna.calibrate_length_m") || doc.has("antenna.calibrate_frequency_Hz")) {
    throw validation_error("antenna: calibrate_length_m/calibrate_frequency_Hz require calibrate_q");
  }

  cfg.pump.detuning = doc.number_or("pump.detuning_Hz", 500e6);
  cfg.pump.power_low_dbm = doc.number_or("pump.power_low_dBm", -64.0);
  cfg.pump.power_high_dbm = doc.number_or("pump.power_high_dBm", -64.0);
  if (doc.has("pump.attenuation_dB")) cfg.pump.attenuation_db = doc.number("pump.attenuation_dB");
  if (doc.has("pump.target_gain_dB")) cfg.pump.target_gain_db = doc.number("pump.target_gain_dB");
  cfg.pump.signal_center = doc.number_or("pump.signal_center_Hz", cfg.design_frequency);

  cfg.noise.system_temperature = doc.number_or("noise.system_temperature_K", 35.0);
  cfg.noise.added_temperature = doc.number_or("noise.added_temperature_K", 0.0);
  cfg.noise.resolution_bandwidth = doc.number_or("noise.resolution_bandwidth_Hz", 2.5e6);
  cfg.noise_gains_db = doc.number_array_or("noise.gains_dB", cfg.noise_gains_db);
  cfg.dip_width = doc.number_or("noise.dip_width_Hz", 0.5e6);

  cfg.thresholds.qp_feasibility = doc.number_or("thresholds.qp_feasibility", 5.0);
  cfg.thresholds.qp_band_top = doc.number_or("thresholds.qp_band_top", 10.0);

  cfg.sweep.length_min = doc.number_or("sweep.length_min_m", 0.5e-3);
  cfg.sweep.length_max = doc.number_or("sweep.length_max_m", 5.0e-3);
  cfg.sweep.length_points = static_cast<int>(doc.number_or("sweep.length_points", 46));
  cfg.sweep.distance_min_frac = doc.number_or("sweep.distance_min_frac", 0.02);
  cfg.sweep.distance_max_frac = doc.number_or("sweep.distance_max_frac", 0.98);
  cfg.sweep.distance_points = static_cast<int>(doc.number_or("sweep.distance_points", 193));

  cfg.gain.span = doc.number_or("gain.span_Hz", 80e6);
  cfg.gain.points = static_cast<int>(doc.number_or("gain.points", 2001));

  cfg.fit.multistart = static_cast<int>(doc.number_or("fit.multistart", 8));
  cfg.fit.max_iterations = static_cast<int>(doc.number_or("fit.max_iterations", 200));
  if (doc.has("fit.flux_per_ampere_init")) {
    cfg.fit.alpha_init = doc.number("fit.flux_per_ampere_init");
  }
  if (doc.has("fit.current_offset_init_A")) {
    cfg.fit.current_offset_init = doc.number("fit.current_offset_init_A");
  }

  cfg.validate();
  return cfg;
}

DesignConfig load_config_file(const std::string& path) {
  return load_config(ConfigDoc::parse_file(path));
}

}  // namespace jpa
