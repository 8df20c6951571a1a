#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "jpa/config.hpp"
#include "jpa/report.hpp"
#include "jpa/waveguide.hpp"

namespace jpa {

// Command implementations, CLI-independent so tests can drive them directly.
// Every command returns a deterministic report object (no timestamps); the
// same config and seed produce byte-identical output.

// Resolved geometry/coupling context shared by the commands: antenna with the
// (possibly calibrated) slope, placement distance in meters, frequency grids.
struct ResolvedDesign {
  AntennaSpec antenna;
  PlacementSpec placement;
  double calibrated_slope = 0.0;  // equals antenna.coupling_slope
  bool slope_was_calibrated = false;
};

ResolvedDesign resolve_design(const DesignConfig& cfg);

// Operating point, coupling, feasibility, nonlinearity at the design point.
ordered_json cmd_design(const DesignConfig& cfg, std::uint64_t seed);

// Q versus pad length or wall distance; axis is "length" or "distance".
// The table is embedded in the JSON report; render_sweep_csv gives the raw
// CSV form used by --format csv.
ordered_json cmd_coupling_sweep(const DesignConfig& cfg, const std::string& axis,
                                std::uint64_t seed);
SweepTable sweep_for_axis(const DesignConfig& cfg, const std::string& axis);
std::string render_sweep_csv(const SweepTable& table);

// Tuning-curve fit; data columns decide flux versus coil-current mode.
ordered_json cmd_flux_fit(const DesignConfig& cfg, const std::string& data_path,
                          std::uint64_t seed);

// Reflection-phase fit; .s1p and .csv inputs by extension. The config is
// optional (fit settings only).
ordered_json cmd_phase_fit(const std::optional<DesignConfig>& cfg, const std::string& data_path,
                           std::uint64_t seed);

// Pump working point: effective pump strength, gain profile, bandwidth,
// quadrature gains, saturation. target_gain_db (CLI) overrides the config.
ordered_json cmd_gain(const DesignConfig& cfg, std::optional<double> target_gain_db,
                      std::uint64_t seed);

// Noise visibility at the configured gains plus the spectrum around the
// signal center; optionally inverts a measured NVR into an added-noise bound.
ordered_json cmd_noise(const DesignConfig& cfg, std::optional<double> measured_nvr_db,
                       std::optional<double> nvr_at_gain_db, std::uint64_t seed);

// Full-chain summary: design + gain + noise in one document, with the
// model-versus-measurement caveats collected in notes.
ordered_json cmd_report(const DesignConfig& cfg, std::uint64_t seed);

// Argument parsing + dispatch + error-to-exit-code mapping.
int run_cli(int argc, char** argv);

}  // namespace jpa
