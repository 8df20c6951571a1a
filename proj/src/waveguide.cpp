#include "jpa/waveguide.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "jpa/constants.hpp"

namespace jpa {

namespace {
constexpr double pi = std::numbers::pi;
constexpr double inf = std::numeric_limits<double>::infinity();

// Fractional distance from the nearest n*lambda_g/2 node, in units of
// half-wavelengths; |m| <= 0.5. Treated as exactly-at-node below 1e-12.
double node_offset(double d, double lambda_g) {
  const double u = 2.0 * d / lambda_g;
  return u - std::round(u);
}

void check_strictly_increasing(std::span<const double> grid, const char* what) {
  if (grid.empty()) throw validation_error(std::string(what) + " grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || grid[i] <= 0.0) {
      throw validation_error(std::string(what) + " grid values must be positive and finite");
    }
    if (i > 0 && grid[i] <= grid[i - 1]) {
      throw validation_error(std::string(what) + " grid must be strictly increasing");
    }
  }
}
}  // namespace

void WaveguideSpec::validate() const {
  if (!std::isfinite(width) || !std::isfinite(height) || height <= 0.0 || width <= height) {
    throw validation_error("waveguide requires width > height > 0");
  }
}

WaveguideSpec WaveguideSpec::wr90() {
  return WaveguideSpec{0.90 * 0.0254, 0.40 * 0.0254, "WR-90"};
}

void AntennaSpec::validate() const {
  if (!std::isfinite(pad_length) || pad_length <= 0.0) {
    throw validation_error("antenna pad_length must be positive");
  }
  if (!std::isfinite(coupling_slope) || coupling_slope <= 0.0) {
    throw validation_error("antenna coupling_slope must be positive");
  }
  if (!std::isfinite(analytic_length_cap) || analytic_length_cap <= 0.0) {
    throw validation_error("antenna analytic_length_cap must be positive");
  }
  if (pad_width < 0.0 || gap < 0.0) {
    throw validation_error("antenna pad_width/gap must be non-negative");
  }
}

void PlacementSpec::validate() const {
  if (!std::isfinite(distance_from_wall) || distance_from_wall <= 0.0) {
    throw validation_error("placement distance_from_wall must be positive");
  }
}

double cutoff_frequency(const WaveguideSpec& wg) {
  wg.validate();
  return constants::light_speed / (2.0 * wg.width);
}

double guide_wavelength(const WaveguideSpec& wg, double f) {
  const double fc = cutoff_frequency(wg);
  if (!std::isfinite(f) || f <= fc) {
    throw validation_error("evanescent mode: frequency " + std::to_string(f) +
                           " Hz is at or below the TE10 cutoff " + std::to_string(fc) + " Hz");
  }
  const double ratio = fc / f;
  return (constants::light_speed / f) / std::sqrt(1.0 - ratio * ratio);
}

double te10_wave_impedance(const WaveguideSpec& wg, double f) {
  const double fc = cutoff_frequency(wg);
  if (!std::isfinite(f) || f <= fc) {
    throw validation_error("evanescent mode: frequency " + std::to_string(f) +
                           " Hz is at or below the TE10 cutoff " + std::to_string(fc) + " Hz");
  }
  const double ratio = fc / f;
  return constants::free_space_impedance / std::sqrt(1.0 - ratio * ratio);
}

LoadImpedance load_impedance(const WaveguideSpec& wg, const PlacementSpec& placement, double f) {
  placement.validate();
  const double zte = te10_wave_impedance(wg, f);
  const double lg = guide_wavelength(wg, f);
  LoadImpedance out;
  out.frequency = f;
  const double m = node_offset(placement.distance_from_wall, lg);
  if (std::abs(m) < 1e-12) {
    // Chip at a voltage node: the shorted stub transforms back to a short.
    out.impedance = {0.0, 0.0};
    out.uncoupled = true;
    return out;
  }
  // tan(2*pi*d/lambda_g) has period lambda_g/2; evaluate on the reduced
  // argument so nodes and antinodes stay numerically clean at large d.
  const double t = std::tan(pi * m);
  // Z_TE || j*Z_TE*t = Z_TE * jt/(1+jt) = Z_TE * (t^2 + jt)/(1+t^2).
  const double denom = 1.0 + t * t;
  out.impedance = {zte * t * t / denom, zte * t / denom};
  return out;
}

CouplingCapacitance antenna_coupling_capacitance(const AntennaSpec& ant) {
  ant.validate();
  return CouplingCapacitance{ant.coupling_slope * ant.pad_length,
                             ant.pad_length > ant.analytic_length_cap};
}

CouplingQ coupling_q(const CircuitParams& cp, FluxBias flux, const WaveguideSpec& wg,
                     const AntennaSpec& ant, const PlacementSpec& placement, double f) {
  const double zc = characteristic_impedance(cp, flux);
  const CouplingCapacitance cc = antenna_coupling_capacitance(ant);
  CouplingQ out;
  out.coupling_capacitance = cc.value;
  out.beyond_cap = cc.beyond_cap;
  out.load = load_impedance(wg, placement, f);
  if (out.load.uncoupled) {
    out.q = inf;
    out.uncoupled = true;
    return out;
  }
  const double ratio = cp.capacitance / cc.value;
  out.q = zc / out.load.impedance.real() * ratio * ratio;
  return out;
}

CouplingQ coupling_q_at_frequency(const CircuitParams& cp, const WaveguideSpec& wg,
                                  const AntennaSpec& ant, const PlacementSpec& placement,
                                  double f) {
  return coupling_q(cp, flux_for_frequency(cp, f), wg, ant, placement, f);
}

double calibrate_coupling_slope(const CircuitParams& cp, FluxBias flux, const WaveguideSpec& wg,
                                const AntennaSpec& ant_template, const PlacementSpec& placement,
                                double f, double target_q, double anchor_length) {
  if (!std::isfinite(target_q) || target_q <= 0.0) {
    throw validation_error("calibration target_q must be positive");
  }
  if (!std::isfinite(anchor_length) || anchor_length <= 0.0) {
    throw validation_error("calibration anchor_length must be positive");
  }
  // Q(slope) = (Z_c/Re(Z_L)) * (C/(slope*l))^2  =>  slope = (C/l)*sqrt(Z_c/(Re(Z_L)*Q)).
  const double zc = characteristic_impedance(cp, flux);
  const LoadImpedance zl = load_impedance(wg, placement, f);
  if (zl.uncoupled || zl.impedance.real() <= 0.0) {
    throw validation_error("calibration anchor placement is uncoupled (chip at a node)");
  }
  return cp.capacitance / anchor_length * std::sqrt(zc / (zl.impedance.real() * target_q));
}

namespace {

SweepRow length_sweep_row(const CircuitParams& cp, FluxBias flux, const WaveguideSpec& wg,
                          AntennaSpec ant, const PlacementSpec& placement, double f, double l) {
  ant.pad_length = l;
  const CouplingQ q = coupling_q(cp, flux, wg, ant, placement, f);
  return SweepRow{l, q.q, q.coupling_capacitance, q.load.impedance, q.uncoupled, q.beyond_cap};
}

SweepRow distance_sweep_row(const CircuitParams& cp, FluxBias flux, const WaveguideSpec& wg,
                            const AntennaSpec& ant, double f, double d) {
  const CouplingQ q = coupling_q(cp, flux, wg, ant, PlacementSpec{d}, f);
  return SweepRow{d, q.q, q.coupling_capacitance, q.load.impedance, q.uncoupled, q.beyond_cap};
}

void annotate(SweepTable& table, const WaveguideSpec& wg, bool distance_axis) {
  double best = inf;
  for (const SweepRow& row : table.rows) {
    if (!row.uncoupled && row.q < best) {
      best = row.q;
      table.min_q_x = row.x;
    }
  }
  if (!distance_axis) return;
  const double lg = guide_wavelength(wg, table.frequency);
  const double lo = table.rows.front().x;
  const double hi = table.rows.back().x;
  for (long n = std::lround(std::ceil(2.0 * lo / lg)); n * lg / 2.0 <= hi; ++n) {
    if (n >= 1) table.divergence_x.push_back(n * lg / 2.0);
  }
}

void validate_sweep_inputs(const CircuitParams& cp, FluxBias flux, const WaveguideSpec& wg,
                           const AntennaSpec& ant, double f) {
  cp.validate();
  wg.validate();
  ant.validate();
  (void)josephson_inductance(flux, cp.critical_current);
  (void)te10_wave_impedance(wg, f);  // rejects evanescent frequencies up front
}

}  // namespace

SweepTable q_vs_length_sweep_serial(const CircuitParams& cp, FluxBias flux,
                                    const WaveguideSpec& wg, const AntennaSpec& ant_template,
                                    const PlacementSpec& placement, double f,
                                    std::span<const double> lengths) {
  validate_sweep_inputs(cp, flux, wg, ant_template, f);
  placement.validate();
  check_strictly_increasing(lengths, "length");
  SweepTable table{"pad_length_m", f, std::vector<SweepRow>(lengths.size()), {}, {}};
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    table.rows[i] = length_sweep_row(cp, flux, wg, ant_template, placement, f, lengths[i]);
  }
  annotate(table, wg, false);
  return table;
}

SweepTable q_vs_length_sweep(const CircuitParams& cp, FluxBias flux, const WaveguideSpec& wg,
                             const AntennaSpec& ant_template, const PlacementSpec& placement,
                             double f, std::span<const double> lengths) {
  validate_sweep_inputs(cp, flux, wg, ant_template, f);
  placement.validate();
  check_strictly_increasing(lengths, "length");
  SweepTable table{"pad_length_m", f, std::vector<SweepRow>(lengths.size()), {}, {}};
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(lengths.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    table.rows[i] = length_sweep_row(cp, flux, wg, ant_template, placement, f, lengths[i]);
  }
  annotate(table, wg, false);
  return table;
}

SweepTable q_vs_distance_sweep_serial(const CircuitParams& cp, FluxBias flux,
                                      const WaveguideSpec& wg, const AntennaSpec& ant, double f,
                                      std::span<const double> distances) {
  validate_sweep_inputs(cp, flux, wg, ant, f);
  check_strictly_increasing(distances, "distance");
  SweepTable table{"distance_m", f, std::vector<SweepRow>(distances.size()), {}, {}};
  for (std::size_t i = 0; i < distances.size(); ++i) {
    table.rows[i] = distance_sweep_row(cp, flux, wg, ant, f, distances[i]);
  }
  annotate(table, wg, true);
  return table;
}

SweepTable q_vs_distance_sweep(const CircuitParams& cp, FluxBias flux, const WaveguideSpec& wg,
                               const AntennaSpec& ant, double f,
                               std::span<const double> distances) {
  validate_sweep_inputs(cp, flux, wg, ant, f);
  check_strictly_increasing(distances, "distance");
  SweepTable table{"distance_m", f, std::vector<SweepRow>(distances.size()), {}, {}};
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(distances.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    table.rows[i] = distance_sweep_row(cp, flux, wg, ant, f, distances[i]);
  }
  annotate(table, wg, true);
  return table;
}

}  // namespace jpa
