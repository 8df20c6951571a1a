#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jpa/circuit.hpp"

namespace jpa {

// Rectangular waveguide, TE10 mode only.
struct WaveguideSpec {
  double width = 0.0;   // m, broad wall (a)
  double height = 0.0;  // m, narrow wall (b)
  std::string label;

  // Throws validation_error unless a > b > 0.
  void validate() const;

  // WR-90 preset: 0.90 in x 0.40 in inner dimensions.
  static WaveguideSpec wr90();
};

// Dipole antenna formed by the capacitor pads; the analytic model is a
// linear capacitance-per-length law C_c = coupling_slope * pad_length,
// trusted only up to analytic_length_cap.
struct AntennaSpec {
  double pad_length = 0.0;      // m
  double pad_width = 0.0;       // m (kept for record; Q is insensitive to it)
  double gap = 0.0;             // m, gap between the pads
  double coupling_slope = 0.0;  // F/m, maps pad_length -> C_c
  double analytic_length_cap = 1.5e-3;  // m, linear-model validity limit

  void validate() const;
};

// Chip position measured from the shorting back wall along the guide axis.
struct PlacementSpec {
  double distance_from_wall = 0.0;  // m

  void validate() const;
};

struct LoadImpedance {
  std::complex<double> impedance;  // Ohm
  double frequency = 0.0;          // Hz
  bool uncoupled = false;          // chip at a voltage node (d = n*lambda_g/2)
};

// Default C_c(l) slope, F/m. Pinned by requiring a coupling Q of 100 for the
// reference resonator (1 pF shunt, 191.5 pH total inductance at zero flux)
// with a 2.5 mm antenna at 9.5 GHz, chip a quarter guide wavelength from the
// wall. calibrate_coupling_slope() reproduces this number from that anchor.
inline constexpr double default_coupling_slope = 6.521686555504951e-12;

// f_c = c / (2a) for TE10.
double cutoff_frequency(const WaveguideSpec& wg);

// lambda_g = (c/f) / sqrt(1 - (f_c/f)^2). Throws validation_error ("evanescent")
// for f <= f_c.
double guide_wavelength(const WaveguideSpec& wg, double f);

// Z_TE = eta0 / sqrt(1 - (f_c/f)^2); real, > eta0, decreasing toward eta0.
double te10_wave_impedance(const WaveguideSpec& wg, double f);

// Impedance seen by the chip: matched line toward the port in parallel with
// the shorted stub j*Z_TE*tan(2*pi*d/lambda_g) formed by the back wall.
// Z_L = Z_TE*jT/(1+jT). Exactly at d = n*lambda_g/2 the chip sits at a node:
// Z_L = 0 and the result is tagged uncoupled.
LoadImpedance load_impedance(const WaveguideSpec& wg, const PlacementSpec& placement, double f);

struct CouplingCapacitance {
  double value = 0.0;       // F
  bool beyond_cap = false;  // pad_length exceeds the analytic validity cap
};

// C_c = coupling_slope * pad_length; tagged when beyond the analytic cap.
CouplingCapacitance antenna_coupling_capacitance(const AntennaSpec& ant);

struct CouplingQ {
  double q = 0.0;  // +inf when uncoupled
  double coupling_capacitance = 0.0;  // F
  LoadImpedance load;
  bool uncoupled = false;
  bool beyond_cap = false;
};

// Q = (Z_c / Re(Z_L)) * (C / C_c)^2. Only the resistive part of the load
// (dissipation into the propagating mode) sets the coupling; Im(Z_L) is
// carried in `load` for frequency-pulling diagnostics.
CouplingQ coupling_q(const CircuitParams& cp, FluxBias flux, const WaveguideSpec& wg,
                     const AntennaSpec& ant, const PlacementSpec& placement, double f);

// Coupling Q with the resonator retuned to each probe frequency (flux chosen
// so f0 = f): the overlay behind fixed-geometry Q-versus-frequency curves.
CouplingQ coupling_q_at_frequency(const CircuitParams& cp, const WaveguideSpec& wg,
                                  const AntennaSpec& ant, const PlacementSpec& placement,
                                  double f);

// Solves coupling_slope so that coupling_q(...) == target_q with the antenna
// at anchor_length. Closed form: Q scales as slope^-2.
double calibrate_coupling_slope(const CircuitParams& cp, FluxBias flux, const WaveguideSpec& wg,
                                const AntennaSpec& ant_template, const PlacementSpec& placement,
                                double f, double target_q, double anchor_length);

struct SweepRow {
  double x = 0.0;  // grid value: pad length or wall distance, m
  double q = 0.0;  // +inf on uncoupled rows
  double coupling_capacitance = 0.0;            // F
  std::complex<double> load_impedance{0.0, 0.0};  // Ohm
  bool uncoupled = false;
  bool beyond_cap = false;
};

struct SweepTable {
  std::string axis;  // "pad_length_m" or "distance_m"
  double frequency = 0.0;
  std::vector<SweepRow> rows;
  std::optional<double> min_q_x;        // grid point of the Q minimum
  std::vector<double> divergence_x;     // n*lambda_g/2 node positions inside the span
};

// Q versus antenna length at fixed placement/frequency. Grid must be strictly
// increasing and positive. Parallel over grid points; the _serial variant is
// the reference implementation.
SweepTable q_vs_length_sweep(const CircuitParams& cp, FluxBias flux, const WaveguideSpec& wg,
                             const AntennaSpec& ant_template, const PlacementSpec& placement,
                             double f, std::span<const double> lengths);
SweepTable q_vs_length_sweep_serial(const CircuitParams& cp, FluxBias flux,
                                    const WaveguideSpec& wg, const AntennaSpec& ant_template,
                                    const PlacementSpec& placement, double f,
                                    std::span<const double> lengths);

// Q versus wall distance at fixed antenna/frequency. Node points are tagged
// uncoupled rather than excluded; divergence positions are annotated.
SweepTable q_vs_distance_sweep(const CircuitParams& cp, FluxBias flux, const WaveguideSpec& wg,
                               const AntennaSpec& ant, double f, std::span<const double> distances);
SweepTable q_vs_distance_sweep_serial(const CircuitParams& cp, FluxBias flux,
                                      const WaveguideSpec& wg, const AntennaSpec& ant, double f,
                                      std::span<const double> distances);

}  // namespace jpa
