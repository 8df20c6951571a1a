#include "jpa/report.hpp"

#include <cmath>
#include <iostream>
#include <numbers>

#include "jpa/errors.hpp"
#include "jpa/io_util.hpp"

namespace jpa {

ordered_json json_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

ordered_json json_number_array(const std::vector<double>& v) {
  ordered_json arr = ordered_json::array();
  for (double x : v) arr.push_back(json_number(x));
  return arr;
}

namespace {

// Local aliases keep the table-building code compact.
ordered_json num(double v) { return json_number(v); }
ordered_json num_array(const std::vector<double>& v) { return json_number_array(v); }

void flatten_csv(const ordered_json& node, const std::string& path,
                 std::vector<std::pair<std::string, std::string>>& rows) {
  auto join = [&](const std::string& leaf) {
    return path.empty() ? leaf : path + "." + leaf;
  };
  if (node.is_object()) {
    for (auto it = node.begin(); it != node.end(); ++it) {
      flatten_csv(it.value(), join(it.key()), rows);
    }
  } else if (node.is_array()) {
    for (size_t i = 0; i < node.size(); ++i) {
      flatten_csv(node[i], path + "[" + std::to_string(i) + "]", rows);
    }
  } else if (node.is_number_float()) {
    rows.emplace_back(path, format_double(node.get<double>()));
  } else if (node.is_number_integer()) {
    rows.emplace_back(path, std::to_string(node.get<long long>()));
  } else if (node.is_number_unsigned()) {
    rows.emplace_back(path, std::to_string(node.get<unsigned long long>()));
  } else if (node.is_boolean()) {
    rows.emplace_back(path, node.get<bool>() ? "true" : "false");
  } else if (node.is_string()) {
    std::string s = node.get<std::string>();
    if (s.find(',') != std::string::npos || s.find('"') != std::string::npos) {
      std::string quoted = "\"";
      for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
      }
      quoted += '"';
      s = quoted;
    }
    rows.emplace_back(path, s);
  } else if (node.is_null()) {
    rows.emplace_back(path, "");
  }
}

}  // namespace

ordered_json make_report(const std::string& command, uint64_t seed) {
  ordered_json rep = ordered_json::object();
  rep["meta"] = {{"tool", "jpakit"}, {"version", "0.1.0"}, {"command", command}, {"seed", seed}};
  return rep;
}

ordered_json config_echo(const DesignConfig& cfg) {
  ordered_json j = ordered_json::object();
  j["circuit"] = {{"critical_current_A", num(cfg.circuit.critical_current)},
                  {"capacitance_F", num(cfg.circuit.capacitance)},
                  {"stray_inductance_H", num(cfg.circuit.stray_inductance)}};
  j["waveguide"] = {{"label", cfg.waveguide.label},
                    {"width_m", num(cfg.waveguide.width)},
                    {"height_m", num(cfg.waveguide.height)}};
  j["antenna"] = {{"pad_length_m", num(cfg.antenna.pad_length)},
                  {"pad_width_m", num(cfg.antenna.pad_width)},
                  {"gap_m", num(cfg.antenna.gap)},
                  {"coupling_slope_F_per_m", num(cfg.antenna.coupling_slope)},
                  {"analytic_length_cap_m", num(cfg.antenna.analytic_length_cap)}};
  if (cfg.calibrate) {
    j["antenna"]["calibrate_q"] = num(cfg.calibrate->target_q);
    j["antenna"]["calibrate_length_m"] = num(cfg.calibrate->anchor_length);
    j["antenna"]["calibrate_frequency_Hz"] = num(cfg.calibrate->frequency);
  }
  j["placement"] = ordered_json::object();
  if (cfg.placement_distance) j["placement"]["distance_m"] = num(*cfg.placement_distance);
  if (cfg.quarter_wave_at) j["placement"]["quarter_wave_at_Hz"] = num(*cfg.quarter_wave_at);
  j["design"] = {{"frequency_Hz", num(cfg.design_frequency)},
                 {"operating_flux", num(cfg.operating_flux)}};
  j["pump"] = {{"detuning_Hz", num(cfg.pump.detuning)},
               {"power_low_dBm", num(cfg.pump.power_low_dbm)},
               {"power_high_dBm", num(cfg.pump.power_high_dbm)},
               {"signal_center_Hz", num(cfg.pump.signal_center)}};
  if (cfg.pump.attenuation_db) j["pump"]["attenuation_dB"] = num(*cfg.pump.attenuation_db);
  if (cfg.pump.target_gain_db) j["pump"]["target_gain_dB"] = num(*cfg.pump.target_gain_db);
  j["noise"] = {{"system_temperature_K", num(cfg.noise.system_temperature)},
                {"added_temperature_K", num(cfg.noise.added_temperature)},
                {"resolution_bandwidth_Hz", num(cfg.noise.resolution_bandwidth)},
                {"gains_dB", num_array(cfg.noise_gains_db)},
                {"dip_width_Hz", num(cfg.dip_width)}};
  j["thresholds"] = {{"qp_feasibility", num(cfg.thresholds.qp_feasibility)},
                     {"qp_band_top", num(cfg.thresholds.qp_band_top)}};
  j["sweep"] = {{"length_min_m", num(cfg.sweep.length_min)},
                {"length_max_m", num(cfg.sweep.length_max)},
                {"length_points", cfg.sweep.length_points},
                {"distance_min_frac", num(cfg.sweep.distance_min_frac)},
                {"distance_max_frac", num(cfg.sweep.distance_max_frac)},
                {"distance_points", cfg.sweep.distance_points}};
  j["gain"] = {{"span_Hz", num(cfg.gain.span)}, {"points", cfg.gain.points}};
  j["fit"] = {{"multistart", cfg.fit.multistart}, {"max_iterations", cfg.fit.max_iterations}};
  return j;
}

ordered_json to_json(const FitResult& fit, const std::vector<std::string>& names) {
  ordered_json j = ordered_json::object();
  j["converged"] = fit.converged;
  j["iterations"] = fit.iterations;
  j["residual_norm"] = num(fit.residual_norm);
  j["condition_number"] = num(fit.condition_number);
  ordered_json params = ordered_json::object();
  for (size_t i = 0; i < fit.estimates.size(); ++i) {
    const std::string name = i < names.size() ? names[i] : "p" + std::to_string(i);
    ordered_json p = ordered_json::object();
    p["estimate"] = num(fit.estimates[i]);
    if (i < fit.std_errors.size()) p["std_error"] = num(fit.std_errors[i]);
    params[name] = p;
  }
  j["parameters"] = params;
  j["warnings"] = fit.warnings;
  return j;
}

ordered_json to_json(const FluxFitResult& fit) {
  ordered_json j = to_json(fit.base, fit.parameter_names);
  j["circuit"] = {{"critical_current_A", num(fit.circuit.critical_current)},
                  {"capacitance_F", num(fit.circuit.capacitance)},
                  {"stray_inductance_H", num(fit.circuit.stray_inductance)}};
  if (fit.parameter_names.size() == 5) {  // coil-current mode carries the flux calibration
    j["flux_per_ampere"] = num(fit.alpha);
    j["current_offset_A"] = num(fit.current_offset);
  }
  return j;
}

ordered_json to_json(const ReflectionFitResult& fit) {
  ordered_json j = to_json(fit.base, fit.parameter_names);
  j["resonance"] = {{"f0_Hz", num(fit.f0)},
                    {"kappa_c_Hz", num(fit.kappa_c / (2.0 * std::numbers::pi))},
                    {"kappa_i_Hz", num(fit.kappa_i / (2.0 * std::numbers::pi))},
                    {"q_coupling", num(fit.q_c)},
                    {"q_internal", num(fit.q_i)},
                    {"q_loaded", num(fit.q_loaded)},
                    {"delay_s", num(fit.tau)},
                    {"phase_offset_rad", num(fit.theta0)}};
  j["winding"] = {{"data_deg", num(fit.data_winding_deg)},
                  {"model_deg", num(fit.model_winding_deg)},
                  {"undercoupled", fit.undercoupled},
                  {"off_resonance", fit.off_resonance}};
  return j;
}

std::string render_report(const ordered_json& report, const std::string& format) {
  if (format == "json") {
    return report.dump(2) + "\n";
  }
  if (format == "csv") {
    std::vector<std::pair<std::string, std::string>> rows;
    flatten_csv(report, "", rows);
    std::string out = "key,value\n";
    for (const auto& [k, v] : rows) out += k + "," + v + "\n";
    return out;
  }
  throw validation_error("unknown output format '" + format + "' (expected json or csv)");
}

void emit_report(const ordered_json& report, const std::string& out_path,
                 const std::string& format) {
  const std::string text = render_report(report, format);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_file_atomic(out_path, text);
  }
}

}  // namespace jpa
