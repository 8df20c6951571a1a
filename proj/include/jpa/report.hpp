#pragma once

#include <string>

#include "json.hpp"

#include "jpa/config.hpp"
#include "jpa/fit.hpp"
#include "jpa/lsq.hpp"

namespace jpa {

using ordered_json = nlohmann::ordered_json;

// Root report object with the fixed meta block. Reports carry no timestamps:
// the same config and seed must produce byte-identical output.
ordered_json make_report(const std::string& command, uint64_t seed);

// JSON has no NaN/Inf; these encode them as the strings "nan"/"inf"/"-inf".
ordered_json json_number(double v);
ordered_json json_number_array(const std::vector<double>& v);

// Fully resolved config echo (defaults applied), for reproducibility.
ordered_json config_echo(const DesignConfig& cfg);

ordered_json to_json(const FitResult& fit, const std::vector<std::string>& names);
ordered_json to_json(const FluxFitResult& fit);
ordered_json to_json(const ReflectionFitResult& fit);

// format is "json" or "csv". JSON is pretty-printed with a trailing newline;
// CSV flattens the tree into key,value rows (arrays indexed, paths dotted).
std::string render_report(const ordered_json& report, const std::string& format);

// Writes to the path atomically, or to stdout when path is empty.
void emit_report(const ordered_json& report, const std::string& out_path,
                 const std::string& format);

}  // namespace jpa
