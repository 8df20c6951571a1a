#include "jpa/touchstone.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <vector>

#include "jpa/io_util.hpp"

namespace jpa {

namespace {

double unit_multiplier(const std::string& unit) {
  if (unit == "HZ") return 1.0;
  if (unit == "KHZ") return 1e3;
  if (unit == "MHZ") return 1e6;
  if (unit == "GHZ") return 1e9;
  throw validation_error("unknown Touchstone frequency unit: " + unit);
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

bool parse_double(const std::string& tok, double& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

std::complex<double> decode(double a, double b, const std::string& format) {
  if (format == "RI") return {a, b};
  if (format == "MA") return std::polar(a, b * std::numbers::pi / 180.0);
  // DB: a is 20*log10(magnitude), b the angle in degrees.
  return std::polar(std::pow(10.0, a / 20.0), b * std::numbers::pi / 180.0);
}

void encode(const std::complex<double>& g, const std::string& format, double& a, double& b) {
  if (format == "RI") {
    a = g.real();
    b = g.imag();
  } else if (format == "MA") {
    a = std::abs(g);
    b = std::arg(g) * 180.0 / std::numbers::pi;
  } else {
    a = 20.0 * std::log10(std::abs(g));
    b = std::arg(g) * 180.0 / std::numbers::pi;
  }
}

}  // namespace

void TouchstoneOptions::validate() const {
  (void)unit_multiplier(frequency_unit);
  if (format != "RI" && format != "MA" && format != "DB") {
    throw validation_error("unknown Touchstone format: " + format);
  }
  if (!(reference_ohms > 0.0)) {
    throw validation_error("Touchstone reference resistance must be positive");
  }
}

TouchstoneFile read_touchstone(std::istream& in, const std::string& name) {
  TouchstoneFile file;
  bool saw_options = false;
  std::string line;
  int line_no = 0;
  std::vector<double> freqs;
  std::vector<std::complex<double>> values;

  while (std::getline(in, line)) {
    ++line_no;
    // Strip comments ('!' to end of line) and surrounding whitespace.
    if (const auto bang = line.find('!'); bang != std::string::npos) line.erase(bang);
    std::istringstream ls(line);
    std::vector<std::string> tokens;
    for (std::string tok; ls >> tok;) tokens.push_back(tok);
    if (tokens.empty()) continue;

    if (tokens[0] == "#") {
      if (saw_options) throw parse_error("duplicate option line", name, line_no);
      if (!freqs.empty()) throw parse_error("option line after data", name, line_no);
      saw_options = true;
      // "# [unit] [S] [format] [R n]" with positional defaults per v1.
      std::size_t k = 1;
      if (k < tokens.size() && upper(tokens[k]) != "S" && upper(tokens[k]) != "R") {
        file.options.frequency_unit = upper(tokens[k++]);
      }
      if (k < tokens.size() && upper(tokens[k]) == "S") {
        ++k;
      } else if (k < tokens.size() && upper(tokens[k]) != "R" &&
                 (upper(tokens[k]) == "Y" || upper(tokens[k]) == "Z" ||
                  upper(tokens[k]) == "H" || upper(tokens[k]) == "G")) {
        throw parse_error("only S-parameter files supported, got type " + tokens[k], name,
                          line_no);
      }
      if (k < tokens.size() && upper(tokens[k]) != "R") {
        file.options.format = upper(tokens[k++]);
      }
      if (k < tokens.size()) {
        if (upper(tokens[k]) != "R" || k + 1 >= tokens.size()) {
          throw parse_error("malformed option line near '" + tokens[k] + "'", name, line_no);
        }
        double r = 0.0;
        if (!parse_double(tokens[k + 1], r)) {
          throw parse_error("bad reference resistance '" + tokens[k + 1] + "'", name, line_no);
        }
        file.options.reference_ohms = r;
        k += 2;
      }
      if (k != tokens.size()) {
        throw parse_error("trailing tokens on option line", name, line_no);
      }
      try {
        file.options.validate();
      } catch (const validation_error& e) {
        throw parse_error(e.what(), name, line_no);
      }
      continue;
    }

    if (tokens.size() != 3) {
      // One-port rows are (f, a, b); an n-port row carries 1 + 2n^2 numbers.
      std::string detail = "expected 3 columns, got " + std::to_string(tokens.size());
      const double n_est = std::sqrt((static_cast<double>(tokens.size()) - 1.0) / 2.0);
      if (tokens.size() > 3 && n_est == std::floor(n_est)) {
        detail += " (looks like " + std::to_string(static_cast<int>(n_est)) +
                  "-port data; only one-port is supported)";
      }
      throw parse_error(detail, name, line_no);
    }
    double f = 0.0, a = 0.0, b = 0.0;
    if (!parse_double(tokens[0], f) || !parse_double(tokens[1], a) ||
        !parse_double(tokens[2], b)) {
      throw parse_error("non-numeric data row", name, line_no);
    }
    freqs.push_back(f * unit_multiplier(file.options.frequency_unit));
    values.push_back(decode(a, b, file.options.format));
  }

  if (freqs.empty()) throw parse_error("no data rows", name, line_no);
  for (std::size_t k = 1; k < freqs.size(); ++k) {
    if (freqs[k] <= freqs[k - 1]) {
      throw parse_error("frequencies must be strictly increasing", name, 0);
    }
  }
  file.trace.frequency = std::move(freqs);
  file.trace.reflection = std::move(values);
  return file;
}

TouchstoneFile read_touchstone_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open file", path, 0);
  return read_touchstone(in, path);
}

void write_touchstone(const ReflectionTrace& trace, std::ostream& out,
                      const TouchstoneOptions& options) {
  options.validate();
  if (trace.frequency.size() != trace.reflection.size() || trace.frequency.empty()) {
    throw validation_error("cannot write an empty or ragged trace");
  }
  const double mult = unit_multiplier(options.frequency_unit);
  out << "# " << options.frequency_unit << " S " << options.format << " R "
      << format_double(options.reference_ohms) << "\n";
  for (std::size_t k = 0; k < trace.frequency.size(); ++k) {
    double a = 0.0, b = 0.0;
    encode(trace.reflection[k], options.format, a, b);
    out << format_double(trace.frequency[k] / mult) << " " << format_double(a) << " "
        << format_double(b) << "\n";
  }
}

void write_touchstone_file(const ReflectionTrace& trace, const std::string& path,
                           const TouchstoneOptions& options) {
  std::ostringstream oss;
  write_touchstone(trace, oss, options);
  write_file_atomic(path, oss.str());
}

}  // namespace jpa
