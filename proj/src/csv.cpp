#include "jpa/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "jpa/io_util.hpp"

namespace jpa {

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string cell = line.substr(start, comma - start);
    // Trim spaces and a trailing CR from DOS line endings.
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\r' || cell.back() == '\t')) {
      cell.pop_back();
    }
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.erase(0, 1);
    cells.push_back(std::move(cell));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

double parse_cell(const std::string& cell, const std::string& column, const std::string& name,
                  int line_no) {
  if (cell.empty()) {
    throw parse_error("blank cell in column '" + column + "'", name, line_no);
  }
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || std::isnan(v)) {
    throw parse_error("non-numeric cell '" + cell + "' in column '" + column + "'", name,
                      line_no);
  }
  return v;
}

std::size_t find_column(const Table& t, const std::string& column, const std::string& name) {
  const auto it = std::find(t.header.begin(), t.header.end(), column);
  if (it == t.header.end()) {
    throw parse_error("missing required column '" + column + "'", name, 1);
  }
  return static_cast<std::size_t>(it - t.header.begin());
}

}  // namespace

Table read_table(std::istream& in, const std::string& name) {
  Table table;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> cells = split_row(line);
    if (table.header.empty()) {
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw parse_error("ragged row: expected " + std::to_string(table.header.size()) +
                            " cells, got " + std::to_string(cells.size()),
                        name, line_no);
    }
    table.rows.push_back(std::move(cells));
  }
  if (table.header.empty()) throw parse_error("empty CSV: no header row", name, line_no);
  return table;
}

Table read_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open file", path, 0);
  return read_table(in, path);
}

void write_table(const Table& table, std::ostream& out) {
  if (table.header.empty()) throw validation_error("cannot write a CSV without a header");
  for (std::size_t k = 0; k < table.header.size(); ++k) {
    out << (k ? "," : "") << table.header[k];
  }
  out << "\n";
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) {
      throw validation_error("ragged table row cannot be written");
    }
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << row[k];
    out << "\n";
  }
}

void write_table_file(const Table& table, const std::string& path) {
  std::ostringstream oss;
  write_table(table, oss);
  write_file_atomic(path, oss.str());
}

TuningCurveData read_tuning_csv(std::istream& in, const std::string& name) {
  const Table t = read_table(in, name);
  TuningCurveData data;
  std::size_t bias_col = 0;
  if (std::find(t.header.begin(), t.header.end(), "flux") != t.header.end()) {
    data.flux_mode = true;
    bias_col = find_column(t, "flux", name);
  } else if (std::find(t.header.begin(), t.header.end(), "current_A") != t.header.end()) {
    data.flux_mode = false;
    bias_col = find_column(t, "current_A", name);
  } else {
    throw parse_error("missing required column 'flux' (or 'current_A')", name, 1);
  }
  const std::size_t f_col = find_column(t, "f0_Hz", name);
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    const int line_no = static_cast<int>(k) + 2;  // 1-based, after the header
    data.bias.push_back(parse_cell(t.rows[k][bias_col], t.header[bias_col], name, line_no));
    data.frequency.push_back(parse_cell(t.rows[k][f_col], "f0_Hz", name, line_no));
  }
  data.validate();
  return data;
}

TuningCurveData read_tuning_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open file", path, 0);
  return read_tuning_csv(in, path);
}

ReflectionTrace read_reflection_csv(std::istream& in, const std::string& name) {
  const Table t = read_table(in, name);
  const std::size_t f_col = find_column(t, "f_Hz", name);
  const std::size_t re_col = find_column(t, "re", name);
  const std::size_t im_col = find_column(t, "im", name);
  ReflectionTrace trace;
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    const int line_no = static_cast<int>(k) + 2;
    trace.frequency.push_back(parse_cell(t.rows[k][f_col], "f_Hz", name, line_no));
    trace.reflection.emplace_back(parse_cell(t.rows[k][re_col], "re", name, line_no),
                                  parse_cell(t.rows[k][im_col], "im", name, line_no));
  }
  trace.validate();
  return trace;
}

ReflectionTrace read_reflection_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open file", path, 0);
  return read_reflection_csv(in, path);
}

void write_tuning_csv(const TuningCurveData& data, std::ostream& out) {
  Table t;
  t.header = {data.flux_mode ? "flux" : "current_A", "f0_Hz"};
  for (std::size_t k = 0; k < data.bias.size(); ++k) {
    t.rows.push_back({format_double(data.bias[k]), format_double(data.frequency[k])});
  }
  write_table(t, out);
}

void write_reflection_csv(const ReflectionTrace& trace, std::ostream& out) {
  Table t;
  t.header = {"f_Hz", "re", "im"};
  for (std::size_t k = 0; k < trace.frequency.size(); ++k) {
    t.rows.push_back({format_double(trace.frequency[k]),
                      format_double(trace.reflection[k].real()),
                      format_double(trace.reflection[k].imag())});
  }
  write_table(t, out);
}

Table to_table(const SweepTable& sweep) {
  Table t;
  t.header = {sweep.axis, "q", "coupling_capacitance_F", "re_load_Ohm", "im_load_Ohm", "tags"};
  for (const SweepRow& row : sweep.rows) {
    std::string tags;
    if (row.uncoupled) tags = "uncoupled";
    if (row.beyond_cap) tags += tags.empty() ? "beyond_cap" : ";beyond_cap";
    t.rows.push_back({format_double(row.x), format_double(row.q),
                      format_double(row.coupling_capacitance),
                      format_double(row.load_impedance.real()),
                      format_double(row.load_impedance.imag()), tags});
  }
  return t;
}

}  // namespace jpa
