#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "jpa/trace.hpp"
#include "jpa/waveguide.hpp"

namespace jpa {

// Plain comma-separated table with a mandatory header row. Cells are kept as
// strings; numeric cells are written with exact round-trip formatting. No
// quoting: cells must not contain commas or newlines.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

Table read_table(std::istream& in, const std::string& name = "<stream>");
Table read_table_file(const std::string& path);
void write_table(const Table& table, std::ostream& out);
void write_table_file(const Table& table, const std::string& path);

// Typed readers. Schemas are fixed by header names:
//   tuning curve: (flux, f0_Hz) or (current_A, f0_Hz)
//   reflection:   (f_Hz, re, im)
// Blank or non-numeric cells are rejected with their line number; a missing
// column is named in the error.
TuningCurveData read_tuning_csv(std::istream& in, const std::string& name = "<stream>");
TuningCurveData read_tuning_csv_file(const std::string& path);
ReflectionTrace read_reflection_csv(std::istream& in, const std::string& name = "<stream>");
ReflectionTrace read_reflection_csv_file(const std::string& path);

void write_tuning_csv(const TuningCurveData& data, std::ostream& out);
void write_reflection_csv(const ReflectionTrace& trace, std::ostream& out);

// Sweep tables serialize as (grid value, q, extra columns, tags) where tags
// is a semicolon-joined list ("uncoupled", "beyond_cap").
Table to_table(const SweepTable& sweep);

}  // namespace jpa
