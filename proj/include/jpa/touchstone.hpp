#pragma once

#include <iosfwd>
#include <string>

#include "jpa/trace.hpp"

namespace jpa {

// Touchstone v1 one-port (.s1p) options line: "# <unit> S <format> R <ohms>".
struct TouchstoneOptions {
  std::string frequency_unit = "HZ";  // HZ | KHZ | MHZ | GHZ
  std::string format = "RI";          // RI | MA | DB
  double reference_ohms = 50.0;

  void validate() const;
};

struct TouchstoneFile {
  ReflectionTrace trace;  // frequencies normalized to Hz
  TouchstoneOptions options;
};

// Reads a one-port Touchstone file: '!' comments, one optional option line,
// whitespace-separated data rows. Rows with more than (1 + 2) columns are
// rejected with the inferred port count. Frequencies must increase strictly.
TouchstoneFile read_touchstone(std::istream& in, const std::string& name = "<stream>");
TouchstoneFile read_touchstone_file(const std::string& path);

// Writes with full double round-trip precision; values are converted into
// the requested unit/format so read(write(t)) == t to 1e-12 relative.
void write_touchstone(const ReflectionTrace& trace, std::ostream& out,
                      const TouchstoneOptions& options = {});
void write_touchstone_file(const ReflectionTrace& trace, const std::string& path,
                           const TouchstoneOptions& options = {});

}  // namespace jpa
