#pragma once

#include <string>

#include "jpa/errors.hpp"

namespace jpa {

// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double v);

// Writes to a temp file in the target directory, then renames into place, so
// readers never observe a partial file and concurrent runs cannot interleave.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace jpa
