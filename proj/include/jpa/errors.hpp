#pragma once

#include <stdexcept>
#include <string>

// Error taxonomy. Each class maps to one process exit code so the CLI can
// translate failures uniformly: validation 2, parse 3, non-convergence 4,
// anything else 5.

namespace jpa {

// Bad physical inputs or out-of-domain requests (negative C, |flux| >= 1/2,
// frequency below cutoff, ...).
class validation_error : public std::invalid_argument {
 public:
  explicit validation_error(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed input files (Touchstone, CSV, config).
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& what, const std::string& file, int line)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
        file_(file),
        line_(line) {}
  explicit parse_error(const std::string& what) : std::runtime_error(what), line_(0) {}
  const std::string& file() const { return file_; }
  int line() const { return line_; }

 private:
  std::string file_;
  int line_ = 0;
};

// Iterative solver exhausted its budget without meeting tolerances.
class convergence_error : public std::runtime_error {
 public:
  explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 2;
inline constexpr int exit_parse = 3;
inline constexpr int exit_no_convergence = 4;
inline constexpr int exit_internal = 5;

}  // namespace jpa
