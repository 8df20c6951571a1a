#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jpa/errors.hpp"

namespace jpa {

// Minimal TOML-style key-value config reader: [section] headers, key = value
// pairs, '#' comments. Values: numbers, booleans, double-quoted strings, and
// flat arrays of numbers. No nesting, no multiline values — deliberately a
// subset, enough for a self-describing run configuration.
class ConfigDoc {
 public:
  struct Value {
    enum class Kind { number, boolean, string, number_array } kind;
    double num = 0.0;
    bool boolean = false;
    std::string str;
    std::vector<double> array;
    int line = 0;
  };

  static ConfigDoc parse(std::istream& in, const std::string& name = "<stream>");
  static ConfigDoc parse_file(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;

  // Typed getters throw parse_error (with file/line context) on a type
  // mismatch; the _or variants supply defaults for absent keys.
  double number(const std::string& section, const std::string& key) const;
  double number_or(const std::string& section, const std::string& key, double fallback) const;
  bool boolean_or(const std::string& section, const std::string& key, bool fallback) const;
  std::string string_or(const std::string& section, const std::string& key,
                        const std::string& fallback) const;
  std::vector<double> number_array_or(const std::string& section, const std::string& key,
                                      const std::vector<double>& fallback) const;

  // Dotted-path convenience forms ("section.key"), matching keys() output.
  bool has(const std::string& dotted) const;
  double number(const std::string& dotted) const;
  double number_or(const std::string& dotted, double fallback) const;
  bool boolean_or(const std::string& dotted, bool fallback) const;
  std::string string_or(const std::string& dotted, const std::string& fallback) const;
  std::vector<double> number_array_or(const std::string& dotted,
                                      const std::vector<double>& fallback) const;

  // All keys actually present, as "section.key" — used to reject typos.
  std::vector<std::string> keys() const;

  const std::string& name() const { return name_; }

 private:
  const Value* find(const std::string& section, const std::string& key) const;
  std::map<std::string, std::map<std::string, Value>> sections_;
  std::string name_;
};

}  // namespace jpa
