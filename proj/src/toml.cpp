#include "jpa/toml.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <utility>

namespace jpa {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  std::size_t b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

bool parse_number(const std::string& tok, double& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

// Strips a '#' comment, but not inside a quoted string.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    if (line[k] == '"') quoted = !quoted;
    if (line[k] == '#' && !quoted) return line.substr(0, k);
  }
  return line;
}

}  // namespace

ConfigDoc ConfigDoc::parse(std::istream& in, const std::string& name) {
  ConfigDoc doc;
  doc.name_ = name;
  std::string section;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(strip_comment(line));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw parse_error("unterminated section header", name, line_no);
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw parse_error("empty section name", name, line_no);
      doc.sections_[section];  // record even if empty
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw parse_error("expected 'key = value', got '" + line + "'", name, line_no);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string raw = trim(line.substr(eq + 1));
    if (key.empty()) throw parse_error("empty key", name, line_no);
    if (raw.empty()) throw parse_error("empty value for key '" + key + "'", name, line_no);
    if (doc.sections_[section].count(key)) {
      throw parse_error("duplicate key '" + key + "'", name, line_no);
    }

    Value v;
    v.line = line_no;
    if (raw.front() == '"') {
      if (raw.size() < 2 || raw.back() != '"') {
        throw parse_error("unterminated string for key '" + key + "'", name, line_no);
      }
      v.kind = Value::Kind::string;
      v.str = raw.substr(1, raw.size() - 2);
    } else if (raw == "true" || raw == "false") {
      v.kind = Value::Kind::boolean;
      v.boolean = raw == "true";
    } else if (raw.front() == '[') {
      if (raw.back() != ']') throw parse_error("unterminated array", name, line_no);
      v.kind = Value::Kind::number_array;
      std::istringstream items(raw.substr(1, raw.size() - 2));
      std::string item;
      while (std::getline(items, item, ',')) {
        item = trim(item);
        if (item.empty()) throw parse_error("empty array element", name, line_no);
        double num = 0.0;
        if (!parse_number(item, num)) {
          throw parse_error("non-numeric array element '" + item + "'", name, line_no);
        }
        v.array.push_back(num);
      }
    } else {
      v.kind = Value::Kind::number;
      if (!parse_number(raw, v.num)) {
        throw parse_error("cannot parse value '" + raw + "' for key '" + key + "'", name,
                          line_no);
      }
    }
    doc.sections_[section].emplace(key, std::move(v));
  }
  return doc;
}

ConfigDoc ConfigDoc::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open file", path, 0);
  return parse(in, path);
}

const ConfigDoc::Value* ConfigDoc::find(const std::string& section,
                                        const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  const auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

bool ConfigDoc::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

double ConfigDoc::number(const std::string& section, const std::string& key) const {
  const Value* v = find(section, key);
  if (!v) throw parse_error("missing required key '" + section + "." + key + "'", name_, 0);
  if (v->kind != Value::Kind::number) {
    throw parse_error("key '" + section + "." + key + "' must be a number", name_, v->line);
  }
  return v->num;
}

double ConfigDoc::number_or(const std::string& section, const std::string& key,
                            double fallback) const {
  const Value* v = find(section, key);
  if (!v) return fallback;
  if (v->kind != Value::Kind::number) {
    throw parse_error("key '" + section + "." + key + "' must be a number", name_, v->line);
  }
  return v->num;
}

bool ConfigDoc::boolean_or(const std::string& section, const std::string& key,
                           bool fallback) const {
  const Value* v = find(section, key);
  if (!v) return fallback;
  if (v->kind != Value::Kind::boolean) {
    throw parse_error("key '" + section + "." + key + "' must be true/false", name_, v->line);
  }
  return v->boolean;
}

std::string ConfigDoc::string_or(const std::string& section, const std::string& key,
                                 const std::string& fallback) const {
  const Value* v = find(section, key);
  if (!v) return fallback;
  if (v->kind != Value::Kind::string) {
    throw parse_error("key '" + section + "." + key + "' must be a quoted string", name_,
                      v->line);
  }
  return v->str;
}

std::vector<double> ConfigDoc::number_array_or(const std::string& section, const std::string& key,
                                               const std::vector<double>& fallback) const {
  const Value* v = find(section, key);
  if (!v) return fallback;
  if (v->kind != Value::Kind::number_array) {
    throw parse_error("key '" + section + "." + key + "' must be a numeric array", name_,
                      v->line);
  }
  return v->array;
}

namespace {
std::pair<std::string, std::string> split_dotted(const std::string& dotted) {
  const auto dot = dotted.find('.');
  if (dot == std::string::npos) return {"", dotted};
  return {dotted.substr(0, dot), dotted.substr(dot + 1)};
}
}  // namespace

bool ConfigDoc::has(const std::string& dotted) const {
  const auto [s, k] = split_dotted(dotted);
  return has(s, k);
}

double ConfigDoc::number(const std::string& dotted) const {
  const auto [s, k] = split_dotted(dotted);
  return number(s, k);
}

double ConfigDoc::number_or(const std::string& dotted, double fallback) const {
  const auto [s, k] = split_dotted(dotted);
  return number_or(s, k, fallback);
}

bool ConfigDoc::boolean_or(const std::string& dotted, bool fallback) const {
  const auto [s, k] = split_dotted(dotted);
  return boolean_or(s, k, fallback);
}

std::string ConfigDoc::string_or(const std::string& dotted, const std::string& fallback) const {
  const auto [s, k] = split_dotted(dotted);
  return string_or(s, k, fallback);
}

std::vector<double> ConfigDoc::number_array_or(const std::string& dotted,
                                               const std::vector<double>& fallback) const {
  const auto [s, k] = split_dotted(dotted);
  return number_array_or(s, k, fallback);
}

std::vector<std::string> ConfigDoc::keys() const {
  std::vector<std::string> out;
  for (const auto& [section, kv] : sections_) {
    for (const auto& [key, value] : kv) {
      out.push_back(section.empty() ? key : section + "." + key);
    }
  }
  return out;
}

}  // namespace jpa
