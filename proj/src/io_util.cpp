#include "jpa/io_util.hpp"

#include <unistd.h>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <system_error>

namespace jpa {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path dir = target.parent_path().empty() ? fs::path(".") : target.parent_path();
  std::error_code ec;
  fs::create_directories(dir, ec);  // best effort; the open below reports failures

  fs::path tmp = dir / (target.filename().string() + ".tmp." +
                        std::to_string(static_cast<unsigned long>(::getpid())));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw parse_error("cannot open for writing", tmp.string(), 0);
    out << content;
    out.flush();
    if (!out) throw parse_error("write failed", tmp.string(), 0);
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw parse_error("rename failed: " + ec.message(), path, 0);
  }
}

}  // namespace jpa
