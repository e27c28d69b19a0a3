#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace augarch {

/// Renders a double with 17 significant digits ("." decimal separator,
/// locale-independent); round-trips bit-exactly through strtod.
inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

/// Minimal CSV writer: mandatory header row, 17-significant-digit numbers.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open for writing: " + path);
    columns_ = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i > 0) out_ << ',';
      out_ << header[i];
    }
    out_ << '\n';
  }

  void row(std::initializer_list<double> values) {
    if (values.size() != columns_) throw std::logic_error("CsvWriter: column count mismatch");
    std::size_t i = 0;
    for (double v : values) {
      if (i++ > 0) out_ << ',';
      out_ << format_g17(v);
    }
    out_ << '\n';
  }

  void row_strings(std::initializer_list<std::string> values) {
    if (values.size() != columns_) throw std::logic_error("CsvWriter: column count mismatch");
    std::size_t i = 0;
    for (const auto& v : values) {
      if (i++ > 0) out_ << ',';
      out_ << v;
    }
    out_ << '\n';
  }

  void close() { out_.close(); }

 private:
  std::ofstream out_;
  std::size_t columns_ = 0;
};

/// FNV-1a 64-bit hash of a file's bytes, as a hex string.
inline std::string fnv1a_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for hashing: " + path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[65536];
  while (in) {
    in.read(buf, sizeof(buf));
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  char hex[20];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
  return std::string(hex);
}

}  // namespace augarch
