#pragma once

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace spiralflow {

/// Minimal RFC-4180 CSV writer with a fixed numeric format so that reruns of
/// the same configuration produce byte-identical files.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open for writing: " + path);
  }

  static std::string field(const std::string& s) {
    bool needs_quote = s.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs_quote) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    q += '"';
    return q;
  }

  static std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
  }

  static std::string num(long v) { return std::to_string(v); }
  static std::string num(int v) { return std::to_string(v); }

  void row(std::initializer_list<std::string> fields) {
    bool first = true;
    for (const std::string& f : fields) {
      if (!first) out_ << ',';
      out_ << field(f);
      first = false;
    }
    out_ << "\r\n";
  }

 private:
  std::ofstream out_;
};

}  // namespace spiralflow
