#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace augdg {

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// CSV with a leading '#'-prefixed JSON metadata line.  Deterministic for a
/// fixed (config, seed): no timestamps or machine identifiers go in here.
struct CsvTable {
  std::string meta_json;  // without the leading '#'
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(const std::vector<double>& vals) {
    std::vector<std::string> r;
    r.reserve(vals.size());
    for (double v : vals) r.push_back(format_double(v));
    rows.push_back(std::move(r));
  }
  void add_row(std::vector<std::string> r) { rows.push_back(std::move(r)); }

  std::string to_string() const {
    std::string out;
    if (!meta_json.empty()) out += "# " + meta_json + "\n";
    for (size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
    out += "\n";
    for (const auto& r : rows) {
      for (size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + r[i];
      out += "\n";
    }
    return out;
  }

  void write(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << to_string();
  }
};

}  // namespace augdg
