#pragma once

// CSV and JSON output. Reals are written with 17 significant digits so that
// every value parses back to the same double.

#include <cstdio>
#include <fstream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "lls/accumulator.hpp"
#include "lls/histogram.hpp"
#include "lls/spectrum.hpp"

namespace lls {

inline constexpr const char* code_version = "lls-lab 1.0.0";

inline std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_values_csv(std::ostream& out, std::span<const double> values) {
  for (double v : values) out << format17(v) << '\n';
}

/// Rows (sample, index, value) for a batch of circular spectra.
inline void write_spectra_csv(std::ostream& out, std::span<const CircularSpectrum> spectra) {
  out << "sample,index,angle\n";
  for (std::size_t s = 0; s < spectra.size(); ++s) {
    const auto a = spectra[s].angles();
    for (std::size_t k = 0; k < a.size(); ++k) out << s << ',' << k << ',' << format17(a[k]) << '\n';
  }
}

inline void write_stats_csv(std::ostream& out, const SpacingStats& st) {
  out << "ell,mean,stderr,ci99,count\n";
  for (std::size_t l = 0; l <= st.max_order(); ++l)
    out << l << ',' << format17(st.mean(l)) << ',' << format17(st.std_error(l)) << ',' << format17(st.ci99(l)) << ','
        << st.count() << '\n';
}

/// Rows (bin_left, density).
inline void write_histogram_csv(std::ostream& out, const Histogram& h, std::span<const double> density) {
  out << "bin_left,density\n";
  for (std::size_t k = 0; k < h.bins(); ++k) out << format17(h.left(k)) << ',' << format17(density[k]) << '\n';
}

/// Two-column table with a header.
inline void write_table_csv(std::ostream& out, const std::string& x, const std::string& y, std::span<const double> xs,
                            std::span<const double> ys) {
  out << x << ',' << y << '\n';
  for (std::size_t k = 0; k < xs.size(); ++k) out << format17(xs[k]) << ',' << format17(ys[k]) << '\n';
}

inline nlohmann::json to_json(const Estimate& e) { return {{"value", e.value}, {"stderr", e.se}, {"ci99", e.ci99()}}; }

inline nlohmann::json to_json(const SpacingStats& st) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t l = 0; l <= st.max_order(); ++l)
    rows.push_back({{"ell", l}, {"mean", st.mean(l)}, {"stderr", st.std_error(l)}, {"ci99", st.ci99(l)}});
  return {{"count", st.count()}, {"rejected", st.rejected()}, {"discarded", st.discarded()}, {"means", rows}};
}

inline nlohmann::json to_json(std::span<const Estimate> es) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& e : es) a.push_back(to_json(e));
  return a;
}

/// Writes `text` to `path`, throwing on failure.
inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw Error("write to '" + path + "' failed");
}

}  // namespace lls
