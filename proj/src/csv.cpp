#include "tofcorr/csv.hpp"

#include <cstdio>
#include <fstream>

#include "tofcorr/errors.hpp"

namespace tofcorr {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot write '" + path + "'");
  return out;
}

void write_comments(std::ofstream& out, const KeyValues& params) {
  for (const auto& [k, v] : params) out << "# " << k << " = " << v << "\n";
}

}  // namespace

void write_curve_csv(const std::string& path, const CorrelationCurve& curve,
                     const KeyValues& params) {
  auto out = open_out(path);
  write_comments(out, params);
  out << "# prescription = " << curve.prescription << "\n";
  out << "u,value\n";
  for (std::size_t i = 0; i < curve.u.size(); ++i)
    out << format_number(curve.u[i]) << "," << format_number(curve.value[i]) << "\n";
}

void write_density_csv(const std::string& path, const DensityProfile& profile,
                       const KeyValues& params) {
  auto out = open_out(path);
  write_comments(out, params);
  out << "# prescription = " << profile.prescription << "\n";
  out << "# state = " << profile.state << "\n";
  out << "x,value\n";
  for (std::size_t i = 0; i < profile.x.size(); ++i)
    out << format_number(profile.x[i]) << "," << format_number(profile.value[i]) << "\n";
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows,
                     const KeyValues& params) {
  auto out = open_out(path);
  write_comments(out, params);
  out << "V2,secondary_trace,secondary_povm,energy,seed,status\n";
  for (const auto& r : rows) {
    out << format_number(r.v2) << ",";
    if (r.ok) {
      out << format_number(r.secondary_trace) << "," << format_number(r.secondary_povm) << ","
          << format_number(r.energy);
    } else {
      out << ",,";
    }
    out << "," << r.seed << "," << (r.ok ? "ok" : "failed") << "\n";
  }
}

void write_peaks_report(const std::string& path, const PeakReport& report,
                        const KeyValues& params) {
  auto out = open_out(path);
  write_comments(out, params);
  out << "threshold = " << format_number(report.threshold) << "\n";
  out << "grid_points = " << report.grid_points << "\n";
  out << "main_peaks = " << report.main_peaks.size() << "\n";
  for (const auto& p : report.main_peaks)
    out << "main " << format_number(p.u) << " " << format_number(p.height) << "\n";
  out << "secondary_peaks = " << report.secondary_peaks.size() << "\n";
  for (const auto& p : report.secondary_peaks)
    out << "secondary " << format_number(p.u) << " " << format_number(p.height) << "\n";
  out << "max_secondary_height = " << format_number(report.max_secondary_height()) << "\n";
}

void write_manifest(const std::string& path, const KeyValues& params) {
  auto out = open_out(path);
  for (const auto& [k, v] : params) out << k << " = " << v << "\n";
}

}  // namespace tofcorr
