#pragma once

// Trajectory CSV export/import and minimal SVG line plots.
//
// CSV layout: a header row "t", then re_y_<j>,im_y_<j>,a_<j>,b_<j> for each
// neuron j (0-based), then any extra named columns. Values are written with
// 17 significant digits so a load reproduces every double exactly.

#include "organics/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

namespace organics::io {

class IoError : public Error {
 public:
  using Error::Error;
};

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw IoError("no column named '" + name + "'");
    return static_cast<std::size_t>(it - columns.begin());
  }
};

struct ExtraColumn {
  std::string name;
  std::vector<double> values;  // one per trajectory sample
};

inline std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw IoError("cannot parse number '" + s + "'");
  }
  return v;
}

inline CsvTable trajectory_table(const std::vector<double>& times, const std::vector<CVec>& y,
                                 const std::vector<RVec>& a, const std::vector<RVec>& b,
                                 const std::vector<ExtraColumn>& extra = {}) {
  const std::size_t len = times.size();
  detail::require_dims(y.size() == len && a.size() == len && b.size() == len,
                       "trajectory_table: inconsistent sample counts");
  for (const auto& e : extra)
    detail::require_dims(e.values.size() == len, "trajectory_table: extra column '" + e.name + "' length");
  const Eigen::Index n = len ? y.front().size() : 0;

  CsvTable t;
  t.columns.push_back("t");
  for (Eigen::Index j = 0; j < n; ++j) {
    const std::string s = std::to_string(j);
    t.columns.insert(t.columns.end(), {"re_y_" + s, "im_y_" + s, "a_" + s, "b_" + s});
  }
  for (const auto& e : extra) t.columns.push_back(e.name);

  t.rows.reserve(len);
  for (std::size_t k = 0; k < len; ++k) {
    std::vector<double> row;
    row.reserve(t.columns.size());
    row.push_back(times[k]);
    for (Eigen::Index j = 0; j < n; ++j) {
      row.push_back(y[k][j].real());
      row.push_back(y[k][j].imag());
      row.push_back(a[k][j]);
      row.push_back(b[k][j]);
    }
    for (const auto& e : extra) row.push_back(e.values[k]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline CsvTable trajectory_table(const Trajectory& traj, const std::vector<ExtraColumn>& extra = {}) {
  return trajectory_table(traj.times, traj.y, traj.a, traj.b, extra);
}

inline void write_csv(std::ostream& out, const CsvTable& t) {
  for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
    out << '\n';
  }
}

inline void write_csv(const std::string& path, const CsvTable& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_csv(out, t);
  if (!out) throw IoError("write failed for '" + path + "'");
}

inline CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty CSV");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.columns.push_back(cell);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    row.reserve(t.columns.size());
    std::size_t start = 0;
    while (start <= line.size()) {
      const std::size_t end = std::min(line.find(',', start), line.size());
      row.push_back(parse_double(line.substr(start, end - start)));
      start = end + 1;
    }
    if (row.size() != t.columns.size()) throw IoError("CSV row has " + std::to_string(row.size()) +
                                                      " cells, header has " + std::to_string(t.columns.size()));
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_csv(in);
}

// Rebuilds times, y, a and b from a table in the trajectory layout.
inline Trajectory trajectory_from_table(const CsvTable& t) {
  if (t.columns.empty() || t.columns.front() != "t") throw IoError("first CSV column must be 't'");
  Eigen::Index n = 0;
  while (std::find(t.columns.begin(), t.columns.end(), "re_y_" + std::to_string(n)) != t.columns.end()) ++n;
  std::vector<std::size_t> re(n), im(n), ca(n), cb(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const std::string s = std::to_string(j);
    re[j] = t.column("re_y_" + s);
    im[j] = t.column("im_y_" + s);
    ca[j] = t.column("a_" + s);
    cb[j] = t.column("b_" + s);
  }
  Trajectory traj;
  for (const auto& row : t.rows) {
    traj.times.push_back(row[0]);
    CVec y(n);
    RVec a(n), b(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      y[j] = cplx(row[re[j]], row[im[j]]);
      a[j] = row[ca[j]];
      b[j] = row[cb[j]];
    }
    traj.y.push_back(std::move(y));
    traj.a.push_back(std::move(a));
    traj.b.push_back(std::move(b));
  }
  if (traj.times.size() > 1) traj.dt = traj.times[1] - traj.times[0];
  return traj;
}

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// Polyline plot with a frame, min/max axis labels and a legend.
inline void write_svg(const std::string& path, const std::string& title,
                      const std::vector<PlotSeries>& series, const std::string& x_label = "t (ms)") {
  constexpr double W = 800, H = 420, L = 70, R = 170, T = 40, B = 50;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (double v : s.x) { x0 = std::min(x0, v); x1 = std::max(x1, v); }
    for (double v : s.y) if (std::isfinite(v)) { y0 = std::min(y0, v); y1 = std::max(y1, v); }
  }
  if (!(x1 > x0)) { x0 = 0; x1 = 1; }
  if (!(y1 > y0)) { y0 -= 1; y1 += 1; }
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto px = [&](double v) { return L + (v - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double v) { return H - B - (v - y0) / (y1 - y0) * (H - T - B); };
  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << L << "\" y=\"24\" font-size=\"15\">" << title << "</text>\n";
  out << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  if (y0 < 0 && y1 > 0)
    out << "<line x1=\"" << L << "\" x2=\"" << W - R << "\" y1=\"" << py(0) << "\" y2=\"" << py(0)
        << "\" stroke=\"#bbb\" stroke-dasharray=\"4 3\"/>\n";
  out << "<text x=\"" << L << "\" y=\"" << H - B + 16 << "\">" << format_double(x0).substr(0, 8) << "</text>\n";
  out << "<text x=\"" << W - R << "\" y=\"" << H - B + 16 << "\" text-anchor=\"end\">"
      << format_double(x1).substr(0, 8) << "</text>\n";
  out << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << x_label
      << "</text>\n";
  out << "<text x=\"" << L - 6 << "\" y=\"" << py(y0) << "\" text-anchor=\"end\">"
      << format_double(y0).substr(0, 7) << "</text>\n";
  out << "<text x=\"" << L - 6 << "\" y=\"" << py(y1) + 10 << "\" text-anchor=\"end\">"
      << format_double(y1).substr(0, 7) << "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* color = palette[i % 10];
    // Thin long series so files stay small.
    const std::size_t stride = std::max<std::size_t>(1, s.x.size() / 2000);
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t k = 0; k < s.x.size() && k < s.y.size(); k += stride)
      if (std::isfinite(s.y[k])) out << px(s.x[k]) << ',' << py(s.y[k]) << ' ';
    out << "\"/>\n";
    const double ly = T + 14 + 16 * static_cast<double>(i);
    out << "<line x1=\"" << W - R + 10 << "\" x2=\"" << W - R + 30 << "\" y1=\"" << ly - 4 << "\" y2=\""
        << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << W - R + 36 << "\" y=\"" << ly << "\">" << s.label << "</text>\n";
  }
  out << "</svg>\n";
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace organics::io
