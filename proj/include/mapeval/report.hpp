#pragma once

// Report bundle plus rendering: aligned/markdown MAP tables, multi-algorithm
// comparison, and self-contained SVG line charts for the robustness and
// generality curves. All output is byte-deterministic for identical inputs.

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mapeval/errors.hpp"
#include "mapeval/format.hpp"
#include "mapeval/map_metric.hpp"
#include "mapeval/version.hpp"

namespace mapeval {

struct BundleMeta {
  std::string label;
  std::string dataset;     // where the scores came from
  std::string thresholds;  // threshold provenance
  std::string config;      // free-form config echo
  std::string tool_version{kToolVersion};
};

struct ReportBundle {
  MapMatrix matrix;
  MapCurves curves;
  double map_avg = 0.0;
  BundleMeta meta;
};

inline ReportBundle make_report_bundle(MapMatrix matrix, BundleMeta meta) {
  ReportBundle b;
  b.curves = mapeval::curves(matrix);
  b.map_avg = mapeval::map_avg(matrix);
  b.matrix = std::move(matrix);
  b.meta = std::move(meta);
  return b;
}

inline void write_summary_json(const ReportBundle& b, std::ostream& out) {
  const auto& m = b.matrix;
  out << "{\"label\":" << json_quote(b.meta.label) << ",\"r_max\":" << m.r_max
      << ",\"c_max\":" << m.c_max << ",\"morph_count\":" << m.morph_count
      << ",\"map_avg\":" << fmt_g17(b.map_avg) << ",\"matrix\":[";
  for (int r = 1; r <= m.r_max; ++r) {
    if (r > 1) out << ',';
    out << '[';
    for (int c = 1; c <= m.c_max; ++c) {
      if (c > 1) out << ',';
      out << fmt_g17(m.at(r, c));
    }
    out << ']';
  }
  out << "],\"robustness\":[";
  for (std::size_t i = 0; i < b.curves.robustness.size(); ++i) {
    if (i > 0) out << ',';
    out << fmt_g17(b.curves.robustness[i]);
  }
  out << "],\"generality\":[";
  for (std::size_t i = 0; i < b.curves.generality.size(); ++i) {
    if (i > 0) out << ',';
    out << fmt_g17(b.curves.generality[i]);
  }
  out << "],\"metadata\":{\"dataset\":" << json_quote(b.meta.dataset)
      << ",\"thresholds\":" << json_quote(b.meta.thresholds)
      << ",\"config\":" << json_quote(b.meta.config)
      << ",\"tool_version\":" << json_quote(b.meta.tool_version) << "}}";
  if (!out) throw IoError("failed to write summary JSON");
}

// Curves and MAP_Avg are recomputed from the stored matrix, so a bundle read
// back is consistent by construction.
inline ReportBundle read_summary_json(std::istream& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("summary JSON: ") + e.what());
  }
  for (const char* key : {"label", "r_max", "c_max", "morph_count", "matrix"}) {
    if (!j.contains(key)) {
      throw ParseError(std::string("summary JSON: missing field '") + key + "'");
    }
  }
  MapMatrix m;
  if (!j["r_max"].is_number_integer() || !j["c_max"].is_number_integer() ||
      !j["morph_count"].is_number_integer()) {
    throw ParseError("summary JSON: r_max, c_max, morph_count must be integers");
  }
  m.r_max = j["r_max"].get<int>();
  m.c_max = j["c_max"].get<int>();
  m.morph_count = j["morph_count"].get<int>();
  if (m.r_max < 1 || m.c_max < 1 || m.morph_count < 1) {
    throw ParseError("summary JSON: r_max, c_max, morph_count must be >= 1");
  }
  const auto& rows = j["matrix"];
  if (!rows.is_array() || static_cast<int>(rows.size()) != m.r_max) {
    throw ParseError("summary JSON: matrix must have r_max rows");
  }
  m.values.reserve(static_cast<std::size_t>(m.r_max) * m.c_max);
  for (const auto& row : rows) {
    if (!row.is_array() || static_cast<int>(row.size()) != m.c_max) {
      throw ParseError("summary JSON: every matrix row must have c_max values");
    }
    for (const auto& v : row) {
      if (!v.is_number()) throw ParseError("summary JSON: matrix values must be numbers");
      const double x = v.get<double>();
      if (!(x >= 0.0 && x <= 100.0)) {
        throw ParseError("summary JSON: matrix values must lie in [0, 100]");
      }
      m.values.push_back(x);
    }
  }
  BundleMeta meta;
  meta.label = j["label"].is_string() ? j["label"].get<std::string>() : std::string{};
  if (j.contains("metadata") && j["metadata"].is_object()) {
    const auto& md = j["metadata"];
    const auto str = [&](const char* key) {
      return md.contains(key) && md[key].is_string() ? md[key].get<std::string>()
                                                     : std::string{};
    };
    meta.dataset = str("dataset");
    meta.thresholds = str("thresholds");
    meta.config = str("config");
    meta.tool_version = str("tool_version");
  }
  return make_report_bundle(std::move(m), std::move(meta));
}

// ---------------------------------------------------------------------------
// Tables

inline std::string render_matrix_text(const MapMatrix& m) {
  std::ostringstream os;
  os << "MAP matrix (%)  morphs=" << m.morph_count << "  r_max=" << m.r_max
     << "  c_max=" << m.c_max << '\n';
  os << "  r\\c";
  for (int c = 1; c <= m.c_max; ++c) {
    std::string h = std::to_string(c);
    os << std::string(8 - std::min<std::size_t>(8, h.size()), ' ') << h;
  }
  os << '\n';
  for (int r = 1; r <= m.r_max; ++r) {
    std::string h = std::to_string(r);
    os << std::string(5 - std::min<std::size_t>(5, h.size()), ' ') << h;
    for (int c = 1; c <= m.c_max; ++c) {
      const std::string v = fmt_fixed(m.at(r, c), 1);
      os << std::string(8 - std::min<std::size_t>(8, v.size()), ' ') << v;
    }
    os << '\n';
  }
  return os.str();
}

inline std::string render_matrix_markdown(const MapMatrix& m) {
  std::ostringstream os;
  os << "| r\\c |";
  for (int c = 1; c <= m.c_max; ++c) os << ' ' << c << " |";
  os << "\n| ---: |";
  for (int c = 1; c <= m.c_max; ++c) os << " ---: |";
  os << '\n';
  for (int r = 1; r <= m.r_max; ++r) {
    os << "| " << r << " |";
    for (int c = 1; c <= m.c_max; ++c) os << ' ' << fmt_fixed(m.at(r, c), 1) << " |";
    os << '\n';
  }
  return os.str();
}

// One row per algorithm: its r=1 MAP row plus MAP_Avg; per-column maxima are
// bolded, ties mark every holder.
inline std::string render_compare_markdown(const std::vector<ReportBundle>& bundles) {
  if (bundles.size() < 2) {
    throw SemanticError("compare needs at least two bundles");
  }
  const int r_max = bundles.front().matrix.r_max;
  const int c_max = bundles.front().matrix.c_max;
  for (const auto& b : bundles) {
    if (b.matrix.r_max != r_max || b.matrix.c_max != c_max) {
      throw SemanticError("compare: bundle '" + b.meta.label + "' has shape " +
                          std::to_string(b.matrix.r_max) + "x" +
                          std::to_string(b.matrix.c_max) + " but bundle '" +
                          bundles.front().meta.label + "' has shape " +
                          std::to_string(r_max) + "x" + std::to_string(c_max));
    }
  }
  std::vector<double> col_max(c_max, 0.0);
  double avg_max = 0.0;
  for (const auto& b : bundles) {
    for (int c = 1; c <= c_max; ++c) {
      col_max[c - 1] = std::max(col_max[c - 1], b.matrix.at(1, c));
    }
    avg_max = std::max(avg_max, b.map_avg);
  }
  std::ostringstream os;
  os << "| Algorithm |";
  for (int c = 1; c <= c_max; ++c) os << ' ' << c << " |";
  os << " MAP_Avg |\n| :-- |";
  for (int c = 0; c <= c_max; ++c) os << " ---: |";
  os << '\n';
  for (const auto& b : bundles) {
    os << "| " << b.meta.label << " |";
    for (int c = 1; c <= c_max; ++c) {
      const double v = b.matrix.at(1, c);
      const std::string cell = fmt_fixed(v, 1);
      os << ' ' << (v == col_max[c - 1] ? "**" + cell + "**" : cell) << " |";
    }
    const std::string avg = fmt_fixed(b.map_avg, 4);
    os << ' ' << (b.map_avg == avg_max ? "**" + avg + "**" : avg) << " |\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// SVG line charts

struct SvgSeries {
  std::string label;
  std::vector<double> values;  // y at x = 1..values.size(), percent scale
};

namespace detail {
inline constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                           "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
inline constexpr int kPaletteSize = 8;
}  // namespace detail

inline std::string render_curve_svg(const std::string& title, const std::string& x_label,
                                    const std::string& y_label,
                                    const std::vector<SvgSeries>& series) {
  if (series.empty()) throw SemanticError("svg chart needs at least one series");
  std::size_t n = 0;
  for (const auto& s : series) n = std::max(n, s.values.size());
  if (n == 0) throw SemanticError("svg chart needs at least one point");

  constexpr double kW = 640.0;
  constexpr double kH = 420.0;
  constexpr double kLeft = 64.0;
  constexpr double kRight = 24.0;
  constexpr double kTop = 44.0;
  constexpr double kBottom = 58.0;
  const double pw = kW - kLeft - kRight;
  const double ph = kH - kTop - kBottom;

  const auto fx = [&](std::size_t i) {
    if (n == 1) return kLeft + pw / 2.0;
    return kLeft + pw * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  const auto fy = [&](double v) { return kTop + ph * (1.0 - v / 100.0); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" "
        "viewBox=\"0 0 640 420\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"640\" height=\"420\" fill=\"#ffffff\"/>\n";
  os << "<text x=\"320\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" "
        "text-anchor=\"middle\">"
     << title << "</text>\n";

  // gridlines + y ticks
  for (int v = 0; v <= 100; v += 20) {
    const std::string y = fmt_fixed(fy(v), 2);
    os << "<line x1=\"" << fmt_fixed(kLeft, 2) << "\" y1=\"" << y << "\" x2=\""
       << fmt_fixed(kLeft + pw, 2) << "\" y2=\"" << y
       << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    os << "<text x=\"" << fmt_fixed(kLeft - 8.0, 2) << "\" y=\"" << y
       << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\" "
          "dominant-baseline=\"middle\">"
       << v << "</text>\n";
  }
  // x ticks
  const std::size_t step = n <= 12 ? 1 : (n + 11) / 12;
  for (std::size_t i = 0; i < n; i += step) {
    const std::string x = fmt_fixed(fx(i), 2);
    os << "<line x1=\"" << x << "\" y1=\"" << fmt_fixed(kTop + ph, 2) << "\" x2=\"" << x
       << "\" y2=\"" << fmt_fixed(kTop + ph + 5.0, 2)
       << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    os << "<text x=\"" << x << "\" y=\"" << fmt_fixed(kTop + ph + 18.0, 2)
       << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" << (i + 1)
       << "</text>\n";
  }
  // axes
  os << "<line x1=\"" << fmt_fixed(kLeft, 2) << "\" y1=\"" << fmt_fixed(kTop, 2) << "\" x2=\""
     << fmt_fixed(kLeft, 2) << "\" y2=\"" << fmt_fixed(kTop + ph, 2)
     << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  os << "<line x1=\"" << fmt_fixed(kLeft, 2) << "\" y1=\"" << fmt_fixed(kTop + ph, 2)
     << "\" x2=\"" << fmt_fixed(kLeft + pw, 2) << "\" y2=\"" << fmt_fixed(kTop + ph, 2)
     << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  // axis labels
  os << "<text x=\"" << fmt_fixed(kLeft + pw / 2.0, 2) << "\" y=\""
     << fmt_fixed(kH - 16.0, 2)
     << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">" << x_label
     << "</text>\n";
  os << "<text x=\"18\" y=\"" << fmt_fixed(kTop + ph / 2.0, 2)
     << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
        "transform=\"rotate(-90 18 "
     << fmt_fixed(kTop + ph / 2.0, 2) << ")\">" << y_label << "</text>\n";

  // series
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = detail::kPalette[s % detail::kPaletteSize];
    const auto& vals = series[s].values;
    if (vals.size() >= 2) {
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
      for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i > 0) os << ' ';
        os << fmt_fixed(fx(i), 2) << ',' << fmt_fixed(fy(vals[i]), 2);
      }
      os << "\"/>\n";
    }
    for (std::size_t i = 0; i < vals.size(); ++i) {
      os << "<circle cx=\"" << fmt_fixed(fx(i), 2) << "\" cy=\"" << fmt_fixed(fy(vals[i]), 2)
         << "\" r=\"3.5\" fill=\"" << color << "\"/>\n";
    }
  }
  // legend, input order
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = detail::kPalette[s % detail::kPaletteSize];
    const double ly = kTop + 10.0 + 18.0 * static_cast<double>(s);
    os << "<line x1=\"" << fmt_fixed(kLeft + pw - 130.0, 2) << "\" y1=\"" << fmt_fixed(ly, 2)
       << "\" x2=\"" << fmt_fixed(kLeft + pw - 106.0, 2) << "\" y2=\"" << fmt_fixed(ly, 2)
       << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << fmt_fixed(kLeft + pw - 100.0, 2) << "\" y=\"" << fmt_fixed(ly, 2)
       << "\" font-family=\"sans-serif\" font-size=\"12\" dominant-baseline=\"middle\">"
       << series[s].label << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

inline std::string render_robustness_svg(const std::vector<ReportBundle>& bundles) {
  std::vector<SvgSeries> series;
  series.reserve(bundles.size());
  for (const auto& b : bundles) series.push_back({b.meta.label, b.curves.robustness});
  return render_curve_svg("Robustness", "r (minimum probes per subject)", "MAP (%)", series);
}

inline std::string render_generality_svg(const std::vector<ReportBundle>& bundles) {
  std::vector<SvgSeries> series;
  series.reserve(bundles.size());
  for (const auto& b : bundles) series.push_back({b.meta.label, b.curves.generality});
  return render_curve_svg("Generality", "c (minimum FRSs deceived)", "MAP (%)", series);
}

}  // namespace mapeval
