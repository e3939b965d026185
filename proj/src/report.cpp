#include "qregress/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace qregress::report {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

Range finite_range(std::span<const Series> series, bool use_x) {
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& s : series) {
    for (double v : use_x ? s.x : s.y) {
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!std::isfinite(lo)) return {};
  if (hi == lo) return {lo - 0.5, hi + 0.5};
  return {lo, hi};
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << content;
  out.close();
  if (!out) throw IoError("error writing '" + path.string() + "'");
}

std::string render_svg(std::span<const Series> series, const PlotLabels& labels) {
  const Range xr = finite_range(series, true);
  const Range yr = finite_range(series, false);
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
  auto py = [&](double y) { return kTop + plot_h - (y - yr.lo) / (yr.hi - yr.lo) * plot_h; };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!labels.title.empty()) {
    svg << "<text x=\"" << coord(kLeft + plot_w / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
        << xml_escape(labels.title) << "</text>\n";
  }
  svg << "<rect x=\"" << coord(kLeft) << "\" y=\"" << coord(kTop) << "\" width=\"" << coord(plot_w)
      << "\" height=\"" << coord(plot_h) << "\" fill=\"none\" stroke=\"#444\"/>\n";

  for (int t = 0; t <= 4; ++t) {
    const double fx = xr.lo + (xr.hi - xr.lo) * t / 4.0;
    const double fy = yr.lo + (yr.hi - yr.lo) * t / 4.0;
    svg << "<line x1=\"" << coord(px(fx)) << "\" y1=\"" << coord(kTop + plot_h) << "\" x2=\"" << coord(px(fx))
        << "\" y2=\"" << coord(kTop + plot_h + 5) << "\" stroke=\"#444\"/>\n"
        << "<text x=\"" << coord(px(fx)) << "\" y=\"" << coord(kTop + plot_h + 18)
        << "\" text-anchor=\"middle\">" << format_number(fx) << "</text>\n"
        << "<line x1=\"" << coord(kLeft - 5) << "\" y1=\"" << coord(py(fy)) << "\" x2=\"" << coord(kLeft)
        << "\" y2=\"" << coord(py(fy)) << "\" stroke=\"#444\"/>\n"
        << "<text x=\"" << coord(kLeft - 8) << "\" y=\"" << coord(py(fy) + 4) << "\" text-anchor=\"end\">"
        << format_number(fy) << "</text>\n";
  }
  svg << "<text x=\"" << coord(kLeft + plot_w / 2) << "\" y=\"" << coord(kHeight - 15)
      << "\" text-anchor=\"middle\">" << xml_escape(labels.x_label) << "</text>\n"
      << "<text transform=\"translate(16," << coord(kTop + plot_h / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">" << xml_escape(labels.y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kPalette[k % std::size(kPalette)];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < series[k].x.size(); ++i) {
      if (!std::isfinite(series[k].x[i]) || !std::isfinite(series[k].y[i])) continue;
      svg << (first ? "" : " ") << coord(px(series[k].x[i])) << ',' << coord(py(series[k].y[i]));
      first = false;
    }
    svg << "\"/>\n";
    const double ly = kTop + 10 + 18.0 * static_cast<double>(k);
    svg << "<line x1=\"" << coord(kWidth - kRight + 15) << "\" y1=\"" << coord(ly) << "\" x2=\""
        << coord(kWidth - kRight + 35) << "\" y2=\"" << coord(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << coord(kWidth - kRight + 40) << "\" y=\"" << coord(ly + 4) << "\">"
        << xml_escape(series[k].name) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string render_csv(std::span<const Series> series) {
  const bool shared_x = std::all_of(series.begin(), series.end(),
                                    [&](const Series& s) { return s.x == series.front().x; });
  std::ostringstream csv;
  if (shared_x) {
    csv << "x";
    for (const auto& s : series) csv << ',' << csv_field(s.name);
    csv << '\n';
    for (std::size_t i = 0; i < series.front().x.size(); ++i) {
      csv << format_number(series.front().x[i]);
      for (const auto& s : series) csv << ',' << format_number(s.y[i]);
      csv << '\n';
    }
  } else {
    csv << "series,x,y\n";
    for (const auto& s : series) {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        csv << csv_field(s.name) << ',' << format_number(s.x[i]) << ',' << format_number(s.y[i]) << '\n';
      }
    }
  }
  return csv.str();
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // avoids "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::filesystem::path sibling_csv(const std::filesystem::path& svg_path) {
  auto csv = svg_path;
  csv.replace_extension(".csv");
  return csv;
}

void emit_plot(std::span<const Series> series, PlotKind kind, const std::filesystem::path& svg_path,
               const PlotLabels& labels) {
  (void)kind;  // Line is the only kind.
  if (series.empty()) throw SizeError("plot needs at least one series");
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw DimensionError("series '" + s.name + "' has unequal x/y lengths");
    if (s.x.empty()) throw SizeError("series '" + s.name + "' is empty");
  }
  write_file(svg_path, render_svg(series, labels));
  write_file(sibling_csv(svg_path), render_csv(series));
}

ComparisonTable comparison_table(std::span<const ComparisonEntry> entries) {
  std::vector<std::string> datasets;
  std::vector<std::string> models;
  std::map<std::pair<std::string, std::string>, stats::TTestReport> cells;
  for (const auto& e : entries) {
    if (std::find(datasets.begin(), datasets.end(), e.dataset) == datasets.end()) datasets.push_back(e.dataset);
    if (std::find(models.begin(), models.end(), e.model) == models.end()) models.push_back(e.model);
    cells[{e.dataset, e.model}] = e.report;
  }
  auto rank = [](const std::string& m) { return m == "QBMLP" ? 0 : (m == "CVQNN" ? 1 : 2); };
  std::stable_sort(models.begin(), models.end(),
                   [&](const auto& a, const auto& b) { return rank(a) < rank(b); });

  auto cell = [&](const std::string& d, const std::string& m) -> std::optional<stats::TTestReport> {
    auto it = cells.find({d, m});
    if (it == cells.end()) return std::nullopt;
    return it->second;
  };

  std::ostringstream csv;
  csv << "dataset";
  for (const auto& m : models) csv << ',' << csv_field(m + "_statistic") << ',' << csv_field(m + "_p_value");
  csv << '\n';
  for (const auto& d : datasets) {
    csv << csv_field(d);
    for (const auto& m : models) {
      const auto c = cell(d, m);
      csv << ',' << (c ? format_number(c->statistic) : "") << ',' << (c ? format_number(c->p_value) : "");
    }
    csv << '\n';
  }

  // Aligned text.
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> head1{"Data Set/Model"}, head2{""};
  for (const auto& m : models) {
    head1.insert(head1.end(), {m, ""});
    head2.insert(head2.end(), {"Statistic", "p value"});
  }
  rows.push_back(head1);
  rows.push_back(head2);
  for (const auto& d : datasets) {
    std::vector<std::string> row{d};
    for (const auto& m : models) {
      const auto c = cell(d, m);
      row.push_back(c ? format_number(c->statistic) : "");
      row.push_back(c ? format_number(c->p_value) : "");
    }
    rows.push_back(std::move(row));
  }
  std::vector<std::size_t> width(rows.front().size(), 0);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::ostringstream text;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::string line;
    for (std::size_t i = 0; i < rows[r].size(); ++i) {
      if (i > 0) line += i % 2 == 1 ? " | " : "  ";
      line += rows[r][i] + std::string(width[i] - rows[r][i].size(), ' ');
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    text << line << '\n';
    if (r == 1) {
      std::size_t total = 0;
      for (std::size_t i = 0; i < width.size(); ++i) total += width[i] + (i == 0 ? 0 : (i % 2 == 1 ? 3 : 2));
      text << std::string(total, '-') << '\n';
    }
  }
  return {text.str(), csv.str()};
}

}  // namespace qregress::report
