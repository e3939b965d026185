#pragma once

// Report emission: line charts (SVG plus a sibling CSV of the raw series)
// and the model-comparison t-test table.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "qregress/error.hpp"
#include "qregress/stats.hpp"

namespace qregress::report {

/// Formats with 6 significant digits, '.' decimal point, no grouping.
std::string format_number(double v);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

enum class PlotKind { Line };

struct PlotLabels {
  std::string title;
  std::string x_label = "x";
  std::string y_label = "y";
};

/// Path of the CSV written next to an SVG (same stem, ".csv").
std::filesystem::path sibling_csv(const std::filesystem::path& svg_path);

/// Writes the SVG chart to `svg_path` and the series to sibling_csv(svg_path).
/// When every series shares the same x values the CSV is "x,<name1>,<name2>..."
/// otherwise "series,x,y" rows. Throws SizeError for an empty set or series,
/// DimensionError for x/y length mismatch and IoError if a file cannot be
/// written.
void emit_plot(std::span<const Series> series, PlotKind kind, const std::filesystem::path& svg_path,
               const PlotLabels& labels = {});

struct ComparisonEntry {
  std::string dataset;  // e.g. "India - Death Prediction"
  std::string model;    // e.g. "QBMLP"
  stats::TTestReport report;
};

struct ComparisonTable {
  std::string text;
  std::string csv;
};

/// One row per dataset (first-appearance order), a statistic and p-value
/// column pair per model. QBMLP and CVQNN come first when present. Missing
/// cells are blank.
ComparisonTable comparison_table(std::span<const ComparisonEntry> entries);

}  // namespace qregress::report
