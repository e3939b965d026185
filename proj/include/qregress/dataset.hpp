#pragma once

// Epidemic time-series ingestion, derived features, fuzzy scaling and
// chronological splitting.
//
// Input CSV header: date,confirmed,deaths,recovered (any column order,
// case-insensitive, ISO-8601 dates). Canonical output appends
// active,new_cases,day_index.

#include <chrono>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qregress/error.hpp"

namespace qregress::data {

struct TimeSeriesRecord {
  std::chrono::year_month_day date{};
  std::int64_t confirmed = 0;
  std::int64_t deaths = 0;
  std::int64_t recovered = 0;
  std::int64_t active = 0;
  std::int64_t new_cases = 0;
  std::int64_t day_index = 0;
  /// deaths + recovered > confirmed.
  bool inconsistent = false;

  friend bool operator==(const TimeSeriesRecord&, const TimeSeriesRecord&) = default;
};

/// Parses and sorts by date, assigning day_index from 0. Columns
/// active/new_cases are read when present. Throws SchemaError for a missing
/// column, RowError for an unparseable row, and SchemaError for duplicate or
/// missing days.
std::vector<TimeSeriesRecord> parse_timeseries(std::string_view csv);

/// active = confirmed - (deaths + recovered); new_cases[0] = active[0],
/// new_cases[n] = active[n] - active[n - 1]. Flags inconsistent records.
std::vector<TimeSeriesRecord> derive_features(std::vector<TimeSeriesRecord> records,
                                              Diagnostics* diag = nullptr);

/// Header plus one row per record, all seven columns.
std::string to_canonical_csv(std::span<const TimeSeriesRecord> records);

std::string format_date(std::chrono::year_month_day date);
/// Strict YYYY-MM-DD. Throws SchemaError.
std::chrono::year_month_day parse_date(std::string_view text);

/// Min/max of a fuzzified column.
struct FuzzyScale {
  double min = 0.0;
  double max = 1.0;

  /// Throws DegenerateScaleError unless max > min (both finite).
  void validate() const;
  /// (v - min) / (max - min); not clamped.
  double apply(double v) const { return (v - min) / (max - min); }
};

/// Linear membership scaling onto [0, 1]; min maps to exactly 0, max to
/// exactly 1. Throws DegenerateScaleError for a constant column.
std::pair<std::vector<double>, FuzzyScale> fuzzify(std::span<const double> values);

/// Applies an existing scale (values may fall outside [0, 1]).
std::vector<double> fuzzify_with(std::span<const double> values, const FuzzyScale& scale);

/// v * (max - min) + min. Throws DegenerateScaleError for an invalid scale.
double defuzzify(double v, const FuzzyScale& scale);

/// Chronological prefix/suffix split. Train gets floor(n * fraction) records,
/// at least one. Throws SizeError if either side would be empty.
std::pair<std::vector<TimeSeriesRecord>, std::vector<TimeSeriesRecord>> split(
    std::span<const TimeSeriesRecord> records, double train_fraction);

/// Raw body of `url`. Accepts http://, https://, file:// and plain file paths.
/// Throws FetchError (status 0 without a response, HTTP status otherwise).
std::string fetch_remote(const std::string& url, std::chrono::milliseconds timeout);

/// Prediction target and the model inputs derived for it.
enum class Target { Deaths, Confirmed };

Target parse_target(std::string_view name);
std::string target_name(Target target);

/// Feature columns used for `target`: day_index followed by the two count
/// columns other than the target.
std::vector<std::string> feature_names(Target target);

double column_value(const TimeSeriesRecord& r, std::string_view column);

/// Raw (unscaled) feature matrix and target column.
struct FeatureTable {
  std::vector<std::string> names;
  std::vector<std::vector<double>> rows;
  std::vector<double> targets;
};

FeatureTable build_features(std::span<const TimeSeriesRecord> records, Target target);

}  // namespace qregress::data
