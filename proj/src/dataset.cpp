#include "qregress/dataset.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

namespace qregress::data {

namespace {

using std::chrono::sys_days;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"')) {
    s.remove_suffix(1);
  }
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::optional<std::int64_t> parse_count(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec == std::errc{} && ptr == text.data() + text.size()) return v;
  // Some exports write counts as "123.0".
  double d = 0.0;
  auto [dptr, dec] = std::from_chars(text.data(), text.data() + text.size(), d);
  if (dec != std::errc{} || dptr != text.data() + text.size()) return std::nullopt;
  if (!std::isfinite(d) || std::floor(d) != d || std::abs(d) > 9.0e15) return std::nullopt;
  return static_cast<std::int64_t>(d);
}

}  // namespace

std::chrono::year_month_day parse_date(std::string_view text) {
  int y = 0;
  unsigned m = 0, d = 0;
  auto bad = [&] { return SchemaError("invalid ISO-8601 date '" + std::string(text) + "'"); };
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') throw bad();
  auto num = [&](std::size_t pos, std::size_t len, auto& out) {
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, out);
    if (ec != std::errc{} || ptr != text.data() + pos + len) throw bad();
  };
  num(0, 4, y);
  num(5, 2, m);
  num(8, 2, d);
  const std::chrono::year_month_day date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!date.ok()) throw bad();
  return date;
}

std::string format_date(std::chrono::year_month_day date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

std::vector<TimeSeriesRecord> parse_timeseries(std::string_view csv) {
  if (csv.size() >= 3 && csv.substr(0, 3) == "\xEF\xBB\xBF") csv.remove_prefix(3);

  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start <= csv.size();) {
    const std::size_t nl = csv.find('\n', start);
    lines.push_back(csv.substr(start, nl == std::string_view::npos ? csv.npos : nl - start));
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  std::size_t header_line = 0;
  while (header_line < lines.size() && trim(lines[header_line]).empty()) ++header_line;
  if (header_line == lines.size()) throw SchemaError("empty CSV: header row missing");

  const auto header = split_fields(lines[header_line]);
  auto column = [&](std::string_view name, bool required) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (lower(header[i]) == name) return i;
    }
    if (required) throw SchemaError("missing column '" + std::string(name) + "'");
    return std::nullopt;
  };
  const std::size_t c_date = *column("date", true);
  const std::size_t c_confirmed = *column("confirmed", true);
  const std::size_t c_deaths = *column("deaths", true);
  const std::size_t c_recovered = *column("recovered", true);
  const auto c_active = column("active", false);
  const auto c_new = column("new_cases", false);

  std::vector<TimeSeriesRecord> records;
  for (std::size_t li = header_line + 1; li < lines.size(); ++li) {
    if (trim(lines[li]).empty()) continue;
    const std::size_t line_no = li + 1;
    const auto fields = split_fields(lines[li]);
    if (fields.size() != header.size()) {
      throw RowError(line_no, "expected " + std::to_string(header.size()) + " fields, found " +
                                  std::to_string(fields.size()));
    }
    TimeSeriesRecord r;
    try {
      r.date = parse_date(fields[c_date]);
    } catch (const SchemaError& e) {
      throw RowError(line_no, e.what());
    }
    auto count = [&](std::size_t col, std::string_view name) {
      const auto v = parse_count(fields[col]);
      if (!v) throw RowError(line_no, "invalid " + std::string(name) + " value '" + std::string(fields[col]) + "'");
      return *v;
    };
    r.confirmed = count(c_confirmed, "confirmed");
    r.deaths = count(c_deaths, "deaths");
    r.recovered = count(c_recovered, "recovered");
    if (c_active) r.active = count(*c_active, "active");
    if (c_new) r.new_cases = count(*c_new, "new_cases");
    r.inconsistent = r.deaths + r.recovered > r.confirmed;
    records.push_back(r);
  }
  if (records.empty()) throw SchemaError("CSV has no data rows");

  std::stable_sort(records.begin(), records.end(),
                   [](const auto& a, const auto& b) { return sys_days{a.date} < sys_days{b.date}; });
  const sys_days first{records.front().date};
  for (std::size_t i = 0; i < records.size(); ++i) {
    records[i].day_index = (sys_days{records[i].date} - first).count();
    if (records[i].day_index != static_cast<std::int64_t>(i)) {
      throw SchemaError(records[i].day_index < static_cast<std::int64_t>(i)
                            ? "duplicate date " + format_date(records[i].date)
                            : "missing day before " + format_date(records[i].date));
    }
  }
  return records;
}

std::vector<TimeSeriesRecord> derive_features(std::vector<TimeSeriesRecord> records, Diagnostics* diag) {
  std::int64_t previous = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto& r = records[i];
    r.active = r.confirmed - (r.deaths + r.recovered);
    r.new_cases = i == 0 ? r.active : r.active - previous;
    previous = r.active;
    r.inconsistent = r.deaths + r.recovered > r.confirmed;
    if (r.inconsistent && diag) {
      diag->warn(format_date(r.date) + ": deaths + recovered exceed confirmed");
    }
  }
  return records;
}

std::string to_canonical_csv(std::span<const TimeSeriesRecord> records) {
  std::ostringstream out;
  out << "date,confirmed,deaths,recovered,active,new_cases,day_index\n";
  for (const auto& r : records) {
    out << format_date(r.date) << ',' << r.confirmed << ',' << r.deaths << ',' << r.recovered << ','
        << r.active << ',' << r.new_cases << ',' << r.day_index << '\n';
  }
  return out.str();
}

void FuzzyScale::validate() const {
  if (!std::isfinite(min) || !std::isfinite(max) || !(max > min)) {
    throw DegenerateScaleError("fuzzy scale needs max > min");
  }
}

std::pair<std::vector<double>, FuzzyScale> fuzzify(std::span<const double> values) {
  if (values.empty()) throw DegenerateScaleError("cannot fuzzify an empty column");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const FuzzyScale scale{*lo, *hi};
  scale.validate();
  return {fuzzify_with(values, scale), scale};
}

std::vector<double> fuzzify_with(std::span<const double> values, const FuzzyScale& scale) {
  scale.validate();
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(scale.apply(v));
  return out;
}

double defuzzify(double v, const FuzzyScale& scale) {
  scale.validate();
  return v * (scale.max - scale.min) + scale.min;
}

std::pair<std::vector<TimeSeriesRecord>, std::vector<TimeSeriesRecord>> split(
    std::span<const TimeSeriesRecord> records, double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw RangeError("train fraction must lie strictly between 0 and 1");
  }
  const auto n = records.size();
  const auto n_train = static_cast<std::size_t>(std::floor(static_cast<double>(n) * train_fraction + 1e-9));
  if (n_train == 0 || n_train >= n) {
    throw SizeError("split of " + std::to_string(n) + " records leaves an empty side");
  }
  return {{records.begin(), records.begin() + static_cast<std::ptrdiff_t>(n_train)},
          {records.begin() + static_cast<std::ptrdiff_t>(n_train), records.end()}};
}

Target parse_target(std::string_view name) {
  const std::string n = lower(name);
  if (n == "deaths" || n == "death") return Target::Deaths;
  if (n == "confirmed") return Target::Confirmed;
  throw RangeError("unknown target '" + std::string(name) + "' (expected deaths or confirmed)");
}

std::string target_name(Target target) { return target == Target::Deaths ? "deaths" : "confirmed"; }

std::vector<std::string> feature_names(Target target) {
  if (target == Target::Deaths) return {"day_index", "confirmed", "recovered"};
  return {"day_index", "deaths", "recovered"};
}

double column_value(const TimeSeriesRecord& r, std::string_view column) {
  if (column == "day_index") return static_cast<double>(r.day_index);
  if (column == "confirmed") return static_cast<double>(r.confirmed);
  if (column == "deaths") return static_cast<double>(r.deaths);
  if (column == "recovered") return static_cast<double>(r.recovered);
  if (column == "active") return static_cast<double>(r.active);
  if (column == "new_cases") return static_cast<double>(r.new_cases);
  throw SchemaError("unknown column '" + std::string(column) + "'");
}

FeatureTable build_features(std::span<const TimeSeriesRecord> records, Target target) {
  FeatureTable table;
  table.names = feature_names(target);
  const std::string target_column = target_name(target);
  for (const auto& r : records) {
    std::vector<double> row;
    row.reserve(table.names.size());
    for (const auto& name : table.names) row.push_back(column_value(r, name));
    table.rows.push_back(std::move(row));
    table.targets.push_back(column_value(r, target_column));
  }
  return table;
}

}  // namespace qregress::data
