#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <unistd.h>

#include "doctest.h"
#include "qregress/report.hpp"

using namespace qregress;
using namespace qregress::report;
namespace fs = std::filesystem;

namespace {

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

// Tag balance plus a single root element; enough to catch broken markup.
bool well_formed(const std::string& xml) {
  std::vector<std::string> stack;
  std::size_t roots = 0;
  const std::regex tag(R"(<(/?)([A-Za-z][\w:-]*)([^<>]*?)(/?)>)");
  for (auto it = std::sregex_iterator(xml.begin(), xml.end(), tag); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    const bool closing = m[1].length() > 0, self = m[4].length() > 0;
    if (closing) {
      if (stack.empty() || stack.back() != m[2].str()) return false;
      stack.pop_back();
    } else if (!self) {
      if (stack.empty()) ++roots;
      stack.push_back(m[2].str());
    } else if (stack.empty()) {
      ++roots;
    }
  }
  const auto body = std::regex_replace(xml, std::regex(R"(<[^>]*>)"), "");
  if (body.find('<') != std::string::npos || body.find('>') != std::string::npos) return false;
  return stack.empty() && roots == 1;
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("qregress_report_" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("format_number") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(0.0572) == "0.0572");
  CHECK(format_number(1234567.0) == "1.23457e+06");
  CHECK(format_number(123456.0) == "123456");
  CHECK(format_number(0.954512345) == "0.954512");
}

TEST_CASE("emit_plot: one series") {
  TempDir dir;
  const Series s{"cost", {0, 1, 2}, {3.0, 2.0, 1.5}};
  const auto svg = dir.path / "one.svg";
  emit_plot(std::span<const Series>(&s, 1), PlotKind::Line, svg, {"Cost & decay <1>", "iteration", "cost"});
  const auto csv = lines(read(sibling_csv(svg)));
  REQUIRE(csv.size() == 4);
  CHECK(csv[0] == "x,cost");
  CHECK(csv[1] == "0,3");
  CHECK(csv[3] == "2,1.5");
  const auto xml = read(svg);
  CHECK(well_formed(xml));
  CHECK(xml.find("Cost &amp; decay &lt;1&gt;") != std::string::npos);
}

TEST_CASE("emit_plot: two series") {
  TempDir dir;
  const std::vector<Series> shared{{"actual", {0, 1}, {5, 6}}, {"predicted", {0, 1}, {5.5, 6.5}}};
  emit_plot(shared, PlotKind::Line, dir.path / "pair.svg");
  const auto csv = lines(read(dir.path / "pair.csv"));
  REQUIRE(csv.size() == 3);
  CHECK(csv[0] == "x,actual,predicted");
  CHECK(csv[2] == "1,6,6.5");
  CHECK(well_formed(read(dir.path / "pair.svg")));

  const std::vector<Series> ragged{{"a", {0, 1}, {1, 2}}, {"b, c", {5}, {9}}};
  emit_plot(ragged, PlotKind::Line, dir.path / "ragged.svg");
  const auto rows = lines(read(dir.path / "ragged.csv"));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "series,x,y");
  CHECK(rows[3] == "\"b, c\",5,9");
}

TEST_CASE("emit_plot errors") {
  TempDir dir;
  CHECK_THROWS_AS(emit_plot({}, PlotKind::Line, dir.path / "e.svg"), SizeError);
  const Series empty{"e", {}, {}};
  CHECK_THROWS_AS(emit_plot(std::span<const Series>(&empty, 1), PlotKind::Line, dir.path / "e.svg"), SizeError);
  const Series uneven{"u", {1, 2}, {1}};
  CHECK_THROWS_AS(emit_plot(std::span<const Series>(&uneven, 1), PlotKind::Line, dir.path / "u.svg"),
                  DimensionError);
  const Series ok{"ok", {1}, {1}};
  CHECK_THROWS_AS(emit_plot(std::span<const Series>(&ok, 1), PlotKind::Line, dir.path / "missing" / "x.svg"),
                  IoError);
}

TEST_CASE("comparison table") {
  const std::vector<ComparisonEntry> entries{
      {"India - Death Prediction", "CVQNN", {0.01998, 0.98411, 10, 31, 31}},
      {"India - Death Prediction", "QBMLP", {0.0572, 0.9545, 10, 31, 31}},
  };
  const auto t = comparison_table(entries);
  const auto csv = lines(t.csv);
  REQUIRE(csv.size() == 2);
  CHECK(csv[0] == "dataset,QBMLP_statistic,QBMLP_p_value,CVQNN_statistic,CVQNN_p_value");
  CHECK(csv[1] == "India - Death Prediction,0.0572,0.9545,0.01998,0.98411");

  const auto text = lines(t.text);
  REQUIRE(text.size() == 4);
  CHECK(text[0].find("Data Set/Model") == 0);
  CHECK(text[0].find("QBMLP") < text[0].find("CVQNN"));
  CHECK(text[1].find("Statistic") != std::string::npos);
  CHECK(text[1].find("p value") != std::string::npos);
  CHECK(text[3].find("India - Death Prediction") == 0);
  CHECK(text[3].find("0.98411") != std::string::npos);

  const std::vector<ComparisonEntry> one{{"USA - Confirmed Cases Prediction", "QBMLP", {0.1, 0.9, 8, 31, 31}}};
  CHECK(lines(comparison_table(one).csv).size() == 2);

  const std::vector<ComparisonEntry> gap{{"A", "QBMLP", {0.1, 0.9, 8, 31, 31}},
                                         {"B", "CVQNN", {0.2, 0.8, 8, 31, 31}}};
  const auto g = lines(comparison_table(gap).csv);
  REQUIRE(g.size() == 3);
  CHECK(g[1] == "A,0.1,0.9,,");
  CHECK(g[2] == "B,,,0.2,0.8");
}
