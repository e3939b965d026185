#pragma once

// Command-line orchestration: fetch, train, predict, compare.
//
// Exit codes are a stable contract:
//   0 success, 1 usage, 2 fetch/schema, 3 divergence, 4 model mismatch,
//   5 report input.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qregress/cvqnn.hpp"
#include "qregress/dataset.hpp"

namespace qregress::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kFetchOrSchema = 2,
  kDivergence = 3,
  kModelMismatch = 4,
  kReportInput = 5,
};

enum class ModelKind { Qbmlp, Cvqnn };

/// Which rows the fuzzy min/max scales are computed from. Train (default)
/// never looks at the held-out suffix; Series uses the whole file.
enum class Scaling { Train, Series };

Scaling parse_scaling(const std::string& name);
std::string scaling_name(Scaling scaling);

ModelKind parse_model(const std::string& name);
std::string model_name(ModelKind kind);   // "qbmlp" / "cvqnn"
std::string model_label(ModelKind kind);  // "QBMLP" / "CVQNN"

/// Environment variable naming the default data source for `fetch`.
inline constexpr const char* kDataUrlEnv = "QREGRESS_DATA_URL";

struct RunConfig {
  std::string country = "india";
  data::Target target = data::Target::Deaths;
  ModelKind model = ModelKind::Qbmlp;
  std::optional<double> learning_rate;     // 0.001 QBMLP, 0.1 CVQNN
  std::optional<std::size_t> iterations;   // 15000 QBMLP, 200 CVQNN
  std::size_t cutoff = 10;
  std::size_t layers = 1;
  cvqnn::Variant variant = cvqnn::Variant::Standard;
  std::uint64_t seed = 0;
  double split_fraction = 0.8;
  Scaling scaling = Scaling::Train;
  std::filesystem::path data;
  std::filesystem::path out_dir = "out";

  double effective_learning_rate() const;
  std::size_t effective_iterations() const;
  /// Throws RangeError / ParameterError for out-of-bounds fields.
  void validate() const;
  /// "<country>_<target>_<model>", the stem of every output file.
  std::string stem() const;
};

/// Overlays keys of a versioned config tree ({"version": 1, ...}) onto `cfg`.
/// Keys mirror the long flag names of `train`.
void apply_config(RunConfig& cfg, const nlohmann::json& config);

/// fetch_remote -> parse_timeseries -> derive_features -> canonical CSV.
int cmd_fetch(const std::string& source, const std::filesystem::path& out_path, std::ostream& log,
              std::ostream& err);

/// Writes <stem>.model.json, <stem>_cost.csv and <stem>_cost_plot.svg (+csv)
/// under cfg.out_dir.
int cmd_train(const RunConfig& cfg, std::ostream& log, std::ostream& err);

enum class Partition { Test, Train, All };

/// Writes <stem>_predictions.csv and <stem>_overlay.svg (+csv) under out_dir.
int cmd_predict(const std::filesystem::path& model_path, const std::filesystem::path& data_path,
                const std::filesystem::path& out_dir, Partition partition, std::ostream& log,
                std::ostream& err);

/// Writes comparison.txt and comparison.csv under out_dir.
int cmd_compare(const std::vector<std::filesystem::path>& prediction_files,
                const std::filesystem::path& out_dir, std::ostream& log, std::ostream& err);

/// Dataset label used in comparison tables, e.g. "India - Death Prediction".
std::string dataset_label(const std::string& country, data::Target target);

/// Full command-line entry point.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qregress::cli
