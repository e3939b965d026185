#include "qregress/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qregress/qbmlp.hpp"
#include "qregress/report.hpp"
#include "qregress/stats.hpp"

namespace qregress::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr auto kFetchTimeout = std::chrono::seconds(30);

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << content;
  out.close();
  if (!out) throw IoError("error writing '" + path.string() + "'");
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string full_precision(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void report_warnings(const Diagnostics& diag, std::ostream& err) {
  if (diag.empty()) return;
  err << "warning: " << diag.warnings.front();
  if (diag.warnings.size() > 1) err << " (and " << diag.warnings.size() - 1 << " more)";
  err << '\n';
}

std::vector<data::TimeSeriesRecord> load_records(const fs::path& path, Diagnostics* diag) {
  std::string text;
  try {
    text = read_text(path);
  } catch (const IoError& e) {
    throw SchemaError(e.what());
  }
  return data::derive_features(data::parse_timeseries(text), diag);
}

struct ScaledTable {
  std::vector<std::vector<double>> rows;
  std::vector<double> targets;
};

ScaledTable scale_table(const data::FeatureTable& table, const std::vector<data::FuzzyScale>& feature_scales,
                        const data::FuzzyScale& target_scale) {
  if (feature_scales.size() != table.names.size()) {
    throw DimensionError("model expects " + std::to_string(feature_scales.size()) + " features, data provides " +
                         std::to_string(table.names.size()));
  }
  ScaledTable out;
  for (const auto& row : table.rows) {
    std::vector<double> scaled(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) scaled[i] = feature_scales[i].apply(row[i]);
    out.rows.push_back(std::move(scaled));
  }
  for (double t : table.targets) out.targets.push_back(target_scale.apply(t));
  return out;
}

json scale_json(const data::FuzzyScale& s) { return json::array({s.min, s.max}); }

data::FuzzyScale scale_from_json(const json& j) {
  data::FuzzyScale s{j.at(0).get<double>(), j.at(1).get<double>()};
  s.validate();
  return s;
}

struct LoadedModel {
  ModelKind kind;
  std::string country;
  data::Target target;
  double split_fraction;
  std::vector<std::string> features;
  std::vector<data::FuzzyScale> feature_scales;
  data::FuzzyScale target_scale;
  json network;
};

LoadedModel load_model(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw SchemaError("model file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != "qregress.model") throw SchemaError("not a qregress model file");
    if (j.at("version").get<int>() != 1) throw SchemaError("unsupported model file version");
    LoadedModel m{parse_model(j.at("model").get<std::string>()),
                  j.at("country").get<std::string>(),
                  data::parse_target(j.at("target").get<std::string>()),
                  j.at("split_fraction").get<double>(),
                  j.at("features").get<std::vector<std::string>>(),
                  {},
                  scale_from_json(j.at("target_scale")),
                  j.at("network")};
    for (const auto& s : j.at("feature_scales")) m.feature_scales.push_back(scale_from_json(s));
    if (m.feature_scales.size() != m.features.size()) throw DimensionError("feature scale count mismatch");
    return m;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed model file: ") + e.what());
  }
}

// Minimal CSV reader for prediction files.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw SchemaError("missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  }
};

CsvTable read_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  auto fields = [](const std::string& l) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ls(l);
    while (std::getline(ls, cur, ',')) {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      out.push_back(cur);
    }
    if (!l.empty() && l.back() == ',') out.emplace_back();
    return out;
  };
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    if (t.header.empty()) {
      t.header = fields(line);
    } else {
      auto row = fields(line);
      if (row.size() != t.header.size()) throw SchemaError("row has " + std::to_string(row.size()) + " fields");
      t.rows.push_back(std::move(row));
    }
  }
  if (t.header.empty()) throw SchemaError("empty CSV");
  return t;
}

double to_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw SchemaError("invalid number '" + s + "'");
  }
  if (pos != s.size() || !std::isfinite(v)) throw SchemaError("invalid number '" + s + "'");
  return v;
}

std::string display_country(const std::string& country) {
  if (country.size() <= 3) {
    std::string up = country;
    std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return up;
  }
  std::string out = country;
  out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

}  // namespace

ModelKind parse_model(const std::string& name) {
  const std::string n = lower(name);
  if (n == "qbmlp") return ModelKind::Qbmlp;
  if (n == "cvqnn") return ModelKind::Cvqnn;
  throw RangeError("unknown model '" + name + "' (expected qbmlp or cvqnn)");
}

std::string model_name(ModelKind kind) { return kind == ModelKind::Qbmlp ? "qbmlp" : "cvqnn"; }
std::string model_label(ModelKind kind) { return kind == ModelKind::Qbmlp ? "QBMLP" : "CVQNN"; }

Scaling parse_scaling(const std::string& name) {
  const auto n = lower(name);
  if (n == "train") return Scaling::Train;
  if (n == "series") return Scaling::Series;
  throw RangeError("unknown scaling '" + name + "' (expected train or series)");
}

std::string scaling_name(Scaling scaling) { return scaling == Scaling::Train ? "train" : "series"; }

double RunConfig::effective_learning_rate() const {
  return learning_rate.value_or(model == ModelKind::Qbmlp ? 0.001 : 0.1);
}

std::size_t RunConfig::effective_iterations() const {
  return iterations.value_or(model == ModelKind::Qbmlp ? 15000 : 200);
}

void RunConfig::validate() const {
  if (country.empty() || country.find_first_of("/\\ ") != std::string::npos) {
    throw RangeError("country must be a plain identifier");
  }
  const double lr = effective_learning_rate();
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ParameterError("learning rate must be positive");
  if (effective_iterations() < 1) throw ParameterError("iterations must be at least 1");
  if (cutoff < 2 || cutoff > 40) throw RangeError("cutoff must lie in [2, 40]");
  if (layers < 1 || layers > 16) throw RangeError("layers must lie in [1, 16]");
  if (!(split_fraction > 0.0 && split_fraction < 1.0)) throw RangeError("split fraction must lie in (0, 1)");
}

std::string RunConfig::stem() const {
  return country + "_" + data::target_name(target) + "_" + model_name(model);
}

void apply_config(RunConfig& cfg, const json& config) {
  try {
    if (config.at("version").get<int>() != 1) throw SchemaError("unsupported config version");
    for (const auto& [key, value] : config.items()) {
      if (key == "version") continue;
      if (key == "country") cfg.country = value.get<std::string>();
      else if (key == "target") cfg.target = data::parse_target(value.get<std::string>());
      else if (key == "model") cfg.model = parse_model(value.get<std::string>());
      else if (key == "lr") cfg.learning_rate = value.get<double>();
      else if (key == "iterations") cfg.iterations = value.get<std::size_t>();
      else if (key == "cutoff") cfg.cutoff = value.get<std::size_t>();
      else if (key == "layers") cfg.layers = value.get<std::size_t>();
      else if (key == "variant") {
        const auto v = lower(value.get<std::string>());
        if (v == "standard") cfg.variant = cvqnn::Variant::Standard;
        else if (v == "modified") cfg.variant = cvqnn::Variant::Modified;
        else throw SchemaError("unknown variant '" + v + "'");
      } else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      else if (key == "split") cfg.split_fraction = value.get<double>();
      else if (key == "scaling") cfg.scaling = parse_scaling(value.get<std::string>());
      else if (key == "data") cfg.data = value.get<std::string>();
      else if (key == "out-dir") cfg.out_dir = value.get<std::string>();
      else throw SchemaError("unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed config: ") + e.what());
  }
}

std::string dataset_label(const std::string& country, data::Target target) {
  return display_country(country) + " - " + (target == data::Target::Deaths ? "Death" : "Confirmed") +
         " Prediction";
}

int cmd_fetch(const std::string& source, const fs::path& out_path, std::ostream& log, std::ostream& err) {
  try {
    const std::string body = data::fetch_remote(source, kFetchTimeout);
    Diagnostics diag;
    const auto records = data::derive_features(data::parse_timeseries(body), &diag);
    report_warnings(diag, err);
    if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
    write_text(out_path, data::to_canonical_csv(records));
    log << "wrote " << records.size() << " records to " << out_path.string() << '\n';
    return kOk;
  } catch (const FetchError& e) {
    err << "fetch error: " << e.what() << '\n';
    return kFetchOrSchema;
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << '\n';
    return kFetchOrSchema;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

int cmd_train(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
  try {
    cfg.validate();
    Diagnostics diag;
    std::vector<data::TimeSeriesRecord> records;
    try {
      records = load_records(cfg.data, &diag);
    } catch (const SchemaError& e) {
      err << "schema error: " << e.what() << '\n';
      return kFetchOrSchema;
    }
    const auto [train_part, test_part] = data::split(records, cfg.split_fraction);
    const auto table = data::build_features(train_part, cfg.target);
    const auto reference =
        cfg.scaling == Scaling::Train ? table : data::build_features(records, cfg.target);

    std::vector<data::FuzzyScale> feature_scales;
    for (std::size_t i = 0; i < reference.names.size(); ++i) {
      std::vector<double> column;
      for (const auto& row : reference.rows) column.push_back(row[i]);
      feature_scales.push_back(data::fuzzify(column).second);
    }
    const auto target_scale = data::fuzzify(reference.targets).second;
    const auto scaled = scale_table(table, feature_scales, target_scale);

    const double lr = cfg.effective_learning_rate();
    const std::size_t iterations = cfg.effective_iterations();
    json network;
    std::vector<double> trace;
    if (cfg.model == ModelKind::Qbmlp) {
      std::vector<qbmlp::Sample> samples;
      for (std::size_t i = 0; i < scaled.rows.size(); ++i) samples.push_back({scaled.rows[i], scaled.targets[i]});
      const std::size_t widths[] = {table.names.size(), 3, 1};
      auto result = qbmlp::train(qbmlp::make_network(widths, cfg.seed), samples, lr, iterations);
      network = qbmlp::to_json(result.network);
      trace = std::move(result.cost_trace);
    } else {
      cvqnn::Batch batch{scaled.rows, scaled.targets};
      cvqnn::TrainConfig tc;
      tc.learning_rate = lr;
      tc.iterations = iterations;
      tc.seed = cfg.seed;
      const auto net = cvqnn::Network::zeros(table.names.size(), cfg.cutoff, cfg.layers, cfg.variant);
      auto result = cvqnn::train_sgd(net, batch, tc);
      network = cvqnn::to_json(result.network);
      trace = std::move(result.cost_trace);
    }

    json feature_scales_json = json::array();
    for (const auto& s : feature_scales) feature_scales_json.push_back(scale_json(s));
    const json model{{"format", "qregress.model"},
                     {"version", 1},
                     {"model", model_name(cfg.model)},
                     {"country", cfg.country},
                     {"target", data::target_name(cfg.target)},
                     {"split_fraction", cfg.split_fraction},
                     {"scaling", scaling_name(cfg.scaling)},
                     {"seed", cfg.seed},
                     {"learning_rate", lr},
                     {"iterations", iterations},
                     {"features", table.names},
                     {"feature_scales", feature_scales_json},
                     {"target_scale", scale_json(target_scale)},
                     {"network", network}};

    fs::create_directories(cfg.out_dir);
    const fs::path base = cfg.out_dir / cfg.stem();
    write_text(fs::path(base.string() + ".model.json"), model.dump(2) + "\n");

    std::ostringstream trace_csv;
    trace_csv << "iteration,cost\n";
    report::Series series{"cost", {}, {}};
    for (std::size_t i = 0; i < trace.size(); ++i) {
      trace_csv << i << ',' << full_precision(trace[i]) << '\n';
      series.x.push_back(static_cast<double>(i));
      series.y.push_back(trace[i]);
    }
    write_text(fs::path(base.string() + "_cost.csv"), trace_csv.str());
    report::emit_plot(std::span(&series, 1), report::PlotKind::Line, fs::path(base.string() + "_cost_plot.svg"),
                      {model_label(cfg.model) + " cost: " + dataset_label(cfg.country, cfg.target), "iteration",
                       "cost"});
    report_warnings(diag, err);
    log << model_label(cfg.model) << " " << cfg.stem() << ": cost " << report::format_number(trace.front())
        << " -> " << report::format_number(trace.back()) << " over " << trace.size() << " iterations\n";
    return kOk;
  } catch (const DivergenceError& e) {
    err << "divergence: " << e.what() << '\n';
    return kDivergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

int cmd_predict(const fs::path& model_path, const fs::path& data_path, const fs::path& out_dir,
                Partition partition, std::ostream& log, std::ostream& err) {
  LoadedModel model;
  try {
    model = load_model(model_path);
  } catch (const std::exception& e) {
    err << "model error: " << e.what() << '\n';
    return kModelMismatch;
  }
  std::vector<data::TimeSeriesRecord> records;
  Diagnostics diag;
  try {
    records = load_records(data_path, &diag);
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << '\n';
    return kFetchOrSchema;
  }
  try {
    std::vector<data::TimeSeriesRecord> part;
    if (partition == Partition::All) {
      part = records;
    } else {
      auto [train_part, test_part] = data::split(records, model.split_fraction);
      part = partition == Partition::Test ? std::move(test_part) : std::move(train_part);
    }
    const auto table = data::build_features(part, model.target);
    if (table.names != model.features) throw DimensionError("model features do not match the data columns");
    const auto scaled = scale_table(table, model.feature_scales, model.target_scale);

    std::vector<double> fuzzy_pred;
    if (model.kind == ModelKind::Qbmlp) {
      const auto net = qbmlp::network_from_json(model.network);
      if (net.input_width() != table.names.size()) throw DimensionError("network input width mismatch");
      for (const auto& row : scaled.rows) {
        fuzzy_pred.push_back(qbmlp::network_forward(row, net, qbmlp::RangePolicy::ClampWarn, &diag));
      }
    } else {
      const auto net = cvqnn::network_from_json(model.network);
      if (net.modes != table.names.size()) throw DimensionError("network mode count mismatch");
      fuzzy_pred = cvqnn::predict(net, scaled.rows, &diag);
    }

    const std::string label = model_label(model.kind);
    std::ostringstream csv;
    csv << "country,target,model,date,day_index,actual,predicted\n";
    report::Series actual{"actual", {}, {}}, predicted{"predicted", {}, {}};
    for (std::size_t i = 0; i < part.size(); ++i) {
      const double value = std::max(0.0, data::defuzzify(fuzzy_pred[i], model.target_scale));
      const double truth = table.targets[i];
      csv << model.country << ',' << data::target_name(model.target) << ',' << label << ','
          << data::format_date(part[i].date) << ',' << part[i].day_index << ',' << std::llround(truth)
          << ',' << report::format_number(value) << '\n';
      actual.x.push_back(static_cast<double>(part[i].day_index));
      actual.y.push_back(truth);
      predicted.x.push_back(static_cast<double>(part[i].day_index));
      predicted.y.push_back(value);
    }
    fs::create_directories(out_dir);
    const std::string stem =
        model.country + "_" + data::target_name(model.target) + "_" + model_name(model.kind);
    write_text(out_dir / (stem + "_predictions.csv"), csv.str());
    const report::Series both[] = {actual, predicted};
    report::emit_plot(both, report::PlotKind::Line, out_dir / (stem + "_overlay.svg"),
                      {label + ": " + dataset_label(model.country, model.target), "day", data::target_name(model.target)});
    report_warnings(diag, err);
    log << "wrote " << part.size() << " predictions to " << (out_dir / (stem + "_predictions.csv")).string() << '\n';
    return kOk;
  } catch (const DimensionError& e) {
    err << "model mismatch: " << e.what() << '\n';
    return kModelMismatch;
  } catch (const DegenerateScaleError& e) {
    err << "model mismatch: " << e.what() << '\n';
    return kModelMismatch;
  } catch (const SchemaError& e) {
    err << "model mismatch: " << e.what() << '\n';
    return kModelMismatch;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

int cmd_compare(const std::vector<fs::path>& prediction_files, const fs::path& out_dir, std::ostream& log,
                std::ostream& err) {
  if (prediction_files.empty()) {
    err << "usage: compare needs at least one prediction CSV\n";
    return kUsage;
  }
  std::vector<report::ComparisonEntry> entries;
  for (const auto& path : prediction_files) {
    try {
      const CsvTable t = read_csv(read_text(path));
      const std::size_t c_country = t.column("country"), c_target = t.column("target"), c_model = t.column("model");
      const std::size_t c_actual = t.column("actual"), c_pred = t.column("predicted");
      if (t.rows.empty()) throw SchemaError("no prediction rows");
      std::vector<double> actual, predicted;
      for (const auto& row : t.rows) {
        actual.push_back(to_double(row[c_actual]));
        predicted.push_back(to_double(row[c_pred]));
      }
      const auto& first = t.rows.front();
      entries.push_back({dataset_label(first[c_country], data::parse_target(first[c_target])),
                         first[c_model], stats::t_test_two_tailed(predicted, actual)});
    } catch (const std::exception& e) {
      err << "report input error in '" << path.string() << "': " << e.what() << '\n';
      return kReportInput;
    }
  }
  try {
    const auto table = report::comparison_table(entries);
    fs::create_directories(out_dir);
    write_text(out_dir / "comparison.txt", table.text);
    write_text(out_dir / "comparison.csv", table.csv);
    log << table.text;
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum regression workbench: CVQNN and QBMLP models for epidemic time series"};
  app.require_subcommand(1);

  // fetch
  auto* fetch = app.add_subcommand("fetch", "Download or read a time series and write the canonical CSV");
  std::string source;
  fs::path fetch_out;
  fetch->add_option("--source,-s", source, "URL or file path (default: $QREGRESS_DATA_URL)");
  fetch->add_option("--out,-o", fetch_out, "Canonical CSV to write")->required();

  // train
  auto* train = app.add_subcommand("train", "Train one model on one target");
  RunConfig cfg;
  std::string country, target, model, variant;
  double lr = 0.0, split = 0.0;
  std::size_t iterations = 0, cutoff = 0, layers = 0;
  std::uint64_t seed = 0;
  fs::path data_path, out_dir, config_path;
  auto* o_country = train->add_option("--country", country, "Country identifier (default india)");
  auto* o_target = train->add_option("--target", target, "deaths | confirmed (default deaths)");
  auto* o_model = train->add_option("--model", model, "qbmlp | cvqnn (default qbmlp)");
  auto* o_lr = train->add_option("--lr", lr, "Learning rate (default 0.001 qbmlp, 0.1 cvqnn)");
  auto* o_iter = train->add_option("--iterations", iterations, "Iterations (default 15000 qbmlp, 200 cvqnn)");
  auto* o_cutoff = train->add_option("--cutoff", cutoff, "CVQNN Fock cutoff (default 10)");
  auto* o_layers = train->add_option("--layers", layers, "CVQNN layer count (default 1)");
  auto* o_variant = train->add_option("--variant", variant, "CVQNN layer variant: standard | modified");
  auto* o_seed = train->add_option("--seed", seed, "Initialization seed (default 0)");
  auto* o_split = train->add_option("--split", split, "Training fraction (default 0.8)");
  std::string scaling;
  auto* o_scaling = train->add_option("--scaling", scaling, "Fuzzy scale source: train | series (default train)");
  auto* o_data = train->add_option("--data", data_path, "Canonical CSV");
  auto* o_out = train->add_option("--out-dir", out_dir, "Output directory (default out)");
  train->add_option("--config", config_path, "Versioned JSON config mirroring these flags");

  // predict
  auto* predict = app.add_subcommand("predict", "Predict with a trained model");
  fs::path model_path, predict_data, predict_out = "out";
  std::string partition = "test";
  predict->add_option("--model", model_path, "Model file written by train")->required();
  predict->add_option("--data", predict_data, "Canonical CSV")->required();
  predict->add_option("--out-dir", predict_out, "Output directory (default out)");
  predict->add_option("--partition", partition, "test | train | all (default test)")
      ->check(CLI::IsMember({"test", "train", "all"}));

  // compare
  auto* compare = app.add_subcommand("compare", "Two-tailed t-tests of predictions against actual values");
  std::vector<fs::path> prediction_files;
  fs::path compare_out = "out";
  compare->add_option("predictions", prediction_files, "Prediction CSVs written by predict");
  compare->add_option("--out-dir", compare_out, "Output directory (default out)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  if (fetch->parsed()) {
    if (source.empty()) {
      if (const char* env = std::getenv(kDataUrlEnv)) source = env;
    }
    if (source.empty()) {
      err << "usage: fetch needs --source or $" << kDataUrlEnv << '\n';
      return kUsage;
    }
    return cmd_fetch(source, fetch_out, out, err);
  }

  if (train->parsed()) {
    try {
      if (!config_path.empty()) apply_config(cfg, json::parse(read_text(config_path)));
      if (o_country->count()) cfg.country = country;
      if (o_target->count()) cfg.target = data::parse_target(target);
      if (o_model->count()) cfg.model = parse_model(model);
      if (o_lr->count()) cfg.learning_rate = lr;
      if (o_iter->count()) cfg.iterations = iterations;
      if (o_cutoff->count()) cfg.cutoff = cutoff;
      if (o_layers->count()) cfg.layers = layers;
      if (o_variant->count()) apply_config(cfg, json{{"version", 1}, {"variant", variant}});
      if (o_seed->count()) cfg.seed = seed;
      if (o_split->count()) cfg.split_fraction = split;
      if (o_scaling->count()) cfg.scaling = parse_scaling(scaling);
      if (o_data->count()) cfg.data = data_path;
      if (o_out->count()) cfg.out_dir = out_dir;
    } catch (const std::exception& e) {
      err << "usage: " << e.what() << '\n';
      return kUsage;
    }
    if (cfg.data.empty()) {
      err << "usage: train needs --data\n";
      return kUsage;
    }
    return cmd_train(cfg, out, err);
  }

  if (predict->parsed()) {
    const Partition p = partition == "train" ? Partition::Train : (partition == "all" ? Partition::All : Partition::Test);
    return cmd_predict(model_path, predict_data, predict_out, p, out, err);
  }

  return cmd_compare(prediction_files, compare_out, out, err);
}

}  // namespace qregress::cli
