// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "oracles.hpp"
#include "qregress/cli.hpp"
#include "qregress/cvqnn.hpp"
#include "qregress/dataset.hpp"
#include "qregress/fock.hpp"
#include "qregress/qbmlp.hpp"
#include "qregress/stats.hpp"

using namespace qregress;
namespace fs = std::filesystem;

namespace {

const fs::path kData = QREGRESS_DATA_DIR;
const fs::path kWork = fs::temp_directory_path() / ("qregress_acceptance_" + std::to_string(::getpid()));

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(read(p));
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s criterion %d (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(),
              secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// ---------------------------------------------------------------- 1
Outcome fock_oracles() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t C = 12;
  const std::size_t mode0[] = {0};
  double coherent_err = 0.0;
  for (double a : {0.1, 0.3, 0.5}) {
    const auto s = fock::apply_gate(fock::vacuum_state(1, C), fock::build_gate(fock::Displacement{a}, C), mode0);
    double fact = 1.0;
    for (std::size_t n = 0; n <= 5; ++n) {
      if (n > 0) fact *= static_cast<double>(n);
      const double ref = std::exp(-a * a / 2.0) * std::pow(a, static_cast<double>(n)) / std::sqrt(fact);
      coherent_err = std::max(coherent_err, std::abs(s.amplitudes()[n] - fock::Complex(ref)));
    }
  }
  const auto sq = fock::apply_gate(fock::vacuum_state(1, C), fock::build_gate(fock::Squeeze{0.3}, C), mode0);
  double odd = 0.0;
  for (std::size_t n = 1; n < C; n += 2) odd = std::max(odd, std::abs(sq.amplitudes()[n]));

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double unitarity = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const fock::GateSpec specs[] = {fock::Displacement{fock::Complex(u(rng), u(rng))},
                                    fock::Squeeze{0.5 * u(rng), u(rng)},
                                    fock::Rotation{3.0 * u(rng)},
                                    fock::Kerr{u(rng)},
                                    fock::Beamsplitter{u(rng), u(rng)}};
    for (const auto& spec : specs) {
      const auto gate = fock::build_gate(spec, C);
      const auto& U = gate.entries();
      const auto I = Eigen::MatrixXcd::Identity(U.rows(), U.cols());
      unitarity = std::max(unitarity, (U.adjoint() * U - I).cwiseAbs().maxCoeff());
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {coherent_err < 1e-6 && odd < 1e-12 && unitarity < 1e-10 && secs < 5.0,
          fmt("coherent err %.2e, squeezed odd max %.2e, ", coherent_err, odd) +
              fmt("unitarity err %.2e", unitarity)};
}

// ---------------------------------------------------------------- 2
Outcome state_size() {
  const auto net = cvqnn::Network::zeros(3, 10, 1);
  const double x[] = {0.2, 0.5, 0.8};
  std::size_t smallest = SIZE_MAX, largest = 0;
  cvqnn::forward(x, net, [&](const cvqnn::GateOp&, const fock::FockState& s) {
    smallest = std::min(smallest, s.amplitudes().size());
    largest = std::max(largest, s.amplitudes().size());
  });
  const auto v = fock::vacuum_state(3, 10);
  const bool ok = v.amplitudes().size() == 1000 && smallest == 1000 && largest == 1000;
  return {ok, "amplitudes " + std::to_string(v.amplitudes().size()) + ", during forward " +
                  std::to_string(smallest) + ".." + std::to_string(largest)};
}

// ---------------------------------------------------------------- 3
Outcome gradients() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_q = 0.0;
  std::size_t nets = 0;
  for (int trial = 0; trial < 120; ++trial, ++nets) {
    const auto net = qbmlp::make_network(static_cast<std::uint64_t>(5000 + trial));
    const qbmlp::Sample s{{u(rng), u(rng), u(rng)}, u(rng)};
    const auto g = qbmlp::gradient(net, s);
    // Step near cbrt(machine eps): truncation and roundoff balance.
    const auto ref = oracle::qbmlp_fd_gradient(net, s.features, s.target, 1e-5);
    std::size_t k = 0;
    for (const auto& layer : g.layers) {
      for (const auto& n : layer) {
        std::vector<double> flat(n.theta.begin(), n.theta.end());
        flat.push_back(n.lambda);
        flat.push_back(n.delta);
        for (double v : flat) {
          if (std::abs(ref[k]) > 1e-8) worst_q = std::max(worst_q, oracle::relative_error(v, ref[k]));
          ++k;
        }
      }
    }
  }

  double worst_c = 0.0;
  std::uniform_real_distribution<double> p(-0.5, 0.5);
  const std::size_t shapes[][2] = {{1, 8}, {2, 8}, {3, 6}, {3, 8}};
  for (const auto& shape : shapes) {
    auto net = cvqnn::Network::zeros(shape[0], shape[1], 1);
    auto params = cvqnn::flatten(net);
    for (double& v : params) v = p(rng);
    cvqnn::unflatten(net, params);
    cvqnn::Batch batch;
    for (int i = 0; i < 4; ++i) {
      std::vector<double> x(shape[0]);
      for (double& v : x) v = u(rng);
      batch.features.push_back(x);
      batch.targets.push_back(u(rng));
    }
    const auto g = cvqnn::grad_fd(net, batch, 1e-4);
    const auto ref = oracle::cvqnn_one_sided_gradient(net, batch, 1e-5);
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (std::abs(ref[k]) > 1e-6) worst_c = std::max(worst_c, oracle::relative_error(g[k], ref[k]));
    }
  }
  return {nets >= 100 && worst_q < 1e-5 && worst_c < 1e-3,
          std::to_string(nets) + " QBMLP nets, worst rel " + fmt("%.2e; CVQNN worst rel %.2e", worst_q, worst_c)};
}

// ---------------------------------------------------------------- 4 and 5
struct Run {
  double first = 0.0, last = 0.0, seconds = 0.0;
  fs::path predictions;
  bool ok = false;
};
Run runs[2];

Outcome convergence() {
  std::ostringstream log, err;
  std::string detail;
  bool pass = true;
  const cli::ModelKind kinds[] = {cli::ModelKind::Qbmlp, cli::ModelKind::Cvqnn};
  const double limits[] = {120.0, 900.0};
  for (int m = 0; m < 2; ++m) {
    cli::RunConfig cfg;
    cfg.model = kinds[m];
    cfg.data = kData / "india.csv";
    cfg.out_dir = kWork / "convergence";
    const auto t0 = std::chrono::steady_clock::now();
    const int code = cli::cmd_train(cfg, log, err);
    runs[m].seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (code != cli::kOk) {
      pass = false;
      detail += cli::model_label(kinds[m]) + " exit " + std::to_string(code) + "; ";
      continue;
    }
    const auto trace = read_csv(cfg.out_dir / (cfg.stem() + "_cost.csv"));
    const std::size_t expected = cfg.effective_iterations();
    runs[m].first = std::stod(trace.at(1).at(1));
    runs[m].last = std::stod(trace.back().at(1));
    const double reduction = 1.0 - runs[m].last / runs[m].first;
    const bool ok = trace.size() == expected + 1 && reduction >= 0.8 && runs[m].seconds < limits[m];
    pass = pass && ok;
    detail += cli::model_label(kinds[m]) + fmt(" cost %.4g -> %.4g (%.1f%% reduction", runs[m].first, runs[m].last,
                                               100.0 * reduction) +
              fmt(", %.0f s); ", runs[m].seconds);

    if (cli::cmd_predict(cfg.out_dir / (cfg.stem() + ".model.json"), cfg.data, cfg.out_dir, cli::Partition::Test,
                         log, err) == cli::kOk) {
      runs[m].predictions = cfg.out_dir / (cfg.stem() + "_predictions.csv");
      runs[m].ok = true;
    }
  }
  if (!err.str().empty()) std::cerr << err.str();
  return {pass, detail};
}

Outcome table_shape() {
  std::string detail;
  bool pass = true;
  for (const auto& run : runs) {
    if (!run.ok) return {false, "criterion 4 runs did not produce predictions"};
    const auto rows = read_csv(run.predictions);
    std::vector<double> actual, predicted;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      actual.push_back(std::stod(rows[i].at(5)));
      predicted.push_back(std::stod(rows[i].at(6)));
    }
    const auto r = stats::t_test_two_tailed(predicted, actual);
    pass = pass && std::abs(r.statistic) < 0.5 && r.p_value > 0.5;
    detail += rows.at(1).at(2) + fmt(" t %.4g p %.4g (n %.0f); ", r.statistic, r.p_value,
                                     static_cast<double>(predicted.size()));
  }
  return {pass, detail};
}

// ---------------------------------------------------------------- 6
Outcome statistics() {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<std::size_t> n(2, 60);
  std::uniform_real_distribution<double> loc(-10.0, 10.0), spread(0.05, 20.0);
  double worst_t = 0.0, worst_p = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::normal_distribution<double> da(loc(rng), spread(rng)), db(loc(rng), spread(rng));
    std::vector<double> a(n(rng)), b(n(rng));
    for (double& x : a) x = da(rng);
    for (double& x : b) x = db(rng);
    const auto r = stats::t_test_two_tailed(a, b);
    const auto ref = oracle::welch(a, b);
    worst_t = std::max(worst_t, std::abs(r.statistic - ref.statistic));
    worst_p = std::max(worst_p, std::abs(r.p_value - ref.p));
  }
  const std::vector<double> same{3.0, 1.0, 4.0, 1.0, 5.0, 9.0};
  const auto id = stats::t_test_two_tailed(same, same);
  const bool exact = id.statistic == 0.0 && id.p_value == 1.0;
  return {worst_t < 1e-9 && worst_p < 1e-7 && exact,
          fmt("worst |dt| %.2e, worst |dp| %.2e, identical (%g, ", worst_t, worst_p) +
              fmt("%g)", id.p_value) + (exact ? "" : " [identical case wrong]")};
}

// ---------------------------------------------------------------- 7
std::string pipeline(const fs::path& dir) {
  std::ostringstream log, err;
  std::string combined;
  const auto csv = dir / "india.csv";
  if (cli::cmd_fetch((kData / "india.csv").string(), csv, log, err) != cli::kOk) return "fetch failed";
  std::vector<fs::path> predictions;
  for (auto kind : {cli::ModelKind::Qbmlp, cli::ModelKind::Cvqnn}) {
    cli::RunConfig cfg;
    cfg.model = kind;
    cfg.data = csv;
    cfg.out_dir = dir;
    cfg.seed = 11;
    cfg.iterations = kind == cli::ModelKind::Qbmlp ? 500 : 3;
    cfg.cutoff = 6;
    if (cli::cmd_train(cfg, log, err) != cli::kOk) return "train failed";
    if (cli::cmd_predict(dir / (cfg.stem() + ".model.json"), csv, dir, cli::Partition::Test, log, err) !=
        cli::kOk) {
      return "predict failed";
    }
    predictions.push_back(dir / (cfg.stem() + "_predictions.csv"));
  }
  if (cli::cmd_compare(predictions, dir, log, err) != cli::kOk) return "compare failed";
  return {};
}

Outcome integrity() {
  std::string detail;
  bool pass = true;
  for (const char* name : {"india.csv", "usa.csv"}) {
    const auto records = data::derive_features(data::parse_timeseries(read(kData / name)));
    std::int64_t sum = 0;
    for (const auto& r : records) sum += r.new_cases;
    const bool ok = sum == records.back().active;
    pass = pass && ok;
    detail += std::string(name) + (ok ? " telescopes; " : " does not telescope; ");
  }

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 3.0e6);
  std::vector<double> xs(5000);
  for (double& x : xs) x = u(rng);
  const auto [fx, scale] = data::fuzzify(xs);
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) worst = std::max(worst, std::abs(data::defuzzify(fx[i], scale) - xs[i]));
  pass = pass && worst < 1e-9;
  detail += fmt("round trip %.2e; ", worst);

  const fs::path a = kWork / "pipeline_a", b = kWork / "pipeline_b";
  fs::create_directories(a);
  fs::create_directories(b);
  for (const auto& dir : {a, b}) {
    const auto problem = pipeline(dir);
    if (!problem.empty()) return {false, detail + problem};
  }
  std::size_t files = 0, differing = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    ++files;
    const auto other = b / entry.path().filename();
    if (!fs::exists(other) || read(entry.path()) != read(other)) ++differing;
  }
  for (const auto& entry : fs::directory_iterator(b)) {
    if (!fs::exists(a / entry.path().filename())) ++differing;
  }
  pass = pass && differing == 0 && files > 0;
  detail += std::to_string(files) + " pipeline outputs, " + std::to_string(differing) + " differ";
  return {pass, detail};
}

}  // namespace

int main() {
  fs::remove_all(kWork);
  fs::create_directories(kWork);
  criterion(1, "Fock simulator oracles", fock_oracles);
  criterion(2, "state size", state_size);
  criterion(3, "gradient fidelity", gradients);
  criterion(4, "convergence at default hyperparameters", convergence);
  criterion(5, "t-test envelope on the test split", table_shape);
  criterion(6, "statistics oracle", statistics);
  criterion(7, "pipeline integrity", integrity);
  fs::remove_all(kWork);
  std::printf("%d of 7 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
