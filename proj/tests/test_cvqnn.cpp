#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "qregress/cvqnn.hpp"

using namespace qregress;
using namespace qregress::cvqnn;

namespace {

Network random_network(std::size_t modes, std::size_t cutoff, std::size_t layers, Variant variant,
                       std::uint64_t seed, double spread) {
  auto net = Network::zeros(modes, cutoff, layers, variant);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-spread, spread);
  auto p = flatten(net);
  for (double& v : p) v = u(rng);
  unflatten(net, p);
  return net;
}

Batch random_batch(std::size_t modes, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Batch b;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x(modes);
    for (double& v : x) v = u(rng);
    b.features.push_back(x);
    b.targets.push_back(u(rng));
  }
  return b;
}

}  // namespace

TEST_CASE("mesh and parameter bookkeeping") {
  CHECK(mesh_pairs(1).empty());
  CHECK(mesh_pairs(2).size() == 1);
  CHECK(mesh_pairs(3).size() == 3);
  CHECK(mesh_pairs(4).size() == 6);
  CHECK(mesh_pairs(5).size() == 10);
  const auto p3 = mesh_pairs(3);
  CHECK(p3[0] == std::pair<std::size_t, std::size_t>{0, 1});
  CHECK(p3[1] == std::pair<std::size_t, std::size_t>{1, 2});
  CHECK(p3[2] == std::pair<std::size_t, std::size_t>{0, 1});

  CHECK(layer_gate_count(3, Variant::Standard) == 21);
  CHECK(layer_gate_count(3, Variant::Modified) == 15);
  CHECK(layer_parameter_count(3, Variant::Standard) == 30);
  CHECK(layer_parameter_count(3, Variant::Modified) == 21);

  auto net = Network::zeros(3, 6, 2);
  CHECK(parameter_count(net) == 60);
  CHECK(flatten(net).size() == 60);
  CHECK(layer_program(net.layers[0], 3, Variant::Standard).size() == 21);
  CHECK_THROWS_AS(layer_program(net.layers[0], 3, Variant::Modified), DimensionError);
  CHECK_THROWS_AS(unflatten(net, std::vector<double>(59)), DimensionError);
}

TEST_CASE("flatten order follows gate order") {
  auto net = random_network(3, 4, 1, Variant::Standard, 1, 1.0);
  const auto p = flatten(net);
  const auto& l = net.layers[0];
  CHECK(p[0] == l.interferometer1_bs[0].theta);
  CHECK(p[1] == l.interferometer1_bs[0].phi);
  CHECK(p[6] == l.interferometer1_rot[0]);
  CHECK(p[9] == l.squeeze_r[0]);
  CHECK(p[12] == l.interferometer2_bs[0].theta);
  CHECK(p[18] == l.interferometer2_rot[0]);
  CHECK(p[21] == l.displacement[0].real());
  CHECK(p[22] == l.displacement[0].imag());
  CHECK(p[27] == l.kerr[0]);
  auto copy = Network::zeros(3, 4, 1);
  unflatten(copy, p);
  CHECK(flatten(copy) == p);
}

TEST_CASE("encode_input") {
  const double zeros[] = {0.0, 0.0, 0.0};
  auto v = encode_input(zeros, 10);
  CHECK(v.amplitudes()[0] == fock::Complex(1.0));
  CHECK(fock::norm(v) == 1.0);

  const double x[] = {0.3, 0.0, 0.0};
  auto s = encode_input(x, 10);
  CHECK(std::abs(fock::expectation_x(s, 0) - 0.6) < 1e-6);
  CHECK(std::abs(fock::expectation_x(s, 1)) < 1e-12);
  CHECK(std::abs(fock::expectation_x(s, 2)) < 1e-12);

  const double y[] = {0.2, 0.2, 0.2};
  CHECK(std::abs(fock::norm(encode_input(y, 10)) - 1.0) < 1e-10);

  Diagnostics diag;
  const double big[] = {2.5, 0.0, 0.0};
  encode_input(big, 10, &diag);
  CHECK(diag.warnings.size() == 1);
  const double bad[] = {NAN, 0.0, 0.0};
  CHECK_THROWS_AS(encode_input(bad, 10), ParameterError);
}

TEST_CASE("layer_apply") {
  std::mt19937_64 rng(2);
  const double x[] = {0.4, 0.7, 0.1};
  const auto in = encode_input(x, 8);

  auto same = layer_apply(in, LayerParams::zeros(3, Variant::Standard), Variant::Standard);
  for (std::size_t i = 0; i < in.size(); ++i) CHECK(std::abs(same.amplitudes()[i] - in.amplitudes()[i]) < 1e-15);

  auto p = LayerParams::zeros(3, Variant::Standard);
  p.displacement[0] = 0.3;
  const double zeros[] = {0.0, 0.0, 0.0};
  auto d = layer_apply(encode_input(zeros, 10), p, Variant::Standard);
  CHECK(std::abs(fock::expectation_x(d, 0) - 0.6) < 1e-6);

  for (auto variant : {Variant::Standard, Variant::Modified}) {
    auto net = random_network(3, 8, 1, variant, 17, 0.8);
    auto out = layer_apply(in, net.layers[0], variant);
    CHECK(std::abs(fock::norm(out) - 1.0) < 1e-9);
  }
  CHECK_THROWS_AS(layer_apply(in, LayerParams::zeros(2, Variant::Standard), Variant::Standard), DimensionError);
}

TEST_CASE("forward") {
  auto net = Network::zeros(3, 10, 1);
  net.scale = {1.0, 0.0};
  const double zeros[] = {0.0, 0.0, 0.0};
  CHECK(forward(zeros, net) == 0.0);

  auto bare = Network::zeros(3, 10, 0);
  bare.scale = {1.0, 0.0};
  const double x[] = {0.3, 0.5, 0.9};
  CHECK(std::abs(forward(x, bare) - 0.6) < 1e-6);

  auto rnd = random_network(3, 8, 2, Variant::Standard, 5, 0.3);
  CHECK(forward(x, rnd) == forward(x, rnd));

  const double short_x[] = {0.1, 0.2};
  CHECK_THROWS_AS(forward(short_x, rnd), DimensionError);
}

TEST_CASE("norm stays 1 at every gate of a forward pass") {
  for (auto variant : {Variant::Standard, Variant::Modified}) {
    auto net = random_network(3, 8, 2, variant, 23, 0.5);
    const double x[] = {0.9, 0.3, 0.6};
    std::size_t gates = 0;
    double worst = 0.0;
    std::size_t last_size = 0;
    forward(x, net, [&](const GateOp&, const FockState& s) {
      ++gates;
      worst = std::max(worst, std::abs(fock::norm(s) - 1.0));
      last_size = s.size();
    });
    CHECK(worst < 1e-9);
    CHECK(last_size == 512);
    CHECK(gates == 3 + 2 * layer_gate_count(3, variant));
  }
}

TEST_CASE("modified variant applies fewer gates and runs faster") {
  auto standard = random_network(3, 10, 1, Variant::Standard, 4, 0.3);
  auto modified = random_network(3, 10, 1, Variant::Modified, 4, 0.3);
  const double x[] = {0.2, 0.4, 0.6};
  std::size_t n_std = 0, n_mod = 0;
  forward(x, standard, [&](const GateOp&, const FockState&) { ++n_std; });
  forward(x, modified, [&](const GateOp&, const FockState&) { ++n_mod; });
  CHECK(n_mod < n_std);

  auto time_it = [&](const Network& net) {
    double best = 1e9;
    for (int rep = 0; rep < 5; ++rep) {
      const auto t0 = std::chrono::steady_clock::now();
      for (int i = 0; i < 10; ++i) forward(x, net);
      best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
  };
  CHECK(time_it(modified) < time_it(standard));
}

TEST_CASE("cost_mse") {
  const double a[] = {1.0, 2.0}, b[] = {1.0, 2.0};
  CHECK(cost_mse(a, b) == 0.0);
  const double z[] = {0.0, 0.0}, o[] = {1.0, 1.0};
  CHECK(cost_mse(z, o) == 1.0);
  const double p[] = {1.0, 3.0}, t[] = {2.0, 5.0};
  CHECK(cost_mse(p, t) == 2.5);
  const double one[] = {1.0};
  CHECK_THROWS_AS(cost_mse(one, a), DimensionError);
  CHECK_THROWS_AS(cost_mse(std::span<const double>{}, std::span<const double>{}), DimensionError);
}

TEST_CASE("grad_fd basics") {
  auto empty = Network::zeros(2, 6, 0);
  Batch b{{{0.1, 0.2}}, {0.3}};
  CHECK(grad_fd(empty, b, 1e-4).empty());

  // Vacuum input, zero parameters, unit scale: cost is even in every
  // displacement parameter, so the gradient vanishes up to O(eps^2).
  auto net = Network::zeros(2, 6, 1);
  net.scale = {1.0, 0.0};
  Batch zero{{{0.0, 0.0}}, {0.0}};
  for (double g : grad_fd(net, zero, 1e-4)) CHECK(std::abs(g) < 1e-7);

  CHECK_THROWS_AS(grad_fd(net, zero, 0.0), ParameterError);
  CHECK_THROWS_AS(grad_fd(net, Batch{}, 1e-4), DimensionError);
}

TEST_CASE("cost_and_grad_fd cost matches forward") {
  auto net = random_network(3, 6, 1, Variant::Standard, 8, 0.4);
  auto batch = random_batch(3, 5, 9);
  std::vector<double> pred;
  for (const auto& x : batch.features) pred.push_back(forward(x, net));
  CHECK(std::abs(cost_and_grad_fd(net, batch, 1e-4).cost - cost_mse(pred, batch.targets)) < 1e-14);
  const auto p = predict(net, batch.features);
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(p[i] == doctest::Approx(pred[i]).epsilon(1e-13));
}

TEST_CASE("grad_fd agrees with a one-sided oracle") {
  struct Case {
    std::size_t modes, cutoff;
    Variant variant;
  };
  const Case cases[] = {{2, 6, Variant::Standard}, {3, 6, Variant::Standard}, {3, 8, Variant::Modified},
                        {1, 8, Variant::Standard}};
  std::uint64_t seed = 100;
  for (const auto& c : cases) {
    auto net = random_network(c.modes, c.cutoff, 1, c.variant, seed++, 0.5);
    auto batch = random_batch(c.modes, 4, seed++);
    const double eps = 1e-4;
    const auto g = grad_fd(net, batch, eps);
    const auto ref = oracle::cvqnn_one_sided_gradient(net, batch, eps / 10.0);
    REQUIRE(g.size() == ref.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (std::abs(ref[k]) <= 1e-6) continue;
      INFO("modes " << c.modes << " param " << k << " fd " << g[k] << " oracle " << ref[k]);
      CHECK(oracle::relative_error(g[k], ref[k]) < 1e-3);
    }
  }
}

TEST_CASE("train_sgd fixed point and determinism") {
  auto net = Network::zeros(3, 6, 1);
  net.scale = {1.0, 0.0};
  Batch zero{{{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}}, {0.0, 0.0}};
  TrainConfig cfg;
  cfg.iterations = 5;
  cfg.init_spread = 0.0;
  const auto r = train_sgd(net, zero, cfg);
  REQUIRE(r.cost_trace.size() == 5);
  for (double c : r.cost_trace) CHECK(c == r.cost_trace.front());

  auto batch = random_batch(3, 4, 1);
  TrainConfig short_cfg;
  short_cfg.iterations = 4;
  short_cfg.seed = 9;
  const auto a = train_sgd(Network::zeros(3, 5, 1), batch, short_cfg);
  const auto b = train_sgd(Network::zeros(3, 5, 1), batch, short_cfg);
  CHECK(a.cost_trace == b.cost_trace);
  CHECK(flatten(a.network) == flatten(b.network));
}

TEST_CASE("train_sgd argument checks") {
  auto net = Network::zeros(3, 5, 1);
  TrainConfig cfg;
  cfg.iterations = 1;
  CHECK_THROWS_AS(train_sgd(net, Batch{}, cfg), SizeError);
  CHECK_THROWS_AS(train_sgd(net, Batch{{{0.1, 1.5, 0.2}}, {0.1}}, cfg), RangeError);
  cfg.learning_rate = -1.0;
  CHECK_THROWS_AS(train_sgd(net, Batch{{{0.1, 0.5, 0.2}}, {0.1}}, cfg), ParameterError);
}

TEST_CASE("train_sgd diverges loudly") {
  // The output is bounded, so only an overflowing step can diverge: a target
  // far from reach makes some gradient component exceed 1.
  auto net = Network::zeros(2, 5, 1);
  Batch b{{{0.5, 0.5}}, {-50.0}};
  TrainConfig cfg;
  cfg.learning_rate = std::numeric_limits<double>::max();
  cfg.iterations = 5;
  try {
    train_sgd(net, b, cfg);
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.iteration() == 0);
  }
}

TEST_CASE("train_sgd learns a linear map") {
  Batch b;
  for (int i = 0; i < 20; ++i) {
    const double x1 = i / 19.0;
    b.features.push_back({x1, std::fmod(0.37 * i, 1.0), std::fmod(0.61 * i + 0.2, 1.0)});
    b.targets.push_back(0.5 * x1);
  }
  TrainConfig cfg;
  cfg.seed = 1;
  const auto r = train_sgd(Network::zeros(3, 8, 1), b, cfg);
  REQUIRE(r.cost_trace.size() == 200);
  CHECK(r.cost_trace.back() < 0.1 * r.cost_trace.front());
}

TEST_CASE("json round trip") {
  auto net = random_network(3, 7, 2, Variant::Modified, 31, 0.4);
  net.scale = {0.3, 0.4};
  const auto back = network_from_json(nlohmann::json::parse(to_json(net).dump()));
  CHECK(back.modes == 3);
  CHECK(back.cutoff == 7);
  CHECK(back.variant == Variant::Modified);
  CHECK(back.scale.gain == 0.3);
  CHECK(flatten(back) == flatten(net));

  auto j = to_json(net);
  j["version"] = 2;
  CHECK_THROWS_AS(network_from_json(j), SchemaError);
  j = to_json(net);
  j["layers"][0]["kerr"].erase(0);
  CHECK_THROWS_AS(network_from_json(j), DimensionError);
}
