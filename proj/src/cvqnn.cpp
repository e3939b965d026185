#include "qregress/cvqnn.hpp"

#include <cmath>
#include <random>
#include <string>

namespace qregress::cvqnn {

namespace {

constexpr double kEncodingBound = 2.0;

std::size_t slots_of(const fock::GateSpec& spec) {
  return std::holds_alternative<fock::Beamsplitter>(spec) ||
                 std::holds_alternative<fock::Displacement>(spec)
             ? 2
             : 1;
}

fock::GateSpec shifted(fock::GateSpec spec, std::size_t slot, double delta) {
  std::visit(
      [slot, delta](auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, fock::Beamsplitter>) {
          (slot == 0 ? g.theta : g.phi) += delta;
        } else if constexpr (std::is_same_v<T, fock::Displacement>) {
          g.alpha += slot == 0 ? Complex{delta, 0.0} : Complex{0.0, delta};
        } else if constexpr (std::is_same_v<T, fock::Squeeze>) {
          g.r += delta;
        } else if constexpr (std::is_same_v<T, fock::Rotation>) {
          g.phi += delta;
        } else {
          g.kappa += delta;
        }
      },
      spec);
  return spec;
}

void check_layer_shape(const LayerParams& p, std::size_t modes, Variant variant) {
  const std::size_t bs = modes * (modes - 1) / 2;
  const bool standard = variant == Variant::Standard;
  const bool ok = p.interferometer1_bs.size() == bs && p.interferometer1_rot.size() == modes &&
                  p.squeeze_r.size() == modes &&
                  p.interferometer2_bs.size() == (standard ? bs : 0) &&
                  p.interferometer2_rot.size() == (standard ? modes : 0) &&
                  p.displacement.size() == modes && p.kerr.size() == modes;
  if (!ok) throw DimensionError("layer parameter lengths do not match the mode count and variant");
}

void check_network(const Network& net) {
  if (net.modes < 1) throw DimensionError("network needs at least one mode");
  if (net.cutoff < 2) throw DimensionError("cutoff dimension must be at least 2");
  for (const auto& layer : net.layers) check_layer_shape(layer, net.modes, net.variant);
}

struct Circuit {
  std::vector<GateOp> ops;
  std::vector<fock::GateMatrix> gates;
  // Flattened parameter k lives in slot param_slot[k] of ops[param_op[k]].
  std::vector<std::size_t> param_op;
  std::vector<std::size_t> param_slot;
};

Circuit compile(const Network& net) {
  check_network(net);
  Circuit circuit;
  for (const auto& layer : net.layers) {
    for (auto& op : layer_program(layer, net.modes, net.variant)) circuit.ops.push_back(std::move(op));
  }
  circuit.gates.reserve(circuit.ops.size());
  for (std::size_t i = 0; i < circuit.ops.size(); ++i) {
    circuit.gates.push_back(fock::build_gate(circuit.ops[i].spec, net.cutoff));
    for (std::size_t s = 0; s < slots_of(circuit.ops[i].spec); ++s) {
      circuit.param_op.push_back(i);
      circuit.param_slot.push_back(s);
    }
  }
  return circuit;
}

double readout(const FockState& state, const OutputScale& scale) {
  return scale.gain * fock::expectation_x(state, 0) + scale.offset;
}

void check_features(std::span<const double> features, std::size_t modes) {
  if (features.size() != modes) {
    throw DimensionError("feature vector has " + std::to_string(features.size()) +
                         " entries, network has " + std::to_string(modes) + " modes");
  }
}

FockState encode_observed(std::span<const double> features, std::size_t cutoff, Diagnostics* diag,
                          const GateObserver& observer) {
  if (features.empty()) throw DimensionError("cannot encode an empty feature vector");
  FockState state = fock::vacuum_state(features.size(), cutoff);
  for (std::size_t m = 0; m < features.size(); ++m) {
    const double x = features[m];
    if (!std::isfinite(x)) throw ParameterError("features must be finite");
    if (std::abs(x) > kEncodingBound && diag) {
      diag->warn("feature " + std::to_string(m) + " = " + std::to_string(x) +
                 " exceeds the displacement bound; truncation error may be large");
    }
    const GateOp op{fock::Displacement{x}, {m, 0}};
    if (x != 0.0) state = fock::apply_gate(state, fock::build_gate(op.spec, cutoff), op.targets());
    if (observer) observer(op, state);
  }
  return state;
}

const char* variant_name(Variant v) { return v == Variant::Standard ? "standard" : "modified"; }

}  // namespace

LayerParams LayerParams::zeros(std::size_t modes, Variant variant) {
  const std::size_t bs = modes * (modes - 1) / 2;
  const bool standard = variant == Variant::Standard;
  LayerParams p;
  p.interferometer1_bs.assign(bs, {});
  p.interferometer1_rot.assign(modes, 0.0);
  p.squeeze_r.assign(modes, 0.0);
  p.interferometer2_bs.assign(standard ? bs : 0, {});
  p.interferometer2_rot.assign(standard ? modes : 0, 0.0);
  p.displacement.assign(modes, Complex{});
  p.kerr.assign(modes, 0.0);
  return p;
}

Network Network::zeros(std::size_t modes, std::size_t cutoff, std::size_t layer_count,
                       Variant variant) {
  Network net;
  net.modes = modes;
  net.cutoff = cutoff;
  net.variant = variant;
  net.layers.assign(layer_count, LayerParams::zeros(modes, variant));
  return net;
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ParameterError("learning rate must be positive");
  }
  if (!(fd_epsilon > 0.0) || !std::isfinite(fd_epsilon)) {
    throw ParameterError("finite-difference step must be positive");
  }
  if (iterations < 1) throw ParameterError("iterations must be at least 1");
  if (!(init_spread >= 0.0) || !std::isfinite(init_spread)) {
    throw ParameterError("init spread must be non-negative");
  }
}

std::vector<std::pair<std::size_t, std::size_t>> mesh_pairs(std::size_t modes) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t column = 0; column < modes; ++column) {
    for (std::size_t k = column % 2; k + 1 < modes; k += 2) pairs.emplace_back(k, k + 1);
  }
  return pairs;
}

std::vector<GateOp> layer_program(const LayerParams& params, std::size_t modes, Variant variant) {
  check_layer_shape(params, modes, variant);
  const auto pairs = mesh_pairs(modes);
  std::vector<GateOp> ops;
  ops.reserve(layer_gate_count(modes, variant));

  auto interferometer = [&](const std::vector<BeamsplitterAngles>& bs, const std::vector<double>& rot) {
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      ops.push_back({fock::Beamsplitter{bs[k].theta, bs[k].phi}, {pairs[k].first, pairs[k].second}});
    }
    for (std::size_t m = 0; m < modes; ++m) ops.push_back({fock::Rotation{rot[m]}, {m, 0}});
  };

  interferometer(params.interferometer1_bs, params.interferometer1_rot);
  for (std::size_t m = 0; m < modes; ++m) ops.push_back({fock::Squeeze{params.squeeze_r[m], 0.0}, {m, 0}});
  if (variant == Variant::Standard) interferometer(params.interferometer2_bs, params.interferometer2_rot);
  for (std::size_t m = 0; m < modes; ++m) ops.push_back({fock::Displacement{params.displacement[m]}, {m, 0}});
  for (std::size_t m = 0; m < modes; ++m) ops.push_back({fock::Kerr{params.kerr[m]}, {m, 0}});
  return ops;
}

std::size_t layer_gate_count(std::size_t modes, Variant variant) {
  const std::size_t interferometer = modes * (modes - 1) / 2 + modes;
  return (variant == Variant::Standard ? 2 : 1) * interferometer + 3 * modes;
}

std::size_t layer_parameter_count(std::size_t modes, Variant variant) {
  const std::size_t interferometer = modes * (modes - 1) + modes;
  return (variant == Variant::Standard ? 2 : 1) * interferometer + 4 * modes;
}

FockState encode_input(std::span<const double> features, std::size_t cutoff, Diagnostics* diag) {
  return encode_observed(features, cutoff, diag, {});
}

FockState layer_apply(const FockState& state, const LayerParams& params, Variant variant,
                      const GateObserver& observer) {
  FockState out = state;
  for (const auto& op : layer_program(params, state.modes(), variant)) {
    out = fock::apply_gate(out, fock::build_gate(op.spec, state.cutoff()), op.targets());
    if (observer) observer(op, out);
  }
  return out;
}

double forward(std::span<const double> features, const Network& net, const GateObserver& observer,
               Diagnostics* diag) {
  check_network(net);
  check_features(features, net.modes);
  FockState state = encode_observed(features, net.cutoff, diag, observer);
  for (const auto& layer : net.layers) state = layer_apply(state, layer, net.variant, observer);
  return readout(state, net.scale);
}

double cost_mse(std::span<const double> predicted, std::span<const double> target) {
  if (predicted.empty() || predicted.size() != target.size()) {
    throw DimensionError("cost needs equal, nonzero lengths");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double d = predicted[i] - target[i];
    sum += d * d;
  }
  return sum / static_cast<double>(predicted.size());
}

std::size_t parameter_count(const Network& net) {
  return net.layers.size() * layer_parameter_count(net.modes, net.variant);
}

std::vector<double> flatten(const Network& net) {
  check_network(net);
  std::vector<double> out;
  out.reserve(parameter_count(net));
  auto bs = [&out](const std::vector<BeamsplitterAngles>& v) {
    for (const auto& b : v) {
      out.push_back(b.theta);
      out.push_back(b.phi);
    }
  };
  auto reals = [&out](const std::vector<double>& v) { out.insert(out.end(), v.begin(), v.end()); };
  for (const auto& l : net.layers) {
    bs(l.interferometer1_bs);
    reals(l.interferometer1_rot);
    reals(l.squeeze_r);
    bs(l.interferometer2_bs);
    reals(l.interferometer2_rot);
    for (const Complex& a : l.displacement) {
      out.push_back(a.real());
      out.push_back(a.imag());
    }
    reals(l.kerr);
  }
  return out;
}

void unflatten(Network& net, std::span<const double> params) {
  check_network(net);
  if (params.size() != parameter_count(net)) {
    throw DimensionError("parameter vector length does not match the network");
  }
  std::size_t k = 0;
  auto bs = [&](std::vector<BeamsplitterAngles>& v) {
    for (auto& b : v) {
      b.theta = params[k++];
      b.phi = params[k++];
    }
  };
  auto reals = [&](std::vector<double>& v) {
    for (double& x : v) x = params[k++];
  };
  for (auto& l : net.layers) {
    bs(l.interferometer1_bs);
    reals(l.interferometer1_rot);
    reals(l.squeeze_r);
    bs(l.interferometer2_bs);
    reals(l.interferometer2_rot);
    for (Complex& a : l.displacement) {
      const double re = params[k++];
      const double im = params[k++];
      a = {re, im};
    }
    reals(l.kerr);
  }
}

CostAndGradient cost_and_grad_fd(const Network& net, const Batch& batch, double eps) {
  if (!(eps > 0.0)) throw ParameterError("finite-difference step must be positive");
  if (batch.size() == 0 || batch.features.size() != batch.size()) {
    throw DimensionError("batch must be nonempty with one feature row per target");
  }
  const Circuit circuit = compile(net);
  const std::size_t params = circuit.param_op.size();

  // Perturbed copies of the gate each parameter lives in, built once.
  std::vector<fock::GateMatrix> plus_gates, minus_gates;
  plus_gates.reserve(params);
  minus_gates.reserve(params);
  for (std::size_t k = 0; k < params; ++k) {
    const auto& spec = circuit.ops[circuit.param_op[k]].spec;
    plus_gates.push_back(fock::build_gate(shifted(spec, circuit.param_slot[k], eps), net.cutoff));
    minus_gates.push_back(fock::build_gate(shifted(spec, circuit.param_slot[k], -eps), net.cutoff));
  }

  double base_sum = 0.0;
  std::vector<double> plus_sum(params, 0.0), minus_sum(params, 0.0);
  std::vector<FockState> prefix;
  prefix.reserve(circuit.ops.size() + 1);

  FockState scratch_a(net.modes, net.cutoff), scratch_b(net.modes, net.cutoff);
  auto suffix_error = [&](const fock::GateMatrix& gate, std::size_t op, double target) {
    fock::apply_gate(prefix[op], gate, circuit.ops[op].targets(), scratch_a);
    for (std::size_t j = op + 1; j < circuit.ops.size(); ++j) {
      fock::apply_gate(scratch_a, circuit.gates[j], circuit.ops[j].targets(), scratch_b);
      std::swap(scratch_a, scratch_b);
    }
    const double d = readout(scratch_a, net.scale) - target;
    return d * d;
  };

  for (std::size_t n = 0; n < batch.size(); ++n) {
    check_features(batch.features[n], net.modes);
    const double target = batch.targets[n];
    prefix.clear();
    prefix.push_back(encode_input(batch.features[n], net.cutoff));
    for (std::size_t j = 0; j < circuit.ops.size(); ++j) {
      prefix.push_back(fock::apply_gate(prefix.back(), circuit.gates[j], circuit.ops[j].targets()));
    }
    const double d = readout(prefix.back(), net.scale) - target;
    base_sum += d * d;
    for (std::size_t k = 0; k < params; ++k) {
      plus_sum[k] += suffix_error(plus_gates[k], circuit.param_op[k], target);
      minus_sum[k] += suffix_error(minus_gates[k], circuit.param_op[k], target);
    }
  }

  const auto count = static_cast<double>(batch.size());
  CostAndGradient result{base_sum / count, std::vector<double>(params)};
  for (std::size_t k = 0; k < params; ++k) {
    result.gradient[k] = (plus_sum[k] / count - minus_sum[k] / count) / (2.0 * eps);
  }
  return result;
}

std::vector<double> grad_fd(const Network& net, const Batch& batch, double eps) {
  return cost_and_grad_fd(net, batch, eps).gradient;
}

std::vector<double> predict(const Network& net, std::span<const std::vector<double>> features,
                            Diagnostics* diag) {
  const Circuit circuit = compile(net);
  std::vector<double> out;
  out.reserve(features.size());
  for (const auto& x : features) {
    check_features(x, net.modes);
    FockState state = encode_input(x, net.cutoff, diag);
    for (std::size_t j = 0; j < circuit.ops.size(); ++j) {
      state = fock::apply_gate(state, circuit.gates[j], circuit.ops[j].targets());
    }
    out.push_back(readout(state, net.scale));
  }
  return out;
}

TrainResult train_sgd(const Network& net, const Batch& data, const TrainConfig& cfg) {
  cfg.validate();
  check_network(net);
  if (data.size() == 0 || data.features.size() != data.size()) {
    throw SizeError("training data must be nonempty with one feature row per target");
  }
  for (const auto& row : data.features) {
    check_features(row, net.modes);
    for (double x : row) {
      if (!(x >= 0.0 && x <= 1.0)) throw RangeError("training features must lie in [0, 1]");
    }
  }

  TrainResult result{net, {}};
  std::vector<double> params(parameter_count(net));
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> init(-cfg.init_spread, cfg.init_spread);
  for (double& p : params) p = cfg.init_spread > 0.0 ? init(rng) : 0.0;
  unflatten(result.network, params);

  result.cost_trace.reserve(cfg.iterations);
  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    auto [cost, grad] = cost_and_grad_fd(result.network, data, cfg.fd_epsilon);
    if (!std::isfinite(cost)) throw DivergenceError(it);
    result.cost_trace.push_back(cost);
    for (std::size_t k = 0; k < params.size(); ++k) {
      params[k] -= cfg.learning_rate * grad[k];
      if (!std::isfinite(params[k])) throw DivergenceError(it);
    }
    unflatten(result.network, params);
  }
  return result;
}

nlohmann::json to_json(const Network& net) {
  check_network(net);
  using nlohmann::json;
  auto bs = [](const std::vector<BeamsplitterAngles>& v) {
    json arr = json::array();
    for (const auto& b : v) arr.push_back({b.theta, b.phi});
    return arr;
  };
  json layers = json::array();
  for (const auto& l : net.layers) {
    json disp = json::array();
    for (const Complex& a : l.displacement) disp.push_back({a.real(), a.imag()});
    layers.push_back({{"interferometer1_bs", bs(l.interferometer1_bs)},
                      {"interferometer1_rot", l.interferometer1_rot},
                      {"squeeze_r", l.squeeze_r},
                      {"interferometer2_bs", bs(l.interferometer2_bs)},
                      {"interferometer2_rot", l.interferometer2_rot},
                      {"displacement", disp},
                      {"kerr", l.kerr}});
  }
  return {{"format", "qregress.cvqnn"},
          {"version", 1},
          {"variant", variant_name(net.variant)},
          {"modes", net.modes},
          {"cutoff", net.cutoff},
          {"scale", {{"gain", net.scale.gain}, {"offset", net.scale.offset}}},
          {"layers", layers}};
}

Network network_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != "qregress.cvqnn") throw SchemaError("not a CVQNN network");
    if (j.at("version").get<int>() != 1) throw SchemaError("unsupported CVQNN network version");
    Network net;
    const auto variant = j.at("variant").get<std::string>();
    if (variant == "standard") net.variant = Variant::Standard;
    else if (variant == "modified") net.variant = Variant::Modified;
    else throw SchemaError("unknown CVQNN variant '" + variant + "'");
    net.modes = j.at("modes").get<std::size_t>();
    net.cutoff = j.at("cutoff").get<std::size_t>();
    net.scale.gain = j.at("scale").at("gain").get<double>();
    net.scale.offset = j.at("scale").at("offset").get<double>();
    auto bs = [](const nlohmann::json& arr) {
      std::vector<BeamsplitterAngles> v;
      for (const auto& b : arr) v.push_back({b.at(0).get<double>(), b.at(1).get<double>()});
      return v;
    };
    for (const auto& lj : j.at("layers")) {
      LayerParams l;
      l.interferometer1_bs = bs(lj.at("interferometer1_bs"));
      l.interferometer1_rot = lj.at("interferometer1_rot").get<std::vector<double>>();
      l.squeeze_r = lj.at("squeeze_r").get<std::vector<double>>();
      l.interferometer2_bs = bs(lj.at("interferometer2_bs"));
      l.interferometer2_rot = lj.at("interferometer2_rot").get<std::vector<double>>();
      for (const auto& a : lj.at("displacement")) l.displacement.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
      l.kerr = lj.at("kerr").get<std::vector<double>>();
      net.layers.push_back(std::move(l));
    }
    check_network(net);
    return net;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed CVQNN network: ") + e.what());
  }
}

}  // namespace qregress::cvqnn
