#include "qregress/qbmlp.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace qregress::qbmlp {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
// |u|^2 below this is treated as u == 0.
constexpr double kDegenerateNormSq = 1e-30;

struct Trace {
  // signals[0] holds the encoded inputs, signals[l + 1] the outputs of layer l.
  std::vector<std::vector<Complex>> signals;
  std::vector<std::vector<NeuronOutput>> neurons;
};

Trace run(std::span<const double> features, const Network& net, RangePolicy policy,
          Diagnostics* diag) {
  net.validate();
  if (features.size() != net.input_width()) {
    throw DimensionError("expected " + std::to_string(net.input_width()) + " features, got " +
                         std::to_string(features.size()));
  }
  Trace trace;
  trace.signals.reserve(net.layers.size() + 1);
  trace.neurons.reserve(net.layers.size());
  auto& inputs = trace.signals.emplace_back();
  for (double x : features) inputs.push_back(encode_angle(x, policy, diag));
  for (const auto& layer : net.layers) {
    auto& outs = trace.neurons.emplace_back();
    std::vector<Complex> next;
    next.reserve(layer.size());
    for (const auto& neuron : layer) {
      outs.push_back(neuron_forward(trace.signals.back(), neuron));
      next.push_back(outs.back().out);
    }
    trace.signals.push_back(std::move(next));
  }
  return trace;
}

}  // namespace

std::size_t Network::input_width() const {
  if (layers.empty() || layers.front().empty()) throw DimensionError("network has no neurons");
  return layers.front().front().theta.size();
}

void Network::validate() const {
  if (layers.empty()) throw DimensionError("network has no layers");
  std::size_t width = input_width();
  if (width == 0) throw DimensionError("network has no inputs");
  for (const auto& layer : layers) {
    if (layer.empty()) throw DimensionError("empty layer");
    for (const auto& neuron : layer) {
      if (neuron.theta.size() != width) {
        throw DimensionError("neuron weight count does not match the preceding layer width");
      }
    }
    width = layer.size();
  }
  if (layers.back().size() != 1) throw DimensionError("output layer must hold exactly one neuron");
}

Network make_network(std::span<const std::size_t> widths, std::uint64_t seed) {
  if (widths.size() < 2) throw DimensionError("need an input width and at least one layer");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> init(-0.5, 0.5);
  Network net;
  net.seed = seed;
  for (std::size_t l = 1; l < widths.size(); ++l) {
    auto& layer = net.layers.emplace_back();
    for (std::size_t j = 0; j < widths[l]; ++j) {
      NeuronParams p;
      for (std::size_t i = 0; i < widths[l - 1]; ++i) p.theta.push_back(init(rng));
      p.lambda = init(rng);
      p.delta = init(rng);
      layer.push_back(std::move(p));
    }
  }
  net.validate();
  return net;
}

Network make_network(std::uint64_t seed) {
  const std::size_t widths[] = {3, 3, 1};
  return make_network(widths, seed);
}

Complex encode_angle(double x, RangePolicy policy, Diagnostics* diag) {
  if (!std::isfinite(x)) throw RangeError("input must be finite");
  if (x < 0.0 || x > 1.0) {
    if (policy == RangePolicy::Strict) {
      throw RangeError("input " + std::to_string(x) + " outside [0, 1]");
    }
    if (diag) diag->warn("input " + std::to_string(x) + " clamped to [0, 1]");
    x = x < 0.0 ? 0.0 : 1.0;
  }
  return std::polar(1.0, kHalfPi * x);
}

NeuronOutput neuron_forward(std::span<const Complex> inputs, const NeuronParams& params) {
  if (inputs.size() != params.theta.size()) throw DimensionError("input count does not match weights");
  NeuronOutput r;
  for (std::size_t i = 0; i < inputs.size(); ++i) r.u += std::polar(1.0, params.theta[i]) * inputs[i];
  r.u -= std::polar(1.0, params.lambda);
  double arg_u = 0.0;
  if (std::norm(r.u) < kDegenerateNormSq) {
    r.degenerate = true;
  } else {
    arg_u = std::atan2(r.u.imag(), r.u.real());
  }
  r.y = kHalfPi * std::tanh(params.delta) - arg_u;
  r.out = std::polar(1.0, r.y);
  return r;
}

double network_forward(std::span<const double> features, const Network& net, RangePolicy policy,
                       Diagnostics* diag) {
  const Trace trace = run(features, net, policy, diag);
  const double s = std::sin(trace.neurons.back().front().y);
  return s * s;
}

Gradient gradient(const Network& net, const Sample& sample, double* loss) {
  const Trace trace = run(sample.features, net, RangePolicy::Strict, nullptr);
  const double y_out = trace.neurons.back().front().y;
  const double s = std::sin(y_out);
  const double output = s * s;
  const double err = output - sample.target;
  if (loss) *loss = 0.5 * err * err;

  Gradient grad;
  grad.layers.resize(net.layers.size());
  // dL/dy for the neurons of the current layer; d sin^2(y)/dy = sin(2y).
  std::vector<double> upstream{err * std::sin(2.0 * y_out)};

  for (std::size_t l = net.layers.size(); l-- > 0;) {
    const auto& layer = net.layers[l];
    const auto& inputs = trace.signals[l];
    std::vector<double> downstream(inputs.size(), 0.0);
    auto& glayer = grad.layers[l];
    glayer.resize(layer.size());
    for (std::size_t j = 0; j < layer.size(); ++j) {
      const NeuronParams& p = layer[j];
      const NeuronOutput& n = trace.neurons[l][j];
      const double g = upstream[j];
      NeuronParams& gp = glayer[j];
      gp.theta.assign(p.theta.size(), 0.0);
      const double t = std::tanh(p.delta);
      gp.delta = g * kHalfPi * (1.0 - t * t);
      if (n.degenerate) {
        grad.degenerate = true;
        continue;
      }
      // d arg(u) / d phi = Re(conj(u) * du/dphi / i) / |u|^2, and y = ... - arg(u).
      const double inv = 1.0 / std::norm(n.u);
      for (std::size_t i = 0; i < p.theta.size(); ++i) {
        const Complex w = std::polar(1.0, p.theta[i]) * inputs[i];
        const double darg = (std::conj(n.u) * w).real() * inv;
        gp.theta[i] = -g * darg;
        downstream[i] -= g * darg;
      }
      gp.lambda = g * (std::conj(n.u) * std::polar(1.0, p.lambda)).real() * inv;
    }
    upstream = std::move(downstream);
  }
  return grad;
}

namespace {

void apply_update(Network& net, const Gradient& grad, double learning_rate) {
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    for (std::size_t j = 0; j < net.layers[l].size(); ++j) {
      NeuronParams& p = net.layers[l][j];
      const NeuronParams& g = grad.layers[l][j];
      for (std::size_t i = 0; i < p.theta.size(); ++i) p.theta[i] -= learning_rate * g.theta[i];
      p.lambda -= learning_rate * g.lambda;
      p.delta -= learning_rate * g.delta;
    }
  }
}

}  // namespace

StepResult backprop_step(const Network& net, const Sample& sample, double learning_rate) {
  StepResult result{net, 0.0, false};
  const Gradient grad = gradient(net, sample, &result.loss);
  result.degenerate = grad.degenerate;
  apply_update(result.network, grad, learning_rate);
  return result;
}

namespace {

bool finite_params(const Network& net) {
  for (const auto& layer : net.layers) {
    for (const auto& n : layer) {
      if (!std::isfinite(n.lambda) || !std::isfinite(n.delta)) return false;
      for (double t : n.theta) {
        if (!std::isfinite(t)) return false;
      }
    }
  }
  return true;
}

}  // namespace

TrainResult train(const Network& net, std::span<const Sample> data, double learning_rate,
                  std::size_t iterations) {
  net.validate();
  if (data.empty()) throw SizeError("training data is empty");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ParameterError("learning rate must be positive");
  }
  for (const auto& sample : data) {
    if (!(sample.target >= 0.0 && sample.target <= 1.0)) throw RangeError("targets must lie in [0, 1]");
    for (double x : sample.features) {
      if (!(x >= 0.0 && x <= 1.0)) throw RangeError("features must lie in [0, 1]");
    }
  }

  TrainResult result{net, {}};
  result.network.learning_rate = learning_rate;
  result.network.iterations = iterations;
  result.cost_trace.reserve(iterations);
  for (std::size_t it = 0; it < iterations; ++it) {
    double sum = 0.0;
    for (const auto& sample : data) {
      double loss = 0.0;
      const Gradient grad = gradient(result.network, sample, &loss);
      sum += loss;
      apply_update(result.network, grad, learning_rate);
    }
    const double cost = sum / static_cast<double>(data.size());
    if (!std::isfinite(cost) || !finite_params(result.network)) throw DivergenceError(it);
    result.cost_trace.push_back(cost);
  }
  return result;
}

nlohmann::json to_json(const Network& net) {
  net.validate();
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& layer : net.layers) {
    nlohmann::json lj = nlohmann::json::array();
    for (const auto& n : layer) lj.push_back({{"theta", n.theta}, {"lambda", n.lambda}, {"delta", n.delta}});
    layers.push_back(std::move(lj));
  }
  return {{"format", "qregress.qbmlp"},
          {"version", 1},
          {"learning_rate", net.learning_rate},
          {"iterations", net.iterations},
          {"seed", net.seed},
          {"layers", layers}};
}

Network network_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != "qregress.qbmlp") throw SchemaError("not a QBMLP network");
    if (j.at("version").get<int>() != 1) throw SchemaError("unsupported QBMLP network version");
    Network net;
    net.learning_rate = j.at("learning_rate").get<double>();
    net.iterations = j.at("iterations").get<std::size_t>();
    net.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& lj : j.at("layers")) {
      auto& layer = net.layers.emplace_back();
      for (const auto& nj : lj) {
        layer.push_back({nj.at("theta").get<std::vector<double>>(), nj.at("lambda").get<double>(),
                         nj.at("delta").get<double>()});
      }
    }
    net.validate();
    return net;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed QBMLP network: ") + e.what());
  }
}

}  // namespace qregress::qbmlp
