#pragma once

// Quantum-inspired backpropagation multilayer perceptron.
//
// Every signal is a single-qubit state cos(a)|0> + sin(a)|1>, carried as the
// unit phasor e^{ia}. A neuron rotates each input by its weight phase,
// subtracts the threshold phasor, and emits
//   y = (pi/2) tanh(delta) - arg(u),   u = sum_i e^{i theta_i} z_i - e^{i lambda}
// as the phasor e^{iy}. The network output is the probability of |1> on the
// last neuron, sin^2(y).

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "qregress/error.hpp"

namespace qregress::qbmlp {

using Complex = std::complex<double>;

struct NeuronParams {
  std::vector<double> theta;  // one phase weight per input
  double lambda = 0.0;        // threshold phase
  double delta = 0.0;         // reversal parameter
};

struct Network {
  /// layers[l][j] is neuron j of layer l; the input layer has no neurons.
  std::vector<std::vector<NeuronParams>> layers;
  double learning_rate = 0.001;
  std::size_t iterations = 15000;
  std::uint64_t seed = 0;

  std::size_t input_width() const;
  /// Throws DimensionError unless each neuron's theta count equals the width
  /// of the preceding layer and the last layer holds exactly one neuron.
  void validate() const;
};

/// Network with layer widths `widths` (input width first, default 3-3-1) and
/// theta, lambda, delta drawn uniformly from [-0.5, 0.5].
Network make_network(std::span<const std::size_t> widths, std::uint64_t seed);
Network make_network(std::uint64_t seed = 0);

/// What to do with fuzzified inputs outside [0, 1].
enum class RangePolicy { Strict, ClampWarn };

/// e^{i pi x / 2}. Throws RangeError for x outside [0, 1] under Strict.
Complex encode_angle(double x, RangePolicy policy = RangePolicy::Strict,
                     Diagnostics* diag = nullptr);

struct NeuronOutput {
  double y = 0.0;
  Complex out{1.0, 0.0};
  Complex u{};
  bool degenerate = false;  // u == 0, arg(u) taken as 0
};

NeuronOutput neuron_forward(std::span<const Complex> inputs, const NeuronParams& params);

/// sin^2 of the final neuron's phase.
double network_forward(std::span<const double> features, const Network& net,
                       RangePolicy policy = RangePolicy::Strict, Diagnostics* diag = nullptr);

struct Sample {
  std::vector<double> features;
  double target = 0.0;
};

/// d loss / d parameter, shaped like Network::layers.
struct Gradient {
  std::vector<std::vector<NeuronParams>> layers;
  bool degenerate = false;
};

/// Analytic gradient of (O - t)^2 / 2. Degenerate neurons contribute no
/// phase gradient.
Gradient gradient(const Network& net, const Sample& sample, double* loss = nullptr);

struct StepResult {
  Network network;
  double loss = 0.0;
  bool degenerate = false;
};

/// One gradient-descent update; `loss` is measured before the update.
StepResult backprop_step(const Network& net, const Sample& sample, double learning_rate);

struct TrainResult {
  Network network;
  std::vector<double> cost_trace;  // mean per-sample loss of each pass
};

/// `iterations` passes over `data`, one backprop step per sample in order.
/// Throws DivergenceError on a non-finite loss.
TrainResult train(const Network& net, std::span<const Sample> data, double learning_rate = 0.001,
                  std::size_t iterations = 15000);

nlohmann::json to_json(const Network& net);
Network network_from_json(const nlohmann::json& j);

}  // namespace qregress::qbmlp
