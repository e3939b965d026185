#pragma once

// Continuous-variable quantum neural network on the Fock simulator.
//
// Features are encoded by displacing the vacuum of each mode, passed through
// a stack of layers, and read out as the position expectation of mode 0
// mapped through a fixed affine output scale.
//
// A Standard layer applies, in order:
//   interferometer 1 (beamsplitter mesh, then one rotation per mode),
//   squeezers, interferometer 2, displacements, Kerr gates.
// A Modified layer drops interferometer 2.
//
// Flattened parameter order (per layer, layers in order):
//   interferometer-1 beamsplitters as (theta, phi) pairs, interferometer-1
//   rotations, squeeze magnitudes, [interferometer-2 beamsplitters, rotations
//   -- Standard only], displacements as (re, im) pairs, Kerr strengths.
// This is also the order in which the gates are applied.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qregress/error.hpp"
#include "qregress/fock.hpp"

namespace qregress::cvqnn {

using fock::Complex;
using fock::FockState;

enum class Variant { Standard, Modified };

struct BeamsplitterAngles {
  double theta = 0.0;
  double phi = 0.0;
};

struct LayerParams {
  std::vector<BeamsplitterAngles> interferometer1_bs;
  std::vector<double> interferometer1_rot;
  std::vector<double> squeeze_r;
  std::vector<BeamsplitterAngles> interferometer2_bs;  // empty for Modified
  std::vector<double> interferometer2_rot;             // empty for Modified
  std::vector<Complex> displacement;
  std::vector<double> kerr;

  /// All-zero parameters sized for `modes` qumodes.
  static LayerParams zeros(std::size_t modes, Variant variant);
};

/// Affine map from <x> on mode 0 to the fuzzified target range.
struct OutputScale {
  double gain = 0.25;
  double offset = 0.5;
};

struct Network {
  std::size_t modes = 3;
  std::size_t cutoff = 10;
  std::vector<LayerParams> layers;
  Variant variant = Variant::Standard;
  OutputScale scale;

  /// Network with `layer_count` all-zero layers.
  static Network zeros(std::size_t modes, std::size_t cutoff, std::size_t layer_count,
                       Variant variant = Variant::Standard);
};

struct TrainConfig {
  double learning_rate = 0.1;
  std::size_t iterations = 200;
  double fd_epsilon = 1e-4;
  std::uint64_t seed = 0;
  double init_spread = 0.05;

  void validate() const;
};

/// Pairs (mode a, mode b) of the rectangular beamsplitter mesh, W(W-1)/2 of
/// them, in application order.
std::vector<std::pair<std::size_t, std::size_t>> mesh_pairs(std::size_t modes);

/// One gate of a compiled circuit.
struct GateOp {
  fock::GateSpec spec;
  std::array<std::size_t, 2> modes{};

  std::span<const std::size_t> targets() const { return {modes.data(), fock::arity(spec)}; }
};

/// Gates of one layer in application order. Throws DimensionError when the
/// parameter lists do not match `modes` and `variant`.
std::vector<GateOp> layer_program(const LayerParams& params, std::size_t modes, Variant variant);

/// Gates in one layer: 2*W(W-1)/2 + 5W for Standard, W(W-1)/2 + 4W for Modified.
std::size_t layer_gate_count(std::size_t modes, Variant variant);

/// Number of real trainable parameters in one layer.
std::size_t layer_parameter_count(std::size_t modes, Variant variant);

/// Called after every gate of a forward pass, including encoding gates.
using GateObserver = std::function<void(const GateOp&, const FockState&)>;

/// Vacuum with D(x_i) on mode i. Features with |x_i| > 2 are still encoded
/// and a warning is added to `diag`.
FockState encode_input(std::span<const double> features, std::size_t cutoff,
                       Diagnostics* diag = nullptr);

FockState layer_apply(const FockState& state, const LayerParams& params, Variant variant,
                      const GateObserver& observer = {});

/// gain * <x>_mode0 + offset after encoding and all layers.
double forward(std::span<const double> features, const Network& net,
               const GateObserver& observer = {}, Diagnostics* diag = nullptr);

/// Mean squared difference. Throws DimensionError on empty or unequal input.
double cost_mse(std::span<const double> predicted, std::span<const double> target);

/// Training/evaluation samples: one feature row and one target per sample.
struct Batch {
  std::vector<std::vector<double>> features;
  std::vector<double> targets;

  std::size_t size() const noexcept { return targets.size(); }
};

std::vector<double> flatten(const Network& net);
/// Writes `params` back into `net`. Throws DimensionError on length mismatch.
void unflatten(Network& net, std::span<const double> params);
std::size_t parameter_count(const Network& net);

/// Central finite-difference gradient of cost_mse over the batch, one entry
/// per flattened parameter.
std::vector<double> grad_fd(const Network& net, const Batch& batch, double eps);

struct CostAndGradient {
  double cost;
  std::vector<double> gradient;
};
/// cost_mse at the current parameters together with grad_fd.
CostAndGradient cost_and_grad_fd(const Network& net, const Batch& batch, double eps);

/// Predictions for every sample, gates built once.
std::vector<double> predict(const Network& net, std::span<const std::vector<double>> features,
                            Diagnostics* diag = nullptr);

struct TrainResult {
  Network network;
  std::vector<double> cost_trace;
};

/// Full-batch gradient descent. Parameters are first drawn uniformly from
/// [-init_spread, init_spread] with the seeded generator; cost_trace[i] is the
/// cost before update i. Throws DivergenceError on a non-finite cost.
TrainResult train_sgd(const Network& net, const Batch& data, const TrainConfig& cfg);

// Versioned serialization.
nlohmann::json to_json(const Network& net);
Network network_from_json(const nlohmann::json& j);

}  // namespace qregress::cvqnn
