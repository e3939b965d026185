#pragma once

// Truncated Fock-basis simulation of pure multi-mode continuous-variable
// states.
//
// Amplitudes are stored mode-major: the flat index of |n_0, n_1, ..., n_{W-1}>
// is sum_k n_k * C^(W-1-k), so mode 0 is the most significant digit.
//
// Gates are built by truncating the anti-Hermitian generator to the cutoff
// and exponentiating it, which makes every gate exactly unitary on the
// truncated space. Quadratures use hbar = 2, i.e. x = a + a^dagger.

#include <array>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "qregress/error.hpp"

namespace qregress::fock {

using Complex = std::complex<double>;

/// Pure state over `modes` qumodes, each truncated to `cutoff` Fock levels.
class FockState {
 public:
  /// All-zero amplitude tensor. Throws DimensionError unless modes >= 1,
  /// cutoff >= 2 and cutoff^modes fits the supported size.
  FockState(std::size_t modes, std::size_t cutoff);

  std::size_t modes() const noexcept { return modes_; }
  std::size_t cutoff() const noexcept { return cutoff_; }
  std::size_t size() const noexcept { return amplitudes_.size(); }

  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
  std::span<Complex> amplitudes() noexcept { return amplitudes_; }

  /// Flat index of a Fock occupation tuple (one entry per mode).
  std::size_t index_of(std::span<const std::size_t> occupation) const;
  Complex amplitude(std::span<const std::size_t> occupation) const {
    return amplitudes_[index_of(occupation)];
  }

  /// C^(W-1-mode): distance between consecutive occupations of `mode`.
  std::size_t stride(std::size_t mode) const;

 private:
  std::size_t modes_;
  std::size_t cutoff_;
  std::vector<Complex> amplitudes_;
};

// Gate parameterizations.
struct Displacement {
  Complex alpha;
};
struct Squeeze {
  double r;
  double phi = 0.0;
};
struct Rotation {
  double phi;
};
struct Kerr {
  double kappa;
};
struct Beamsplitter {
  double theta;
  double phi = 0.0;
};

using GateSpec = std::variant<Displacement, Squeeze, Rotation, Kerr, Beamsplitter>;

/// 2 for Beamsplitter, 1 otherwise.
std::size_t arity(const GateSpec& spec) noexcept;

/// Dense gate matrix plus a column-compressed copy of its nonzero entries.
///
/// Two-mode matrices index the local basis as n_first * C + n_second, where
/// "first" is the first mode passed to apply_gate.
class GateMatrix {
 public:
  GateMatrix(Eigen::MatrixXcd entries, std::size_t arity, std::size_t cutoff);

  const Eigen::MatrixXcd& entries() const noexcept { return entries_; }
  std::size_t arity() const noexcept { return arity_; }
  std::size_t cutoff() const noexcept { return cutoff_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(entries_.rows()); }

  struct Entry {
    std::size_t row;
    Complex value;
  };
  /// Nonzero entries of column j.
  std::span<const Entry> column(std::size_t j) const {
    return {entries_by_column_.data() + column_start_[j],
            column_start_[j + 1] - column_start_[j]};
  }
  std::size_t nonzeros() const noexcept { return entries_by_column_.size(); }
  bool is_diagonal() const noexcept { return diagonal_; }

 private:
  Eigen::MatrixXcd entries_;
  std::size_t arity_;
  std::size_t cutoff_;
  std::vector<Entry> entries_by_column_;
  std::vector<std::size_t> column_start_;
  bool diagonal_ = true;
};

/// |0...0> over `modes` modes.
FockState vacuum_state(std::size_t modes, std::size_t cutoff);

/// C x C annihilation matrix, sqrt(n) on the superdiagonal.
Eigen::MatrixXcd annihilation(std::size_t cutoff);

/// Truncated anti-Hermitian generator A of the gate, so that the gate is
/// exp(A). Rotation and Kerr yield diagonal generators.
Eigen::MatrixXcd generator(const GateSpec& spec, std::size_t cutoff);

/// exp(A) for anti-Hermitian A. The sparsity graph of A is split into
/// connected components and each block is exponentiated through the
/// eigendecomposition of the Hermitian matrix -iA, so entries coupling
/// different blocks are exactly zero.
Eigen::MatrixXcd expm_anti_hermitian(const Eigen::MatrixXcd& generator);

/// Throws ParameterError on non-finite parameters and DimensionError when
/// cutoff < 2.
GateMatrix build_gate(const GateSpec& spec, std::size_t cutoff);

/// Contracts `gate` with `state` along `modes` (one mode per gate arity, in
/// the gate's local order). Returns a new state; the input is unchanged.
FockState apply_gate(const FockState& state, const GateMatrix& gate,
                     std::span<const std::size_t> modes);

/// Same contraction written into `out`, which is resized to match `state`
/// when needed. `out` must not alias `state`.
void apply_gate(const FockState& state, const GateMatrix& gate, std::span<const std::size_t> modes,
                FockState& out);

inline FockState apply_gate(const FockState& state, const GateMatrix& gate,
                            std::initializer_list<std::size_t> modes) {
  return apply_gate(state, gate, std::span<const std::size_t>(modes.begin(), modes.size()));
}

/// Euclidean norm of the amplitude vector.
double norm(const FockState& state) noexcept;

/// <x> on `mode` with x = a + a^dagger (hbar = 2), normalized by <psi|psi>.
/// Throws DegenerateStateError for a zero state.
double expectation_x(const FockState& state, std::size_t mode);

/// Photon-number distribution of one mode, traced over all others.
std::vector<double> photon_distribution(const FockState& state, std::size_t mode);

/// Debug dump: header "index,re,im" then one row per amplitude, printed
/// with round-trip precision.
void write_amplitudes_csv(const FockState& state, std::ostream& out);

}  // namespace qregress::fock
