#include "qregress/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <string>

namespace qregress::fock {

namespace {

// 2^28 amplitudes (4 GiB) is far beyond anything the networks need.
constexpr std::size_t kMaxAmplitudes = std::size_t{1} << 28;

std::size_t checked_size(std::size_t modes, std::size_t cutoff) {
  if (modes < 1) throw DimensionError("FockState needs at least one mode");
  if (cutoff < 2) throw DimensionError("cutoff dimension must be at least 2");
  std::size_t size = 1;
  for (std::size_t k = 0; k < modes; ++k) {
    if (size > kMaxAmplitudes / cutoff) {
      throw DimensionError("cutoff^modes exceeds the supported state size");
    }
    size *= cutoff;
  }
  return size;
}

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void check_finite(const GateSpec& spec) {
  const bool ok = std::visit(
      [](const auto& g) -> bool {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, Displacement>) {
          return finite(g.alpha);
        } else if constexpr (std::is_same_v<T, Squeeze>) {
          return std::isfinite(g.r) && std::isfinite(g.phi);
        } else if constexpr (std::is_same_v<T, Rotation>) {
          return std::isfinite(g.phi);
        } else if constexpr (std::is_same_v<T, Kerr>) {
          return std::isfinite(g.kappa);
        } else {
          return std::isfinite(g.theta) && std::isfinite(g.phi);
        }
      },
      spec);
  if (!ok) throw ParameterError("gate parameters must be finite");
}

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
  std::vector<std::size_t> parent;
};

}  // namespace

FockState::FockState(std::size_t modes, std::size_t cutoff)
    : modes_(modes), cutoff_(cutoff), amplitudes_(checked_size(modes, cutoff)) {}

std::size_t FockState::stride(std::size_t mode) const {
  if (mode >= modes_) throw DimensionError("mode index out of range");
  std::size_t s = 1;
  for (std::size_t k = mode + 1; k < modes_; ++k) s *= cutoff_;
  return s;
}

std::size_t FockState::index_of(std::span<const std::size_t> occupation) const {
  if (occupation.size() != modes_) throw DimensionError("occupation tuple has wrong length");
  std::size_t index = 0;
  for (std::size_t n : occupation) {
    if (n >= cutoff_) throw DimensionError("occupation exceeds cutoff");
    index = index * cutoff_ + n;
  }
  return index;
}

std::size_t arity(const GateSpec& spec) noexcept {
  return std::holds_alternative<Beamsplitter>(spec) ? 2 : 1;
}

GateMatrix::GateMatrix(Eigen::MatrixXcd entries, std::size_t arity, std::size_t cutoff)
    : entries_(std::move(entries)), arity_(arity), cutoff_(cutoff) {
  const auto dim = static_cast<std::size_t>(entries_.rows());
  if (entries_.cols() != entries_.rows()) throw DimensionError("gate matrix must be square");
  if (arity_ < 1 || arity_ > 2) throw DimensionError("gate arity must be 1 or 2");
  if (dim != (arity_ == 1 ? cutoff_ : cutoff_ * cutoff_)) {
    throw DimensionError("gate matrix dimension does not match arity and cutoff");
  }
  column_start_.reserve(dim + 1);
  column_start_.push_back(0);
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t i = 0; i < dim; ++i) {
      const Complex v = entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (v == Complex{}) continue;
      entries_by_column_.push_back({i, v});
      diagonal_ = diagonal_ && i == j;
    }
    column_start_.push_back(entries_by_column_.size());
  }
}

FockState vacuum_state(std::size_t modes, std::size_t cutoff) {
  FockState state(modes, cutoff);
  state.amplitudes()[0] = 1.0;
  return state;
}

Eigen::MatrixXcd annihilation(std::size_t cutoff) {
  const auto c = static_cast<Eigen::Index>(cutoff);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(c, c);
  for (Eigen::Index n = 1; n < c; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Eigen::MatrixXcd generator(const GateSpec& spec, std::size_t cutoff) {
  if (cutoff < 2) throw DimensionError("cutoff dimension must be at least 2");
  const auto c = static_cast<Eigen::Index>(cutoff);
  const Complex i{0.0, 1.0};
  auto sq = [](Eigen::Index n) { return std::sqrt(static_cast<double>(n)); };

  return std::visit(
      [&](const auto& g) -> Eigen::MatrixXcd {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, Beamsplitter>) {
          // theta (e^{i phi} a b^dagger - e^{-i phi} a^dagger b)
          Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(c * c, c * c);
          const Complex forward = g.theta * std::polar(1.0, g.phi);
          const Complex backward = g.theta * std::polar(1.0, -g.phi);
          for (Eigen::Index na = 0; na < c; ++na) {
            for (Eigen::Index nb = 0; nb < c; ++nb) {
              const Eigen::Index col = na * c + nb;
              if (na >= 1 && nb + 1 < c) gen((na - 1) * c + nb + 1, col) += forward * sq(na) * sq(nb + 1);
              if (nb >= 1 && na + 1 < c) gen((na + 1) * c + nb - 1, col) -= backward * sq(na + 1) * sq(nb);
            }
          }
          return gen;
        } else {
          Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(c, c);
          for (Eigen::Index n = 0; n < c; ++n) {
            const auto nd = static_cast<double>(n);
            if constexpr (std::is_same_v<T, Displacement>) {
              // alpha a^dagger - alpha^* a
              if (n + 1 < c) gen(n + 1, n) += g.alpha * sq(n + 1);
              if (n >= 1) gen(n - 1, n) -= std::conj(g.alpha) * sq(n);
            } else if constexpr (std::is_same_v<T, Squeeze>) {
              // (z^* a^2 - z a^dagger^2) / 2, z = r e^{i phi}
              const Complex z = std::polar(g.r, g.phi);
              if (n >= 2) gen(n - 2, n) += 0.5 * std::conj(z) * sq(n) * sq(n - 1);
              if (n + 2 < c) gen(n + 2, n) -= 0.5 * z * sq(n + 1) * sq(n + 2);
            } else if constexpr (std::is_same_v<T, Rotation>) {
              gen(n, n) = i * g.phi * nd;
            } else {
              gen(n, n) = i * g.kappa * nd * nd;
            }
          }
          return gen;
        }
      },
      spec);
}

Eigen::MatrixXcd expm_anti_hermitian(const Eigen::MatrixXcd& gen) {
  const auto dim = static_cast<std::size_t>(gen.rows());
  if (gen.cols() != gen.rows()) throw DimensionError("generator must be square");

  DisjointSets sets(dim);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      if (r != c && gen(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) != Complex{}) {
        sets.unite(r, c);
      }
    }
  }
  std::vector<std::vector<Eigen::Index>> blocks(dim);
  for (std::size_t r = 0; r < dim; ++r) blocks[sets.find(r)].push_back(static_cast<Eigen::Index>(r));

  Eigen::MatrixXcd result = Eigen::MatrixXcd::Zero(gen.rows(), gen.cols());
  const Complex i{0.0, 1.0};
  for (const auto& block : blocks) {
    if (block.empty()) continue;
    if (block.size() == 1) {
      const Eigen::Index k = block.front();
      // Anti-Hermitian diagonal is purely imaginary.
      result(k, k) = std::polar(1.0, gen(k, k).imag());
      continue;
    }
    const auto n = static_cast<Eigen::Index>(block.size());
    Eigen::MatrixXcd hermitian(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index c = 0; c < n; ++c) hermitian(r, c) = -i * gen(block[r], block[c]);
    }
    // Symmetrize away rounding in the input.
    hermitian = (0.5 * (hermitian + hermitian.adjoint())).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian);
    const Eigen::MatrixXcd& v = solver.eigenvectors();
    Eigen::VectorXcd phases(n);
    for (Eigen::Index k = 0; k < n; ++k) phases(k) = std::polar(1.0, solver.eigenvalues()(k));
    const Eigen::MatrixXcd local = v * phases.asDiagonal() * v.adjoint();
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index c = 0; c < n; ++c) result(block[r], block[c]) = local(r, c);
    }
  }
  return result;
}

GateMatrix build_gate(const GateSpec& spec, std::size_t cutoff) {
  if (cutoff < 2) throw DimensionError("cutoff dimension must be at least 2");
  check_finite(spec);
  return GateMatrix(expm_anti_hermitian(generator(spec, cutoff)), arity(spec), cutoff);
}

void apply_gate(const FockState& state, const GateMatrix& gate, std::span<const std::size_t> modes,
                FockState& out) {
  const std::size_t c = state.cutoff();
  if (gate.cutoff() != c) throw DimensionError("gate cutoff does not match state cutoff");
  if (modes.size() != gate.arity()) throw DimensionError("mode count does not match gate arity");
  for (std::size_t k = 0; k < modes.size(); ++k) {
    if (modes[k] >= state.modes()) throw DimensionError("mode index out of range");
    for (std::size_t j = 0; j < k; ++j) {
      if (modes[j] == modes[k]) throw DimensionError("gate modes must be distinct");
    }
  }
  if (&out == &state) throw DimensionError("apply_gate output must not alias its input");
  if (out.modes() != state.modes() || out.cutoff() != c) out = FockState(state.modes(), c);

  const std::size_t dim = gate.dimension();
  const std::size_t s0 = state.stride(modes[0]);
  const std::size_t s1 = gate.arity() == 2 ? state.stride(modes[1]) : 0;

  // Flat offsets of every basis state with zero occupation on the gate modes.
  thread_local std::vector<std::size_t> bases;
  bases.assign(1, 0);
  for (std::size_t m = 0; m < state.modes(); ++m) {
    if (std::find(modes.begin(), modes.end(), m) != modes.end()) continue;
    const std::size_t stride = state.stride(m);
    const std::size_t n = bases.size();
    for (std::size_t d = 1; d < c; ++d) {
      for (std::size_t b = 0; b < n; ++b) bases.push_back(bases[b] + d * stride);
    }
  }
  thread_local std::vector<std::size_t> offsets;
  offsets.resize(dim);
  for (std::size_t l = 0; l < dim; ++l) offsets[l] = gate.arity() == 1 ? l * s0 : (l / c) * s0 + (l % c) * s1;

  // X(b, l) = state[bases[b] + offsets[l]]; Y = X G^T.
  const auto nb = static_cast<Eigen::Index>(bases.size());
  const auto d = static_cast<Eigen::Index>(dim);
  thread_local Eigen::MatrixXcd x, y;
  x.resize(nb, d);
  y.resize(nb, d);
  auto in = state.amplitudes();
  for (Eigen::Index l = 0; l < d; ++l) {
    for (Eigen::Index b = 0; b < nb; ++b) x(b, l) = in[bases[b] + offsets[l]];
  }
  if (gate.is_diagonal()) {
    for (Eigen::Index l = 0; l < d; ++l) y.col(l) = x.col(l) * gate.entries()(l, l);
  } else if (gate.arity() == 1) {
    y.noalias() = x * gate.entries().transpose();
  } else {
    y.setZero();
    for (Eigen::Index j = 0; j < d; ++j) {
      for (const auto& e : gate.column(static_cast<std::size_t>(j))) {
        y.col(static_cast<Eigen::Index>(e.row)) += e.value * x.col(j);
      }
    }
  }
  auto dst = out.amplitudes();
  for (Eigen::Index l = 0; l < d; ++l) {
    for (Eigen::Index b = 0; b < nb; ++b) dst[bases[b] + offsets[l]] = y(b, l);
  }
}

FockState apply_gate(const FockState& state, const GateMatrix& gate, std::span<const std::size_t> modes) {
  FockState out(state.modes(), state.cutoff());
  apply_gate(state, gate, modes, out);
  return out;
}

double norm(const FockState& state) noexcept {
  double sum = 0.0;
  for (const Complex& z : state.amplitudes()) sum += std::norm(z);
  return std::sqrt(sum);
}

double expectation_x(const FockState& state, std::size_t mode) {
  const std::size_t stride = state.stride(mode);
  const std::size_t c = state.cutoff();
  auto amps = state.amplitudes();

  double norm_sq = 0.0;
  for (const Complex& z : amps) norm_sq += std::norm(z);
  if (!(norm_sq > 0.0)) throw DegenerateStateError("expectation of a zero-norm state");

  // <a> = sum_n sqrt(n) conj(psi[.., n-1, ..]) psi[.., n, ..]
  Complex a_mean{};
  for (std::size_t idx = 0; idx < amps.size(); ++idx) {
    const std::size_t n = (idx / stride) % c;
    if (n == 0) continue;
    a_mean += std::sqrt(static_cast<double>(n)) * std::conj(amps[idx - stride]) * amps[idx];
  }
  return 2.0 * a_mean.real() / norm_sq;
}

std::vector<double> photon_distribution(const FockState& state, std::size_t mode) {
  const std::size_t stride = state.stride(mode);
  const std::size_t c = state.cutoff();
  std::vector<double> dist(c, 0.0);
  auto amps = state.amplitudes();
  for (std::size_t idx = 0; idx < amps.size(); ++idx) dist[(idx / stride) % c] += std::norm(amps[idx]);
  return dist;
}

void write_amplitudes_csv(const FockState& state, std::ostream& out) {
  out << "index,re,im\n";
  char buf[96];
  auto amps = state.amplitudes();
  for (std::size_t idx = 0; idx < amps.size(); ++idx) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", idx, amps[idx].real(), amps[idx].imag());
    out << buf;
  }
}

}  // namespace qregress::fock
