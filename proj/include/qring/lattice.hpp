#pragma once

// Finite cyclic lattice: position/momentum bases, the DFT-like change of
// basis between them, and the translation operators.
//
// Sites are labelled x = 0..N-1 with position eigenvalue a(x - j), momenta
// p = 0..N-1 with eigenvalue g(p - j), j = (N-1)/2. The parity phase
// alpha (0 for odd N, 1/2 for even N) is kept in the kernel so that every
// site is equivalent under translation.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qring/errors.hpp"

namespace qring {

using complex = std::complex<double>;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// e^{i 2 pi num / den}, with num reduced modulo den in integer arithmetic.
inline complex unit_phase(std::int64_t num, std::int64_t den) {
  std::int64_t r = num % den;
  if (r < 0) r += den;
  // Fold into (-den/2, den/2] so the angle stays small.
  if (2 * r > den) r -= den;
  const double angle = two_pi * static_cast<double>(r) / static_cast<double>(den);
  return {std::cos(angle), std::sin(angle)};
}

struct LatticeConfig {
  std::size_t N = 2;
  double a = 1.0;      // lattice constant
  double m = 1.0;      // mass
  double g = 0.0;      // momentum constant, a*g*N = 2 pi
  double j = 0.0;      // (N-1)/2
  double alpha = 0.0;  // 0 (odd N) or 1/2 (even N)
  double tau = 0.0;    // time scale 2 m a / g
  complex omega{1.0, 0.0};

  bool even() const { return N % 2 == 0; }
  std::int64_t n() const { return static_cast<std::int64_t>(N); }

  /// omega^z = e^{i 2 pi z / N} for real z.
  complex omega_pow(double z) const {
    const double angle = two_pi * z / static_cast<double>(N);
    return {std::cos(angle), std::sin(angle)};
  }

  /// omega^alpha, the phase picked up by one translation step.
  complex omega_alpha() const { return even() ? unit_phase(1, 2 * n()) : complex{1.0, 0.0}; }

  double physical_time(double T) const { return T * tau; }
  double dimensionless_time(double t) const { return t / tau; }
};

inline LatticeConfig make_config(std::size_t N, double a = 1.0, double m = 1.0) {
  if (N < 2) throw invalid_lattice("lattice needs at least 2 sites, got " + std::to_string(N));
  if (!(a > 0.0) || !std::isfinite(a)) throw invalid_parameter("lattice constant must be positive");
  if (!(m > 0.0) || !std::isfinite(m)) throw invalid_parameter("mass must be positive");

  LatticeConfig c;
  c.N = N;
  c.a = a;
  c.m = m;
  c.g = two_pi / (static_cast<double>(N) * a);
  c.j = (static_cast<double>(N) - 1.0) / 2.0;
  c.alpha = (N % 2 == 0) ? 0.5 : 0.0;
  c.tau = 2.0 * m * a / c.g;
  c.omega = unit_phase(1, c.n());
  return c;
}

/// 4N times the exponent of omega in <phi_x, phi_p>, i.e.
/// 4[(p-j)(x-j) + alpha(x-p)], which is always an integer.
inline std::int64_t kernel_exponent_x4(const LatticeConfig& cfg, std::int64_t x, std::int64_t p) {
  const std::int64_t shift = cfg.n() - 1;  // 2j
  std::int64_t e = (2 * p - shift) * (2 * x - shift);
  if (cfg.even()) e += 2 * (x - p);
  return e;
}

/// <phi_x, phi_p> = omega^{(p-j)(x-j) + alpha(x-p)} / sqrt(N).
inline complex kernel_entry(const LatticeConfig& cfg, std::size_t x, std::size_t p) {
  const auto e = kernel_exponent_x4(cfg, static_cast<std::int64_t>(x), static_cast<std::int64_t>(p));
  return unit_phase(e, 4 * cfg.n()) / std::sqrt(static_cast<double>(cfg.N));
}

/// Dense change-of-basis matrix K[x][p] = <phi_x, phi_p>, row-major.
class BasisKernel {
 public:
  explicit BasisKernel(const LatticeConfig& cfg) : cfg_(cfg), entries_(cfg.N * cfg.N) {
    for (std::size_t x = 0; x < cfg.N; ++x)
      for (std::size_t p = 0; p < cfg.N; ++p) entries_[x * cfg.N + p] = kernel_entry(cfg, x, p);
  }

  const LatticeConfig& config() const { return cfg_; }
  std::size_t size() const { return cfg_.N; }
  complex operator()(std::size_t x, std::size_t p) const { return entries_[x * cfg_.N + p]; }
  std::span<const complex> entries() const { return entries_; }

 private:
  LatticeConfig cfg_;
  std::vector<complex> entries_;
};

inline constexpr double normalization_tolerance = 1e-12;

struct position_basis {};
struct momentum_basis {};

/// Coefficients of a unit vector in one of the two lattice bases.
template <class Basis>
class BasisState {
 public:
  BasisState(const LatticeConfig& cfg, std::vector<complex> coefficients)
      : cfg_(cfg), coefficients_(std::move(coefficients)) {
    if (coefficients_.size() != cfg_.N)
      throw invalid_parameter("state has " + std::to_string(coefficients_.size()) +
                              " coefficients, lattice has " + std::to_string(cfg_.N) + " sites");
    const double n2 = norm_squared();
    if (std::abs(n2 - 1.0) > normalization_tolerance)
      throw normalization_error("state norm^2 = " + std::to_string(n2));
  }

  /// Rescales arbitrary nonzero coefficients to unit norm.
  static BasisState normalized(const LatticeConfig& cfg, std::vector<complex> coefficients) {
    double n2 = 0.0;
    for (const auto& c : coefficients) n2 += std::norm(c);
    if (!(n2 > 0.0)) throw normalization_error("cannot normalize the zero vector");
    const double s = 1.0 / std::sqrt(n2);
    for (auto& c : coefficients) c *= s;
    return BasisState(cfg, std::move(coefficients));
  }

  /// The basis vector with index k.
  static BasisState basis_vector(const LatticeConfig& cfg, std::size_t k) {
    if (k >= cfg.N) throw index_error("basis index " + std::to_string(k) + " out of range");
    std::vector<complex> c(cfg.N);
    c[k] = 1.0;
    return BasisState(cfg, std::move(c));
  }

  const LatticeConfig& config() const { return cfg_; }
  std::size_t size() const { return coefficients_.size(); }
  complex operator[](std::size_t k) const { return coefficients_[k]; }
  std::span<const complex> coefficients() const { return coefficients_; }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& c : coefficients_) s += std::norm(c);
    return s;
  }

  std::vector<double> probabilities() const {
    std::vector<double> out(coefficients_.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::norm(coefficients_[k]);
    return out;
  }

 private:
  LatticeConfig cfg_;
  std::vector<complex> coefficients_;
};

using QuantumState = BasisState<position_basis>;
using MomentumState = BasisState<momentum_basis>;

/// d_p = <phi_p, Psi> = sum_x conj(K[x][p]) c_x.
inline MomentumState position_to_momentum(const QuantumState& state, const BasisKernel& kernel) {
  const std::size_t N = state.size();
  std::vector<complex> d(N);
  for (std::size_t x = 0; x < N; ++x) {
    const complex c = state[x];
    for (std::size_t p = 0; p < N; ++p) d[p] += std::conj(kernel(x, p)) * c;
  }
  return MomentumState(state.config(), std::move(d));
}

inline MomentumState position_to_momentum(const QuantumState& state) {
  return position_to_momentum(state, BasisKernel(state.config()));
}

/// c_x = sum_p K[x][p] d_p.
inline QuantumState momentum_to_position(const MomentumState& state, const BasisKernel& kernel) {
  const std::size_t N = state.size();
  std::vector<complex> c(N);
  for (std::size_t x = 0; x < N; ++x) {
    complex acc = 0.0;
    for (std::size_t p = 0; p < N; ++p) acc += kernel(x, p) * state[p];
    c[x] = acc;
  }
  return QuantumState(state.config(), std::move(c));
}

inline QuantumState momentum_to_position(const MomentumState& state) {
  return momentum_to_position(state, BasisKernel(state.config()));
}

namespace detail {
template <class Basis>
BasisState<Basis> shift_by_one(const BasisState<Basis>& state) {
  const std::size_t N = state.size();
  const complex phase = state.config().omega_alpha();
  std::vector<complex> out(N);
  for (std::size_t k = 0; k < N; ++k) out[(k + 1) % N] = phase * state[k];
  return BasisState<Basis>(state.config(), std::move(out));
}
}  // namespace detail

/// e^{-iaP}: phi_x -> omega^alpha phi_{[x+1]}.
inline QuantumState translate_position(const QuantumState& state) { return detail::shift_by_one(state); }

/// e^{igX}: phi_p -> omega^alpha phi_{[p+1]}.
inline MomentumState translate_momentum(const MomentumState& state) { return detail::shift_by_one(state); }

}  // namespace qring
