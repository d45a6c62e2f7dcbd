#pragma once

// Free evolution on the cyclic lattice. Time is the dimensionless T = t/tau;
// in these units the quadratic Hamiltonian multiplies momentum coefficient p
// by exp(-i (2 pi / N) (p - j)^2 T).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qring/lattice.hpp"

namespace qring {

/// Energy as a function of the shifted momentum index k = p - j.
class Dispersion {
 public:
  /// epsilon(k) = k^2, evaluated with exact modular phase reduction.
  static Dispersion quadratic() { return Dispersion([](double k) { return k * k; }, true); }

  /// Arbitrary dispersion, evaluated with plain floating-point phases.
  static Dispersion custom(std::function<double(double)> fn) { return Dispersion(std::move(fn), false); }

  double operator()(double k) const { return fn_(k); }
  bool is_quadratic() const { return quadratic_; }

 private:
  Dispersion(std::function<double(double)> fn, bool quadratic) : fn_(std::move(fn)), quadratic_(quadratic) {}

  std::function<double(double)> fn_;
  bool quadratic_;
};

namespace detail {

inline double positive_fmod(double v, double period) {
  double r = std::fmod(v, period);
  if (r < 0.0) r += period;
  return r;
}

/// (integer * t) mod period, with the integer part of t handled exactly.
inline double scaled_mod(std::int64_t k, double t, std::int64_t period) {
  const double ti = std::floor(t);
  const double tf = t - ti;
  const auto ti_int = static_cast<std::int64_t>(ti);
  std::int64_t whole = ((k % period) * (ti_int % period)) % period;
  if (whole < 0) whole += period;
  return positive_fmod(static_cast<double>(whole) + static_cast<double>(k) * tf, static_cast<double>(period));
}

/// (2p - N + 1)^2 = 4 (p - j)^2.
inline std::int64_t shifted_momentum_sq_x4(const LatticeConfig& cfg, std::size_t p) {
  const std::int64_t s = 2 * static_cast<std::int64_t>(p) - cfg.n() + 1;
  return s * s;
}

/// exp(-i (2pi/N) (p-j)^2 T), computed from 4 (p-j)^2 T reduced modulo 4N.
inline complex quadratic_phase(const LatticeConfig& cfg, std::size_t p, double T) {
  const std::int64_t period = 4 * cfg.n();
  const double Tred = positive_fmod(T, static_cast<double>(cfg.even() ? period : cfg.n()));
  const double e = scaled_mod(shifted_momentum_sq_x4(cfg, p), Tred, period);
  const double angle = -two_pi * e / static_cast<double>(period);
  return {std::cos(angle), std::sin(angle)};
}

inline void check_site(const LatticeConfig& cfg, std::size_t x) {
  if (x >= cfg.N)
    throw index_error("site " + std::to_string(x) + " out of range for N = " + std::to_string(cfg.N));
}

}  // namespace detail

/// c_x(T) for the state initially localized at x = 0:
/// (1/N) sum_p omega^{x(p - j + alpha) - (p - j)^2 T}.
inline complex amplitude_localized(const LatticeConfig& cfg, std::size_t x, double T) {
  detail::check_site(cfg, x);
  const std::int64_t N = cfg.n();
  const std::int64_t period = 4 * N;
  // p - j + alpha is an integer for either parity.
  const std::int64_t offset = cfg.even() ? N / 2 - 1 : (N - 1) / 2;
  const double Tred = detail::positive_fmod(T, static_cast<double>(cfg.even() ? period : N));
  const auto xi = static_cast<std::int64_t>(x);

  complex acc = 0.0;
  for (std::size_t p = 0; p < cfg.N; ++p) {
    std::int64_t kx = (xi * (static_cast<std::int64_t>(p) - offset)) % N;
    if (kx < 0) kx += N;
    const double quad = detail::scaled_mod(detail::shifted_momentum_sq_x4(cfg, p), Tred, period);
    const double e = detail::positive_fmod(4.0 * static_cast<double>(kx) - quad, static_cast<double>(period));
    const double angle = two_pi * e / static_cast<double>(period);
    acc += complex{std::cos(angle), std::sin(angle)};
  }
  return acc / static_cast<double>(N);
}

/// All N amplitudes c_x(T) of the localized state.
inline std::vector<complex> amplitudes_localized(const LatticeConfig& cfg, double T) {
  std::vector<complex> out(cfg.N);
  for (std::size_t x = 0; x < cfg.N; ++x) out[x] = amplitude_localized(cfg, x, T);
  return out;
}

/// |c_x(T)|^2 from the double sum
/// (1/N^2) sum_{p,q} omega^{(p-q)x - (p-q)(p+q-2j)T},
/// which is independent of the single-sum amplitude route.
inline double occupation_probability(const LatticeConfig& cfg, std::size_t x, double T) {
  detail::check_site(cfg, x);
  const std::int64_t N = cfg.n();
  const double Tred = detail::positive_fmod(T, static_cast<double>(N));
  const auto xi = static_cast<std::int64_t>(x);

  double acc = 0.0;
  for (std::int64_t p = 0; p < N; ++p) {
    for (std::int64_t q = 0; q < N; ++q) {
      const std::int64_t d = p - q;
      std::int64_t lin = (d * xi) % N;
      if (lin < 0) lin += N;
      const double quad = detail::scaled_mod(d * (p + q - N + 1), Tred, N);
      acc += std::cos(two_pi * (static_cast<double>(lin) - quad) / static_cast<double>(N));
    }
  }
  return std::clamp(acc / static_cast<double>(N * N), 0.0, 1.0);
}

/// Evolve an arbitrary state: to momentum basis, apply exp(-i (2pi/N) eps(p-j) T),
/// and back.
inline QuantumState evolve_state(const QuantumState& state, double T, const Dispersion& dispersion,
                                 const BasisKernel& kernel) {
  const LatticeConfig& cfg = state.config();
  const MomentumState mom = position_to_momentum(state, kernel);
  std::vector<complex> d(mom.coefficients().begin(), mom.coefficients().end());
  for (std::size_t p = 0; p < cfg.N; ++p) {
    if (dispersion.is_quadratic()) {
      d[p] *= detail::quadratic_phase(cfg, p, T);
    } else {
      const double k = static_cast<double>(p) - cfg.j;
      const double angle = -two_pi / static_cast<double>(cfg.N) * dispersion(k) * T;
      d[p] *= complex{std::cos(angle), std::sin(angle)};
    }
  }
  return momentum_to_position(MomentumState(cfg, std::move(d)), kernel);
}

inline QuantumState evolve_state(const QuantumState& state, double T,
                                 const Dispersion& dispersion = Dispersion::quadratic()) {
  return evolve_state(state, T, dispersion, BasisKernel(state.config()));
}

/// Amplitude period: N for odd N, 4N for even N.
inline double amplitude_period(const LatticeConfig& cfg) {
  return cfg.even() ? 4.0 * static_cast<double>(cfg.N) : static_cast<double>(cfg.N);
}

/// Probability period: N for odd N, N/2 for even N.
inline double probability_period(const LatticeConfig& cfg) {
  return cfg.even() ? static_cast<double>(cfg.N) / 2.0 : static_cast<double>(cfg.N);
}

struct PeriodicityReport {
  double amplitude_period = 0.0;
  double probability_period = 0.0;
  double max_amplitude_deviation = 0.0;
  double max_probability_deviation = 0.0;
  std::size_t trials = 0;

  bool holds(double tol = 1e-10) const {
    return max_amplitude_deviation < tol && max_probability_deviation < tol;
  }
};

/// Samples `trials` times uniformly in [0, T_max] and measures how far the
/// amplitudes and probabilities move over one claimed period. Uses unreduced
/// floating-point phases so the period is not assumed by the evaluation.
inline PeriodicityReport check_periodicity(const LatticeConfig& cfg, double T_max, std::size_t trials,
                                           std::uint64_t seed = 20181201) {
  PeriodicityReport rep;
  rep.amplitude_period = amplitude_period(cfg);
  rep.probability_period = probability_period(cfg);
  rep.trials = trials;

  const BasisKernel kernel(cfg);
  const auto raw = Dispersion::custom([](double k) { return k * k; });
  const auto origin = QuantumState::basis_vector(cfg, 0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, T_max);

  for (std::size_t t = 0; t < trials; ++t) {
    const double T = dist(rng);
    const auto base = evolve_state(origin, T, raw, kernel);
    const auto amp = evolve_state(origin, T + rep.amplitude_period, raw, kernel);
    const auto prob = evolve_state(origin, T + rep.probability_period, raw, kernel);
    for (std::size_t x = 0; x < cfg.N; ++x) {
      rep.max_amplitude_deviation = std::max(rep.max_amplitude_deviation, std::abs(base[x] - amp[x]));
      rep.max_probability_deviation =
          std::max(rep.max_probability_deviation, std::abs(std::norm(base[x]) - std::norm(prob[x])));
    }
  }
  return rep;
}

struct SymmetryReport {
  double max_amplitude_deviation = 0.0;  // max_x |c_{N-x} - omega^{-2 alpha x} c_x|
  double max_modulus_deviation = 0.0;    // max_x ||c_{N-x}| - |c_x||
};

namespace detail {
inline SymmetryReport symmetry_of(const LatticeConfig& cfg, std::span<const complex> c) {
  SymmetryReport rep;
  const std::size_t N = cfg.N;
  for (std::size_t x = 0; x < N; ++x) {
    const complex mirrored = c[(N - x) % N];
    const complex phase = cfg.even() ? unit_phase(-static_cast<std::int64_t>(x), cfg.n()) : complex{1.0, 0.0};
    rep.max_amplitude_deviation = std::max(rep.max_amplitude_deviation, std::abs(mirrored - phase * c[x]));
    rep.max_modulus_deviation =
        std::max(rep.max_modulus_deviation, std::abs(std::abs(mirrored) - std::abs(c[x])));
  }
  return rep;
}
}  // namespace detail

/// Mirror relation c_{N-x}(T) = omega^{-2 alpha x} c_x(T) for the localized state.
inline SymmetryReport check_symmetry(const LatticeConfig& cfg, double T) {
  const auto c = amplitudes_localized(cfg, T);
  return detail::symmetry_of(cfg, c);
}

/// Same relation under an arbitrary dispersion; holds whenever eps(k) = eps(-k).
inline SymmetryReport check_symmetry(const LatticeConfig& cfg, double T, const Dispersion& dispersion) {
  const auto state = evolve_state(QuantumState::basis_vector(cfg, 0), T, dispersion);
  return detail::symmetry_of(cfg, state.coefficients());
}

}  // namespace qring
