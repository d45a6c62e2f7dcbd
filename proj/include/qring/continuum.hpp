#pragma once

// Particle on a continuous ring of perimeter L, expanded in integer momentum
// modes phi_n(y) = exp(i y (2 pi / L) n) / sqrt(2 pi), n = -M..M, with
// y in [-L/2, L/2). Free evolution is diagonal in n.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qring/evolution.hpp"
#include "qring/lattice.hpp"

namespace qring {

inline constexpr std::size_t default_ring_grid = 2048;
inline constexpr int default_ring_modes = 64;

/// exp(i 2 pi nu y / L) / sqrt(2 pi) for real mode index nu.
inline complex ring_mode(double nu, double y, double L) {
  const double turns = detail::positive_fmod(nu * y / L, 1.0);
  const double angle = two_pi * turns;
  return complex{std::cos(angle), std::sin(angle)} / std::sqrt(two_pi);
}

/// t_R = m L^2 / (2 pi).
inline double ring_reconstruction_time(double L, double m) { return m * L * L / two_pi; }

class RingWavefunction {
 public:
  /// `modes` holds c_{-M}, ..., c_{M}; its length must be odd.
  RingWavefunction(double L, double m, std::vector<complex> modes) : L_(L), m_(m), modes_(std::move(modes)) {
    if (!(L_ > 0.0) || !std::isfinite(L_)) throw invalid_parameter("ring perimeter must be positive");
    if (!(m_ > 0.0) || !std::isfinite(m_)) throw invalid_parameter("mass must be positive");
    if (modes_.size() % 2 == 0) throw invalid_parameter("mode vector must cover -M..M");
    const double n2 = norm_squared();
    if (std::abs(n2 - 1.0) > normalization_tolerance)
      throw normalization_error("ring wavefunction norm^2 = " + std::to_string(n2));
  }

  static RingWavefunction normalized(double L, double m, std::vector<complex> modes) {
    double n2 = 0.0;
    for (const auto& c : modes) n2 += std::norm(c);
    if (!(n2 > 0.0)) throw normalization_error("cannot normalize the zero vector");
    for (auto& c : modes) c /= std::sqrt(n2);
    return RingWavefunction(L, m, std::move(modes));
  }

  double perimeter() const { return L_; }
  double mass() const { return m_; }
  int max_mode() const { return static_cast<int>(modes_.size() / 2); }
  std::span<const complex> modes() const { return modes_; }

  complex coefficient(int n) const {
    const int M = max_mode();
    if (n < -M || n > M) return 0.0;
    return modes_[static_cast<std::size_t>(n + M)];
  }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& c : modes_) s += std::norm(c);
    return s;
  }

  complex operator()(double y) const {
    complex acc = 0.0;
    const int M = max_mode();
    for (int n = -M; n <= M; ++n) acc += coefficient(n) * ring_mode(n, y, L_);
    return acc;
  }

  /// Samples at y_k = -L/2 + k L / points. Phases are reduced as integers
  /// modulo `points`, so the grid values carry no argument-growth error.
  std::vector<complex> sample(std::size_t points = default_ring_grid) const {
    std::vector<complex> out(points);
    const int M = max_mode();
    const auto P = static_cast<std::int64_t>(points);
    const double norm = 1.0 / std::sqrt(two_pi);
    for (std::size_t k = 0; k < points; ++k) {
      const std::int64_t offset = static_cast<std::int64_t>(k) - P / 2;
      complex acc = 0.0;
      for (int n = -M; n <= M; ++n) acc += coefficient(n) * unit_phase(n * offset, P);
      out[k] = acc * norm;
    }
    return out;
  }

 private:
  double L_;
  double m_;
  std::vector<complex> modes_;
};

/// Multiplies c_n by exp(-i (2pi/L)^2 n^2 t / (2m)) = exp(-i pi n^2 t / t_R).
inline RingWavefunction evolve_ring(const RingWavefunction& wf, double t) {
  const double ratio = t / ring_reconstruction_time(wf.perimeter(), wf.mass());
  std::vector<complex> out(wf.modes().begin(), wf.modes().end());
  const int M = wf.max_mode();
  for (int n = -M; n <= M; ++n) {
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    const double half_turns = detail::positive_fmod(n2 * ratio, 2.0);
    const double angle = -std::numbers::pi * half_turns;
    out[static_cast<std::size_t>(n + M)] *= complex{std::cos(angle), std::sin(angle)};
  }
  return RingWavefunction(wf.perimeter(), wf.mass(), std::move(out));
}

/// Max over the grid of |psi(y, t_R) - psi(y - L/2, 0)|. The shift by L/2 is
/// a rotation by half the grid, so `points` must be even.
inline double reconstruction_check(const RingWavefunction& wf, std::size_t points = default_ring_grid) {
  if (points < 2 || points % 2 != 0) throw invalid_parameter("grid size must be even");
  const auto initial = wf.sample(points);
  const auto later = evolve_ring(wf, ring_reconstruction_time(wf.perimeter(), wf.mass())).sample(points);
  double dev = 0.0;
  for (std::size_t k = 0; k < points; ++k) {
    const std::size_t shifted = (k + points / 2) % points;  // y - L/2 on the periodic grid
    dev = std::max(dev, std::abs(later[k] - initial[shifted]));
  }
  return dev;
}

/// Wave packet with a Gaussian envelope in n around a random mean momentum,
/// a random center and small random mode noise.
inline RingWavefunction gaussian_packet(double L, double m, int M, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 0.05);
  const double width = std::max(1.0, M / 6.0);
  const double mean = (uni(rng) - 0.5) * M / 2.0;
  const double center = (uni(rng) - 0.5) * L;
  std::vector<complex> modes(static_cast<std::size_t>(2 * M + 1));
  for (int n = -M; n <= M; ++n) {
    const double env = std::exp(-0.5 * (n - mean) * (n - mean) / (width * width));
    const complex shift = std::conj(ring_mode(n, center, L)) * std::sqrt(two_pi);
    modes[static_cast<std::size_t>(n + M)] = env * shift + complex{noise(rng), noise(rng)} * env;
  }
  return RingWavefunction::normalized(L, m, std::move(modes));
}

/// Independent complex Gaussian coefficients on every mode.
inline RingWavefunction random_modes(double L, double m, int M, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<complex> modes(static_cast<std::size_t>(2 * M + 1));
  for (auto& c : modes) c = {normal(rng), normal(rng)};
  return RingWavefunction::normalized(L, m, std::move(modes));
}

/// Two narrow bumps at y1 and y2, the ring analogue of a two-site state.
inline RingWavefunction two_bump_packet(double L, double m, int M, double y1, double y2, int sign = 1) {
  const double width = std::max(1.0, M / 3.0);
  std::vector<complex> modes(static_cast<std::size_t>(2 * M + 1));
  for (int n = -M; n <= M; ++n) {
    const double env = std::exp(-0.5 * n * n / (width * width));
    const complex a = std::conj(ring_mode(n, y1, L));
    const complex b = std::conj(ring_mode(n, y2, L));
    modes[static_cast<std::size_t>(n + M)] = env * (a + static_cast<double>(sign) * b);
  }
  return RingWavefunction::normalized(L, m, std::move(modes));
}

struct HalfIntegerModeReport {
  // max over half-integer nu of |phi(L/2) / phi(-L/2) + 1|
  double boundary_ratio_deviation = 0.0;
  // max over half-integer nu and sample y of |phi(y + L) + phi(y)|
  double half_integer_period_deviation = 0.0;
  // max over integer n and sample y of |phi(y + L) - phi(y)|
  double integer_period_deviation = 0.0;
  std::size_t modes_checked = 0;
};

/// Half-integer modes exp(i y (2pi/L)(n + 1/2)) are antisymmetric across the
/// ring boundary and have period 2L; integer modes have period L.
inline HalfIntegerModeReport half_integer_mode_demo(double L, int M) {
  if (!(L > 0.0)) throw invalid_parameter("ring perimeter must be positive");
  if (M < 0) throw invalid_parameter("mode count must be nonnegative");
  HalfIntegerModeReport rep;
  constexpr int samples = 64;
  for (int n = -M - 1; n <= M; ++n) {
    const double nu = n + 0.5;
    const complex ratio = ring_mode(nu, 0.5 * L, L) / ring_mode(nu, -0.5 * L, L);
    rep.boundary_ratio_deviation = std::max(rep.boundary_ratio_deviation, std::abs(ratio + 1.0));
    for (int k = 0; k < samples; ++k) {
      const double y = L * (static_cast<double>(k) / samples - 0.5);
      rep.half_integer_period_deviation =
          std::max(rep.half_integer_period_deviation, std::abs(ring_mode(nu, y + L, L) + ring_mode(nu, y, L)));
    }
    ++rep.modes_checked;
  }
  for (int n = -M; n <= M; ++n) {
    for (int k = 0; k < samples; ++k) {
      const double y = L * (static_cast<double>(k) / samples - 0.5);
      rep.integer_period_deviation =
          std::max(rep.integer_period_deviation, std::abs(ring_mode(n, y + L, L) - ring_mode(n, y, L)));
    }
  }
  return rep;
}

}  // namespace qring
