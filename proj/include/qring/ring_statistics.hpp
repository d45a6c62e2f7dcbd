#pragma once

// Ring-aware statistics of lattice distributions.
//
// A distribution P(x) on the ring is mapped onto the unit circle at the
// points omega^x; its centroid Z = sum_x omega^x P(x) gives the center
// (argument) and width (modulus) without the artefacts of the ordinary
// mean and variance, which are not periodic.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <variant>
#include <vector>
#include <random>

#include "qring/evolution.hpp"
#include "qring/lattice.hpp"

namespace qring {

struct Centroid {
  complex Z{0.0, 0.0};
  double rho = 0.0;
  std::optional<double> theta;   // in [0, 2 pi); empty when Z = 0
  std::optional<double> center;  // a (theta N / 2pi - j)
  double width = 0.0;            // a N sqrt(1 - |Z|^2)

  bool has_center() const { return theta.has_value(); }
};

inline constexpr double centroid_normalization_tolerance = 1e-10;
// Below this modulus the distribution is treated as centerless.
inline constexpr double centroid_zero_tolerance = 1e-12;

inline Centroid centroid(const LatticeConfig& cfg, std::span<const double> probabilities) {
  if (probabilities.size() != cfg.N)
    throw invalid_parameter("distribution has " + std::to_string(probabilities.size()) + " entries, expected " +
                            std::to_string(cfg.N));
  double total = 0.0;
  complex Z = 0.0;
  for (std::size_t x = 0; x < cfg.N; ++x) {
    const double px = probabilities[x];
    if (px < -centroid_normalization_tolerance || !std::isfinite(px))
      throw normalization_error("negative or non-finite probability at site " + std::to_string(x));
    total += px;
    Z += px * unit_phase(static_cast<std::int64_t>(x), cfg.n());
  }
  if (std::abs(total - 1.0) > centroid_normalization_tolerance)
    throw normalization_error("probabilities sum to " + std::to_string(total));

  Centroid c;
  c.Z = Z;
  c.rho = std::min(std::abs(Z), 1.0);
  c.width = cfg.a * static_cast<double>(cfg.N) * std::sqrt(std::max(0.0, 1.0 - c.rho * c.rho));
  if (c.rho > centroid_zero_tolerance) {
    double th = std::arg(Z);
    if (th < 0.0) th += two_pi;
    if (th >= two_pi - 1e-12) th = 0.0;
    c.theta = th;
    c.center = cfg.a * (th * static_cast<double>(cfg.N) / two_pi - cfg.j);
  }
  return c;
}

/// sin((N-1) u) / sin(u) with u = pi * half_turns. The argument is split as
/// u = k pi + delta so both sines are evaluated on the same small delta;
/// D(k pi + delta) = (-1)^{N k} D(delta). Near the removable singularities
/// the equivalent finite sum sum_{m=0}^{N-2} cos((2m - (N-2)) delta) is used.
inline double dirichlet_kernel_half_turns(std::size_t N, double half_turns) {
  const double k = std::nearbyint(half_turns);
  const double r = half_turns - k;
  const double sign = (static_cast<std::int64_t>(N) % 2 != 0 && std::fmod(std::abs(k), 2.0) == 1.0) ? -1.0 : 1.0;
  const double delta = std::numbers::pi * r;
  const double s = std::sin(delta);
  if (std::abs(s) >= 1e-8) return sign * std::sin(static_cast<double>(N - 1) * delta) / s;
  double acc = 0.0;
  const auto n2 = static_cast<std::int64_t>(N) - 2;
  for (std::int64_t m = 0; m <= n2; ++m) acc += std::cos(static_cast<double>(2 * m - n2) * delta);
  return sign * acc;
}

/// sin((N-1) u) / sin(u), finite at u = k pi.
inline double dirichlet_kernel(std::size_t N, double u) {
  return dirichlet_kernel_half_turns(N, u / std::numbers::pi);
}

/// d/du of dirichlet_kernel, from the cosine sum.
inline double dirichlet_kernel_derivative(std::size_t N, double u) {
  double acc = 0.0;
  const auto n2 = static_cast<std::int64_t>(N) - 2;
  for (std::int64_t m = 0; m <= n2; ++m) {
    const double k = static_cast<double>(2 * m - n2);
    acc -= k * std::sin(k * u);
  }
  return acc;
}

namespace detail {
/// u = 2 pi T / N with T folded into [0, N).
inline double centroid_angle(const LatticeConfig& cfg, double T) {
  const double n = static_cast<double>(cfg.N);
  return two_pi * positive_fmod(T, n) / n;
}
}  // namespace detail

/// Closed-form (real) centroid of the initially localized state:
/// Z(T) = (sin((2pi/N)(N-1)T) / sin((2pi/N)T) + 1) / N.
inline double centroid_localized_closed(const LatticeConfig& cfg, double T) {
  const double n = static_cast<double>(cfg.N);
  return (dirichlet_kernel_half_turns(cfg.N, 2.0 * detail::positive_fmod(T, n) / n) + 1.0) / n;
}

/// Centroid of the localized state evaluated from the amplitudes directly.
inline Centroid centroid_localized_direct(const LatticeConfig& cfg, double T) {
  std::vector<double> probs(cfg.N);
  for (std::size_t x = 0; x < cfg.N; ++x) probs[x] = std::norm(amplitude_localized(cfg, x, T));
  return centroid(cfg, probs);
}

/// Width a sqrt(N^2 - (D + 1)^2) of the localized state, D the Dirichlet
/// ratio. The radicand is formed as deficit (2N - deficit) with
/// deficit = N - 1 - D = 2 sum_m sin^2(k_m u / 2), free of cancellation near T = 0.
inline double width_localized_closed(const LatticeConfig& cfg, double T) {
  const double n = static_cast<double>(cfg.N);
  const double u = detail::centroid_angle(cfg, T);

  const double dz = dirichlet_kernel_half_turns(cfg.N, 2.0 * detail::positive_fmod(T, n) / n) + 1.0;
  const double radicand = n * n - dz * dz;
  if (radicand < -1e-9)
    throw consistency_error("width radicand " + std::to_string(radicand) + " is negative at T = " +
                            std::to_string(T));

  double deficit = 0.0;
  const auto n2 = static_cast<std::int64_t>(cfg.N) - 2;
  for (std::int64_t m = 0; m <= n2; ++m) {
    const double s = std::sin(0.5 * static_cast<double>(2 * m - n2) * u);
    deficit += 2.0 * s * s;
  }
  return cfg.a * std::sqrt(std::max(0.0, deficit * (2.0 * n - deficit)));
}

/// Diffusion time is infinite for N = 2.
struct Never {
  friend bool operator==(Never, Never) { return true; }
};

using DiffusionTime = std::variant<Never, double>;

inline bool is_never(const DiffusionTime& t) { return std::holds_alternative<Never>(t); }

/// Closed-form diffusion time: never (N = 2), 1 (N = 3), N / (2(N - 2)) otherwise.
inline DiffusionTime diffusion_time_closed(const LatticeConfig& cfg) {
  if (cfg.N == 2) return Never{};
  if (cfg.N == 3) return 1.0;
  const double n = static_cast<double>(cfg.N);
  return n / (2.0 * (n - 2.0));
}

/// First zero of the closed-form centroid on (0, 1], located by a grid scan
/// followed by bisection. Tangential zeros (N = 4) are refined by bisecting
/// the derivative instead. Returns nullopt if Z never vanishes (N = 2).
inline std::optional<double> first_centroid_root(const LatticeConfig& cfg, std::size_t grid = 10000,
                                                 double tol = 1e-13) {
  const double n = static_cast<double>(cfg.N);
  auto Z = [&](double T) { return centroid_localized_closed(cfg, T); };
  auto dZ = [&](double T) { return dirichlet_kernel_derivative(cfg.N, two_pi * T / n) * two_pi / (n * n); };

  const double h = 1.0 / static_cast<double>(grid);
  auto at = [&](std::size_t k) { return static_cast<double>(k) / static_cast<double>(grid); };

  // A zero where Z only touches the axis: bisect on Z' over [lo, hi].
  auto tangent_root = [&](double lo, double hi) -> std::optional<double> {
    if (!(dZ(lo) < 0.0 && dZ(hi) > 0.0)) return std::nullopt;
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      (dZ(mid) < 0.0 ? lo : hi) = mid;
    }
    const double root = 0.5 * (lo + hi);
    if (std::abs(Z(root)) < 1e-12) return root;
    return std::nullopt;
  };

  // Two extra points past T = 1 so a zero sitting exactly on the end is bracketed.
  const std::size_t last = grid + 2;
  double z_prev2 = std::numeric_limits<double>::infinity();
  double z_prev = Z(0.0);
  for (std::size_t k = 1; k <= last; ++k) {
    const double T = at(k);
    const double z = Z(T);
    if (z <= 0.0) {
      if (auto r = tangent_root(T - 2.0 * h, T + h)) return r;
      double lo = at(k - 1), hi = T;
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (Z(mid) > 0.0 ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
    if (k >= 2 && z_prev < z_prev2 && z_prev < z && z_prev < 1e-6) {
      if (auto r = tangent_root(at(k - 2), T)) return r;
    }
    z_prev2 = z_prev;
    z_prev = z;
  }
  return std::nullopt;
}

/// Closed-form diffusion time, cross-checked against the numerical first
/// root of the centroid. Throws consistency_error if they differ by > 1e-9.
inline DiffusionTime diffusion_time(const LatticeConfig& cfg) {
  const DiffusionTime closed = diffusion_time_closed(cfg);
  const auto root = first_centroid_root(cfg);
  if (is_never(closed)) {
    if (root) throw consistency_error("centroid vanishes for N = 2 at T = " + std::to_string(*root));
    return closed;
  }
  const double value = std::get<double>(closed);
  if (!root || std::abs(*root - value) > 1e-9)
    throw consistency_error("diffusion time " + std::to_string(value) + " disagrees with centroid root " +
                            (root ? std::to_string(*root) : std::string("none")));
  return closed;
}

/// Reconstruction time T_R = N / 2.
inline double reconstruction_time(const LatticeConfig& cfg) { return static_cast<double>(cfg.N) / 2.0; }

/// Initial slope of the width, a 2 pi sqrt((N-1)(N-2)/3).
inline double short_time_slope(const LatticeConfig& cfg) {
  const double n = static_cast<double>(cfg.N);
  return cfg.a * two_pi * std::sqrt((n - 1.0) * (n - 2.0) / 3.0);
}

enum class Parity { even, odd };

inline const char* to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

/// (phi_0 +- omega^alpha phi_1) / sqrt(2).
inline QuantumState two_site_state(const LatticeConfig& cfg, Parity parity) {
  std::vector<complex> c(cfg.N);
  const double s = 1.0 / std::numbers::sqrt2;
  const double sign = parity == Parity::even ? 1.0 : -1.0;
  c[0] += s;
  c[1 % cfg.N] += sign * s * cfg.omega_alpha();
  return QuantumState::normalized(cfg, std::move(c));
}

/// Rotated centroid omega^{-1/2} Z of the two-site states, closed form:
/// (1/N)[cos(pi/N) D(2T pi/N) +- D((2T-1) pi/N)/2 +- D((2T+1) pi/N)/2 + cos(pi/N) -+ 1].
inline double rotated_centroid_two_site(const LatticeConfig& cfg, Parity parity, double T) {
  const double n = static_cast<double>(cfg.N);
  const double sign = parity == Parity::even ? 1.0 : -1.0;
  const double c = std::cos(std::numbers::pi / n);
  // D has period 2 pi in u, i.e. N in T.
  const double Tr = detail::positive_fmod(T, n);
  const double d0 = dirichlet_kernel_half_turns(cfg.N, 2.0 * Tr / n);
  const double dm = dirichlet_kernel_half_turns(cfg.N, (2.0 * Tr - 1.0) / n);
  const double dp = dirichlet_kernel_half_turns(cfg.N, (2.0 * Tr + 1.0) / n);
  return (c * d0 + sign * 0.5 * dm + sign * 0.5 * dp + c - sign) / n;
}

/// omega^{-1/2} times the centroid of the evolved two-site state.
inline complex rotated_centroid_two_site_direct(const LatticeConfig& cfg, Parity parity, double T,
                                                const BasisKernel& kernel) {
  const auto evolved = evolve_state(two_site_state(cfg, parity), T, Dispersion::quadratic(), kernel);
  const auto probs = evolved.probabilities();
  return unit_phase(-1, 2 * cfg.n()) * centroid(cfg, probs).Z;
}

inline complex rotated_centroid_two_site_direct(const LatticeConfig& cfg, Parity parity, double T) {
  return rotated_centroid_two_site_direct(cfg, parity, T, BasisKernel(cfg));
}

struct CoverTimeEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t trials = 0;
};

/// Exact mean covering time N(N-1)/2 of the symmetric walk on the cycle.
inline double cover_time_exact(std::size_t N) {
  const double n = static_cast<double>(N);
  return n * (n - 1.0) / 2.0;
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

struct CoverChunk {
  std::uint64_t sum = 0;
  std::uint64_t sum_sq = 0;
};

// The visited set of a nearest-neighbour walk on the cycle is an arc, so
// the lattice is covered once max - min displacement reaches N - 1.
inline CoverChunk run_cover_chunk(std::size_t N, std::size_t trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  CoverChunk out;
  const auto span = static_cast<std::int64_t>(N) - 1;
  for (std::size_t t = 0; t < trials; ++t) {
    std::int64_t pos = 0, lo = 0, hi = 0;
    std::uint64_t steps = 0;
    std::uint64_t bits = 0;
    int left = 0;
    while (hi - lo < span) {
      if (left == 0) {
        bits = rng();
        left = 64;
      }
      pos += (bits & 1u) ? 1 : -1;
      bits >>= 1;
      --left;
      ++steps;
      lo = std::min(lo, pos);
      hi = std::max(hi, pos);
    }
    out.sum += steps;
    out.sum_sq += steps * steps;
  }
  return out;
}

}  // namespace detail

inline constexpr std::size_t cover_chunk_size = 4096;

/// Monte Carlo covering time of the classical symmetric random walk started
/// at site 0. Trials are split into fixed chunks, each with its own seeded
/// stream, so the result does not depend on `workers`.
inline CoverTimeEstimate classical_cover_time_mc(std::size_t N, std::size_t trials, std::uint64_t seed,
                                                 unsigned workers = 0) {
  if (N < 2) throw invalid_lattice("lattice needs at least 2 sites");
  if (trials < 1) throw invalid_parameter("need at least one trial");
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());

  const std::size_t chunks = (trials + cover_chunk_size - 1) / cover_chunk_size;
  std::vector<detail::CoverChunk> results(chunks);
  auto run = [&](std::size_t first) {
    for (std::size_t c = first; c < chunks; c += workers) {
      const std::size_t n = std::min(cover_chunk_size, trials - c * cover_chunk_size);
      results[c] = detail::run_cover_chunk(N, n, detail::splitmix64(seed ^ detail::splitmix64(c)));
    }
  };
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, chunks));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run, w);
  run(0);
  for (auto& t : pool) t.join();

  std::uint64_t sum = 0, sum_sq = 0;
  for (const auto& r : results) {
    sum += r.sum;
    sum_sq += r.sum_sq;
  }
  const double n = static_cast<double>(trials);
  CoverTimeEstimate est;
  est.trials = trials;
  est.mean = static_cast<double>(sum) / n;
  if (trials > 1) {
    const double var = (static_cast<double>(sum_sq) - n * est.mean * est.mean) / (n - 1.0);
    est.standard_error = std::sqrt(std::max(0.0, var) / n);
  }
  return est;
}

}  // namespace qring
