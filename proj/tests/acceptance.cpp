// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "qring/continuum.hpp"
#include "qring/evolution.hpp"
#include "qring/lattice.hpp"
#include "qring/ring_statistics.hpp"

using namespace qring;

namespace {

constexpr std::uint64_t seed = 20181201;
constexpr double pi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

// Largest deviation of the norm from 1 over every evolved state the suite builds.
double worst_norm = 0.0;

void audit_norm(double norm_squared) { worst_norm = std::max(worst_norm, std::abs(std::sqrt(norm_squared) - 1.0)); }

Outcome diffusion_table() {
  const auto start = Clock::now();
  double worst = 0.0;
  bool ok = true;
  for (std::size_t N : {2, 3, 4, 5, 6, 8, 16, 17, 33, 34, 100}) {
    const auto cfg = make_config(N);
    const auto closed = diffusion_time_closed(cfg);
    const auto root = first_centroid_root(cfg);
    if (N == 2) {
      ok = ok && is_never(closed) && !root;
      continue;
    }
    if (is_never(closed) || !root) {
      ok = false;
      continue;
    }
    worst = std::max(worst, std::abs(std::get<double>(closed) - *root));
  }
  ok = ok && std::get<double>(diffusion_time_closed(make_config(3))) == 1.0;
  const double t = seconds_since(start);
  return {ok && worst < 1e-9 && t < 1.0, fmt("max |dT| = %.3g, %.3f s", worst, t)};
}

Outcome antipode() {
  const auto start = Clock::now();
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (std::size_t N : {2, 4, 6, 8, 16, 34}) {
    const auto cfg = make_config(N);
    std::uniform_real_distribution<double> dist(0.0, 4.0 * N);
    for (int k = 0; k < 100; ++k) worst = std::max(worst, std::abs(amplitude_localized(cfg, N / 2, dist(rng))));
  }
  const double t = seconds_since(start);
  return {worst < 1e-12 && t < 1.0, fmt("max |c_{N/2}| = %.3g, %.3f s", worst, t)};
}

Outcome reconstruction() {
  double even_dev = 0.0, centroid_dev = 0.0, width_dev = 0.0;
  for (std::size_t N = 2; N <= 34; N += 2) {
    const auto cfg = make_config(N);
    const auto c = amplitudes_localized(cfg, N / 2.0);
    double n2 = 0.0;
    for (const auto& v : c) n2 += std::norm(v);
    audit_norm(n2);
    even_dev = std::max(even_dev, std::abs(std::abs(c[0]) - 1.0));
  }
  for (std::size_t N = 3; N <= 33; N += 2) {
    const auto cfg = make_config(N);
    const auto cen = centroid_localized_direct(cfg, N / 2.0);
    centroid_dev = std::max(centroid_dev, std::abs(cen.Z - complex(-(N - 2.0) / N, 0.0)));
    centroid_dev = std::max(centroid_dev, std::abs(centroid_localized_closed(cfg, N / 2.0) + (N - 2.0) / N));
    const double w = 2.0 * cfg.a * std::sqrt(N - 1.0);
    width_dev = std::max(width_dev, std::abs(cen.width - w));
    width_dev = std::max(width_dev, std::abs(width_localized_closed(cfg, N / 2.0) - w));
  }
  const bool ok = even_dev < 1e-10 && centroid_dev < 1e-10 && width_dev < 1e-8;
  return {ok, fmt("even |c0|-1 = %.3g, odd centroid %.3g", even_dev, centroid_dev) + fmt(", width %.3g", width_dev)};
}

Outcome periodicity() {
  double amp = 0.0, prob = 0.0;
  for (std::size_t N : {5, 6, 7, 8}) {
    const auto cfg = make_config(N);
    const auto rep = check_periodicity(cfg, 4.0 * N, 50, seed + N);
    amp = std::max(amp, rep.max_amplitude_deviation);
    prob = std::max(prob, rep.max_probability_deviation);
  }
  // N = 6: the probability period 3 is not an amplitude period.
  const auto cfg6 = make_config(6);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 24.0);
  double split = 0.0;
  for (int k = 0; k < 50; ++k) {
    const double T = dist(rng);
    const auto a = amplitudes_localized(cfg6, T);
    const auto b = amplitudes_localized(cfg6, T + 3.0);
    for (std::size_t x = 0; x < 6; ++x) split = std::max(split, std::abs(a[x] - b[x]));
  }
  const bool ok = amp < 1e-10 && prob < 1e-10 && split > 1e-3;
  return {ok, fmt("amplitude %.3g, probability %.3g", amp, prob) + fmt(", N=6 T vs T+3 %.3g", split)};
}

Outcome symmetry() {
  std::mt19937_64 rng(seed + 5);
  double worst = 0.0;
  for (std::size_t N = 2; N <= 20; ++N) {
    const auto cfg = make_config(N);
    std::uniform_real_distribution<double> dist(0.0, 4.0 * N);
    for (int k = 0; k < 50; ++k) worst = std::max(worst, check_symmetry(cfg, dist(rng)).max_amplitude_deviation);
  }
  return {worst < 1e-12, fmt("max deviation %.3g", worst)};
}

Outcome centroid_closed_vs_brute() {
  std::mt19937_64 rng(seed + 6);
  double worst = 0.0;
  std::size_t samples = 0;
  for (std::size_t N = 2; N <= 40; ++N) {
    const auto cfg = make_config(N);
    std::vector<double> times;
    std::uniform_real_distribution<double> dist(0.0, 2.0 * N);
    for (int k = 0; k < 200; ++k) times.push_back(dist(rng));
    std::uniform_real_distribution<double> near(-1e-7, 1e-7);
    for (int k = 0; k <= 4; ++k) {
      const double s = k * N / 2.0;
      times.push_back(s);
      times.push_back(std::max(0.0, s + near(rng)));
      times.push_back(s + 1e-7);
      if (s > 0.0) times.push_back(s - 1e-7);
    }
    for (double T : times) {
      const auto direct = centroid_localized_direct(cfg, T);
      worst = std::max(worst, std::abs(direct.Z - complex(centroid_localized_closed(cfg, T), 0.0)));
      ++samples;
    }
  }
  return {worst < 1e-10, fmt("max deviation %.3g over %.0f times", worst, static_cast<double>(samples))};
}

Outcome short_time_slope_check() {
  const double h = 1e-6;
  double worst = 0.0;
  for (std::size_t N : {3, 5, 16, 33}) {
    const auto cfg = make_config(N);
    const double slope = centroid_localized_direct(cfg, h).width / h;
    worst = std::max(worst, std::abs(slope / short_time_slope(cfg) - 1.0));
  }
  return {worst < 1e-4, fmt("max relative error %.3g", worst)};
}

Outcome two_site() {
  std::mt19937_64 rng(seed + 8);
  double worst = 0.0, endpoints = 0.0;
  for (std::size_t N : {33, 34}) {
    const auto cfg = make_config(N);
    const BasisKernel kernel(cfg);
    const double c = std::cos(pi / N);
    std::uniform_real_distribution<double> dist(0.0, 2.0 * N);
    for (Parity p : {Parity::even, Parity::odd}) {
      audit_norm(evolve_state(two_site_state(cfg, p), 1.3, Dispersion::quadratic(), kernel).norm_squared());
      for (int k = 0; k < 200; ++k) {
        const double T = dist(rng);
        const complex direct = rotated_centroid_two_site_direct(cfg, p, T, kernel);
        worst = std::max(worst, std::abs(direct - complex(rotated_centroid_two_site(cfg, p, T), 0.0)));
      }
      endpoints = std::max(endpoints, std::abs(rotated_centroid_two_site(cfg, p, 0.0) - c));
      endpoints = std::max(endpoints, std::abs(rotated_centroid_two_site_direct(cfg, p, 0.0, kernel).real() - c));
      if (N % 2 == 1) {
        const double sign = p == Parity::even ? 1.0 : -1.0;
        const double minimum = -((N - 2.0) * c + sign * 2.0) / N;
        endpoints = std::max(endpoints, std::abs(rotated_centroid_two_site(cfg, p, N / 2.0) - minimum));
        endpoints =
            std::max(endpoints, std::abs(rotated_centroid_two_site_direct(cfg, p, N / 2.0, kernel).real() - minimum));
      }
    }
  }
  return {worst < 1e-9 && endpoints < 1e-10, fmt("max deviation %.3g, endpoints %.3g", worst, endpoints)};
}

Outcome continuum() {
  const auto start = Clock::now();
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 20; ++k) {
    const auto wf = gaussian_packet(1.0, 1.0, 64, seed + k);
    audit_norm(evolve_ring(wf, ring_reconstruction_time(1.0, 1.0)).norm_squared());
    worst = std::max(worst, reconstruction_check(wf, 2048));
  }
  const double t = seconds_since(start);
  return {worst < 1e-10 && t < 2.0, fmt("max deviation %.3g, %.3f s", worst, t)};
}

Outcome cover_time() {
  const auto start = Clock::now();
  const auto e16 = classical_cover_time_mc(16, 100000, seed);
  const auto e3 = classical_cover_time_mc(3, 100000, seed + 1);
  const double r16 = std::abs(e16.mean / 120.0 - 1.0);
  const double r3 = std::abs(e3.mean / 3.0 - 1.0);
  const double t = seconds_since(start);
  const bool ok = r16 < 0.02 && r3 < 0.02 && t < 5.0;
  return {ok, fmt("N=16 mean %.4g, N=3 mean %.4g", e16.mean, e3.mean) + fmt(", %.3f s", t)};
}

Outcome unitarity() {
  double kernel_dev = 0.0;
  for (std::size_t N = 2; N <= 64; ++N) {
    const auto cfg = make_config(N);
    const BasisKernel K(cfg);
    for (std::size_t r = 0; r < N; ++r)
      for (std::size_t s = 0; s < N; ++s) {
        complex acc = 0.0;
        for (std::size_t x = 0; x < N; ++x) acc += std::conj(K(x, r)) * K(x, s);
        kernel_dev = std::max(kernel_dev, std::abs(acc - complex(r == s ? 1.0 : 0.0, 0.0)));
      }
  }
  std::mt19937_64 rng(seed + 11);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> dist(0.0, 100.0);
  for (std::size_t N = 2; N <= 40; ++N) {
    const auto cfg = make_config(N);
    const BasisKernel K(cfg);
    std::vector<complex> c(N);
    for (auto& v : c) v = {g(rng), g(rng)};
    const auto state = QuantumState::normalized(cfg, c);
    for (int k = 0; k < 10; ++k) {
      const double T = dist(rng);
      audit_norm(evolve_state(state, T, Dispersion::quadratic(), K).norm_squared());
      double n2 = 0.0;
      for (const auto& v : amplitudes_localized(cfg, T)) n2 += std::norm(v);
      audit_norm(n2);
    }
  }
  return {kernel_dev < 1e-12 && worst_norm < 1e-12, fmt("kernel %.3g, evolved norms %.3g", kernel_dev, worst_norm)};
}

std::pair<int, std::string> run_cli(const std::string& args) {
  const std::string cmd = std::string(QRING_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, {}};
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

Outcome determinism() {
  const std::string args = "centroid --n 17 --samples 801 --format csv";
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  const bool ok = a.first == 0 && b.first == 0 && !a.second.empty() && a.second == b.second;
  return {ok, fmt("%.0f bytes, identical = %.0f", static_cast<double>(a.second.size()), a.second == b.second ? 1.0 : 0.0)};
}

}  // namespace

int main() {
  std::printf("seed %llu\n", static_cast<unsigned long long>(seed));
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"diffusion time table", diffusion_table},
      {"antipode exclusion", antipode},
      {"reconstruction", reconstruction},
      {"periodicity", periodicity},
      {"mirror symmetry", symmetry},
      {"closed vs brute-force centroid", centroid_closed_vs_brute},
      {"short-time width slope", short_time_slope_check},
      {"two-site centroid", two_site},
      {"continuum reconstruction", continuum},
      {"classical covering time", cover_time},
      {"unitarity", unitarity},
      {"cli determinism", determinism},
  };
  int failures = 0;
  int index = 1;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index++, name, o.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
