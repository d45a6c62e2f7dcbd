#pragma once

// Command layer behind the `qring` executable. Each command turns a RunConfig
// into CSV text (and optionally an SVG chart) plus an exit code, without
// touching the filesystem, so it can be exercised directly in tests.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "qring/continuum.hpp"
#include "qring/evolution.hpp"
#include "qring/lattice.hpp"
#include "qring/ring_statistics.hpp"
#include "qring/svg.hpp"

namespace qring::cli {

enum class OutputFormat { csv, svg, both };

struct RunConfig {
  std::string subcommand;
  std::size_t N = 16;
  double a = 1.0;
  double m = 1.0;
  double t_start = 0.0;
  std::optional<double> t_end;  // defaults to N
  std::size_t samples = 1601;
  Parity parity = Parity::even;
  std::optional<std::string> out;
  OutputFormat format = OutputFormat::csv;
  std::uint64_t seed = 1;
  std::size_t trials = 100000;
  double length = 1.0;
  int modes = default_ring_modes;
  std::optional<std::size_t> n_max;  // `times` over [N, n_max]
  unsigned threads = 0;              // 0: hardware concurrency

  double end_time() const { return t_end.value_or(static_cast<double>(N)); }
};

enum exit_code : int { success = 0, usage_error = 1, consistency_failure = 2 };

struct CommandResult {
  int exit = success;
  std::string csv;
  std::optional<std::string> svg;
  std::string message;  // diagnostics for stderr
};

class usage : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void validate_time_range(const RunConfig& rc) {
  if (rc.samples < 2) throw usage("--samples must be at least 2");
  if (!(rc.t_start >= 0.0)) throw usage("--t-start must be nonnegative");
  if (!(rc.end_time() > rc.t_start)) throw usage("--t-end must exceed --t-start");
}

/// T_k = t_start + k (t_end - t_start) / (samples - 1).
inline std::vector<double> time_grid(const RunConfig& rc) {
  std::vector<double> T(rc.samples);
  const double span = rc.end_time() - rc.t_start;
  const double steps = static_cast<double>(rc.samples - 1);
  for (std::size_t k = 0; k < rc.samples; ++k) T[k] = rc.t_start + static_cast<double>(k) * span / steps;
  return T;
}

/// Evaluates fn(k) for k in [0, count) on `threads` workers; slot k only
/// depends on k, so the result is independent of the thread count.
template <class R>
std::vector<R> parallel_map(std::size_t count, unsigned threads, const std::function<R(std::size_t)>& fn) {
  std::vector<R> out(count);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  auto work = [&](unsigned w) {
    for (std::size_t k = w; k < count; k += threads) out[k] = fn(k);
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < threads; ++w) pool.emplace_back(work, w);
  work(0);
  for (auto& t : pool) t.join();
  return out;
}

/// 15 significant digits, "inf" for infinity, no negative zero.
inline std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  if (v == 0.0) v = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  std::string s = buf;
  if (s == "-0") s = "0";
  return s;
}

inline std::string csv_row(std::initializer_list<std::string> cells) {
  std::string row;
  bool first = true;
  for (const auto& c : cells) {
    if (!first) row += ',';
    row += c;
    first = false;
  }
  row += '\n';
  return row;
}

inline bool wants_svg(const RunConfig& rc) { return rc.format != OutputFormat::csv; }

// ---------------------------------------------------------------------------

inline CommandResult cmd_evolve(const RunConfig& rc) {
  validate_time_range(rc);
  const auto cfg = make_config(rc.N, rc.a, rc.m);
  const auto T = time_grid(rc);
  const auto probs = parallel_map<std::vector<double>>(T.size(), rc.threads, [&](std::size_t k) {
    const auto amps = amplitudes_localized(cfg, T[k]);
    std::vector<double> p(amps.size());
    for (std::size_t x = 0; x < amps.size(); ++x) p[x] = std::norm(amps[x]);
    return p;
  });

  CommandResult res;
  res.csv = "T,x,probability\n";
  for (std::size_t k = 0; k < T.size(); ++k) {
    double total = 0.0;
    for (std::size_t x = 0; x < cfg.N; ++x) {
      total += probs[k][x];
      res.csv += csv_row({format_number(T[k]), std::to_string(x), format_number(probs[k][x])});
    }
    if (std::abs(total - 1.0) > 1e-12 && res.exit == success) {
      res.exit = consistency_failure;
      res.message = "probabilities sum to " + format_number(total) + " at T = " + format_number(T[k]);
    }
  }

  if (wants_svg(rc)) {
    svg::Chart chart{"Occupation probability, N = " + std::to_string(cfg.N), "T", "|c_x(T)|^2", {}};
    const std::size_t far = cfg.N / 2;
    svg::Series origin{"x = 0", T, {}, "#1f77b4"};
    svg::Series opposite{"x = " + std::to_string(far), T, {}, "#d62728"};
    for (const auto& p : probs) {
      origin.y.push_back(p[0]);
      opposite.y.push_back(p[far]);
    }
    chart.series = {origin, opposite};
    res.svg = svg::render(chart);
  }
  return res;
}

inline constexpr double centroid_audit_tolerance = 1e-10;
inline constexpr double two_site_audit_tolerance = 1e-9;

inline CommandResult cmd_centroid(const RunConfig& rc) {
  validate_time_range(rc);
  const auto cfg = make_config(rc.N, rc.a, rc.m);
  const auto T = time_grid(rc);
  struct Row {
    double closed, brute, brute_imag, width;
  };
  const auto rows = parallel_map<Row>(T.size(), rc.threads, [&](std::size_t k) {
    const auto direct = centroid_localized_direct(cfg, T[k]);
    return Row{centroid_localized_closed(cfg, T[k]), direct.Z.real(), direct.Z.imag(),
               width_localized_closed(cfg, T[k])};
  });

  CommandResult res;
  res.csv = "T,Z_closed,Z_brute,width\n";
  for (std::size_t k = 0; k < T.size(); ++k) {
    const auto& r = rows[k];
    res.csv += csv_row({format_number(T[k]), format_number(r.closed), format_number(r.brute), format_number(r.width)});
    const double dev = std::max(std::abs(r.closed - r.brute), std::abs(r.brute_imag));
    if (dev > centroid_audit_tolerance && res.exit == success) {
      res.exit = consistency_failure;
      res.message = "closed-form and direct centroid differ by " + format_number(dev) + " at T = " +
                    format_number(T[k]);
    }
  }

  if (wants_svg(rc)) {
    svg::Chart chart{"Centroid, N = " + std::to_string(cfg.N), "T", "Z(T)", {}};
    svg::Series s{"Z", T, {}, "#1f77b4"};
    for (const auto& r : rows) s.y.push_back(r.closed);
    chart.series = {s};
    res.svg = svg::render(chart);
  }
  return res;
}

inline CommandResult cmd_two_site(const RunConfig& rc) {
  validate_time_range(rc);
  const auto cfg = make_config(rc.N, rc.a, rc.m);
  const auto T = time_grid(rc);
  const BasisKernel kernel(cfg);
  struct Row {
    double closed;
    complex brute;
  };
  const auto rows = parallel_map<Row>(T.size(), rc.threads, [&](std::size_t k) {
    return Row{rotated_centroid_two_site(cfg, rc.parity, T[k]),
               rotated_centroid_two_site_direct(cfg, rc.parity, T[k], kernel)};
  });

  CommandResult res;
  res.csv = "T,Zrot_closed,Zrot_brute\n";
  for (std::size_t k = 0; k < T.size(); ++k) {
    const auto& r = rows[k];
    res.csv += csv_row({format_number(T[k]), format_number(r.closed), format_number(r.brute.real())});
    const double dev = std::max(std::abs(r.closed - r.brute.real()), std::abs(r.brute.imag()));
    if (dev > two_site_audit_tolerance && res.exit == success) {
      res.exit = consistency_failure;
      res.message = "closed-form and direct rotated centroid differ by " + format_number(dev) + " at T = " +
                    format_number(T[k]);
    }
  }

  if (wants_svg(rc)) {
    svg::Chart chart{std::string("Rotated centroid, ") + to_string(rc.parity) + " initial state, N = " +
                         std::to_string(cfg.N),
                     "T", "rotated Z(T)", {}};
    svg::Series s{"rotated Z", T, {}, rc.parity == Parity::even ? "#1f77b4" : "#d62728"};
    for (const auto& r : rows) s.y.push_back(r.closed);
    chart.series = {s};
    res.svg = svg::render(chart);
  }
  return res;
}

inline CommandResult cmd_times(const RunConfig& rc) {
  if (rc.format != OutputFormat::csv) throw usage("times only produces csv");
  const std::size_t last = rc.n_max.value_or(rc.N);
  if (last < rc.N) throw usage("--n-max must be at least --n");
  CommandResult res;
  res.csv = "N,T_D,T_R,amplitude_period,probability_period\n";
  for (std::size_t n = rc.N; n <= last; ++n) {
    const auto cfg = make_config(n, rc.a, rc.m);
    std::string td;
    try {
      const auto d = diffusion_time(cfg);
      td = is_never(d) ? "inf" : format_number(std::get<double>(d));
    } catch (const consistency_error& e) {
      res.exit = consistency_failure;
      res.message = e.what();
      td = "nan";
    }
    res.csv += csv_row({std::to_string(n), td, format_number(reconstruction_time(cfg)),
                        format_number(amplitude_period(cfg)), format_number(probability_period(cfg))});
  }
  return res;
}

inline CommandResult cmd_cover(const RunConfig& rc) {
  if (rc.format != OutputFormat::csv) throw usage("cover only produces csv");
  if (rc.N < 2) throw usage("--n must be at least 2");
  if (rc.trials < 1) throw usage("--trials must be at least 1");
  const auto est = classical_cover_time_mc(rc.N, rc.trials, rc.seed, rc.threads);
  const double exact = cover_time_exact(rc.N);
  CommandResult res;
  res.csv = "N,trials,seed,mean,standard_error,exact,relative_difference\n";
  res.csv += csv_row({std::to_string(rc.N), std::to_string(rc.trials), std::to_string(rc.seed),
                      format_number(est.mean), format_number(est.standard_error), format_number(exact),
                      format_number((est.mean - exact) / exact)});
  return res;
}

inline constexpr double ring_audit_tolerance = 1e-9;

inline CommandResult cmd_ring(const RunConfig& rc) {
  if (rc.format != OutputFormat::csv) throw usage("ring only produces csv");
  if (rc.modes < 0) throw usage("--modes must be nonnegative");
  if (!(rc.length > 0.0)) throw usage("--length must be positive");
  if (!(rc.m > 0.0)) throw usage("--mass must be positive");
  const auto wf = gaussian_packet(rc.length, rc.m, rc.modes, rc.seed);
  const double dev = reconstruction_check(wf);
  CommandResult res;
  res.csv = "L,mass,modes,seed,t_R,max_deviation\n";
  res.csv += csv_row({format_number(rc.length), format_number(rc.m), std::to_string(rc.modes),
                      std::to_string(rc.seed), format_number(ring_reconstruction_time(rc.length, rc.m)),
                      format_number(dev)});
  if (dev > ring_audit_tolerance) {
    res.exit = consistency_failure;
    res.message = "reconstruction deviation " + format_number(dev) + " exceeds tolerance";
  }
  return res;
}

/// Dispatch by subcommand name.
inline CommandResult run(const RunConfig& rc) {
  if (rc.subcommand == "evolve") return cmd_evolve(rc);
  if (rc.subcommand == "centroid") return cmd_centroid(rc);
  if (rc.subcommand == "two-site") return cmd_two_site(rc);
  if (rc.subcommand == "times") return cmd_times(rc);
  if (rc.subcommand == "cover") return cmd_cover(rc);
  if (rc.subcommand == "ring") return cmd_ring(rc);
  throw usage("unknown subcommand '" + rc.subcommand + "'");
}

}  // namespace qring::cli
