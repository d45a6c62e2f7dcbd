// qring: quantum diffusion on a cyclic lattice, command-line front end.
//
//   qring evolve   --n 4 --t-end 8 --samples 5
//   qring centroid --n 16 --format both --out centroid16.csv
//   qring two-site --n 33 --parity odd
//   qring times    --n 2 --n-max 20
//   qring cover    --n 16 --trials 100000 --seed 7
//   qring ring     --length 1 --mass 1 --modes 64
//
// Output goes to --out, else to $QRING_OUTPUT_DIR/<subcommand>.<ext> when that
// variable is set, else to stdout. Exit codes: 0 ok, 1 usage, 2 self-check failed.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "qring/cli.hpp"

namespace fs = std::filesystem;
using qring::cli::OutputFormat;
using qring::cli::RunConfig;

namespace {

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  f << text;
}

void emit(const RunConfig& rc, const qring::cli::CommandResult& res) {
  std::optional<fs::path> base;
  if (rc.out) {
    base = fs::path(*rc.out);
  } else if (const char* dir = std::getenv("QRING_OUTPUT_DIR"); dir && *dir) {
    base = fs::path(dir) / (rc.subcommand + (rc.format == OutputFormat::svg ? ".svg" : ".csv"));
  }

  if (!base) {
    if (rc.format == OutputFormat::both) throw qring::cli::usage("--format both needs --out or QRING_OUTPUT_DIR");
    std::cout << (rc.format == OutputFormat::svg ? *res.svg : res.csv);
    return;
  }
  switch (rc.format) {
    case OutputFormat::csv: write_file(*base, res.csv); break;
    case OutputFormat::svg: write_file(*base, *res.svg); break;
    case OutputFormat::both: {
      fs::path csv = *base, svg = *base;
      write_file(csv.replace_extension(".csv"), res.csv);
      write_file(svg.replace_extension(".svg"), *res.svg);
      break;
    }
  }
}

void add_lattice_flags(CLI::App* cmd, RunConfig& rc) {
  cmd->add_option("--n", rc.N, "number of lattice sites")->check(CLI::PositiveNumber);
  cmd->add_option("--a", rc.a, "lattice constant")->check(CLI::PositiveNumber);
  cmd->add_option("--mass", rc.m, "particle mass")->check(CLI::PositiveNumber);
}

void add_time_flags(CLI::App* cmd, RunConfig& rc) {
  cmd->add_option("--t-start", rc.t_start, "first dimensionless time");
  cmd->add_option("--t-end", rc.t_end, "last dimensionless time (default N)");
  cmd->add_option("--samples", rc.samples, "number of time samples");
}

void add_output_flags(CLI::App* cmd, RunConfig& rc, bool plots) {
  cmd->add_option("--out", rc.out, "output path");
  static const std::map<std::string, OutputFormat> formats{
      {"csv", OutputFormat::csv}, {"svg", OutputFormat::svg}, {"both", OutputFormat::both}};
  if (plots)
    cmd->add_option("--format", rc.format, "csv, svg or both")->transform(CLI::CheckedTransformer(formats));
  cmd->add_option("--threads", rc.threads, "worker threads (0: all cores)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum diffusion on a cyclic one-dimensional lattice"};
  app.require_subcommand(1);
  RunConfig rc;

  static const std::map<std::string, qring::Parity> parities{{"even", qring::Parity::even},
                                                             {"odd", qring::Parity::odd}};

  auto* evolve = app.add_subcommand("evolve", "occupation probabilities of the localized state");
  add_lattice_flags(evolve, rc);
  add_time_flags(evolve, rc);
  add_output_flags(evolve, rc, true);

  auto* centroid = app.add_subcommand("centroid", "closed-form and direct centroid with width");
  add_lattice_flags(centroid, rc);
  add_time_flags(centroid, rc);
  add_output_flags(centroid, rc, true);

  auto* two_site = app.add_subcommand("two-site", "rotated centroid of the two-site states");
  add_lattice_flags(two_site, rc);
  add_time_flags(two_site, rc);
  two_site->add_option("--parity", rc.parity, "even or odd")->transform(CLI::CheckedTransformer(parities));
  add_output_flags(two_site, rc, true);

  auto* times = app.add_subcommand("times", "diffusion, reconstruction times and periods");
  add_lattice_flags(times, rc);
  times->add_option("--n-max", rc.n_max, "last N of the table");
  add_output_flags(times, rc, false);

  auto* cover = app.add_subcommand("cover", "classical covering time by Monte Carlo");
  cover->add_option("--n", rc.N, "number of lattice sites");
  cover->add_option("--trials", rc.trials, "number of walks");
  cover->add_option("--seed", rc.seed, "random seed");
  add_output_flags(cover, rc, false);

  auto* ring = app.add_subcommand("ring", "antipodal reconstruction on a continuous ring");
  ring->add_option("--length", rc.length, "ring perimeter")->check(CLI::PositiveNumber);
  ring->add_option("--mass", rc.m, "particle mass")->check(CLI::PositiveNumber);
  ring->add_option("--modes", rc.modes, "highest momentum mode M")->check(CLI::NonNegativeNumber);
  ring->add_option("--seed", rc.seed, "random seed for the packet");
  add_output_flags(ring, rc, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qring::cli::usage_error;
  }
  rc.subcommand = app.get_subcommands().front()->get_name();

  try {
    const auto res = qring::cli::run(rc);
    emit(rc, res);
    if (!res.message.empty()) std::cerr << "qring: " << res.message << '\n';
    return res.exit;
  } catch (const qring::cli::usage& e) {
    std::cerr << "qring: " << e.what() << '\n';
    return qring::cli::usage_error;
  } catch (const std::invalid_argument& e) {
    std::cerr << "qring: " << e.what() << '\n';
    return qring::cli::usage_error;
  } catch (const std::exception& e) {
    std::cerr << "qring: " << e.what() << '\n';
    return qring::cli::consistency_failure;
  }
}
