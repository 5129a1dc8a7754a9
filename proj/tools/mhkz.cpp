// mhkz: reconstruct mixed Hoelder functions on the unit square from random
// samples (sparse dyadic embedding + randomized Kaczmarz).

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "mhk/functions.hpp"
#include "mhk/model_io.hpp"
#include "mhk/simd.hpp"

namespace {

using namespace mhk;
using namespace mhk::cli;

void add_common(CLI::App* cmd, RunConfig& cfg, std::string& mode) {
  cmd->add_option("--function", cfg.function, "Registry function name")->capture_default_str();
  cmd->add_option("--m", cfg.m, "Resolution level, n = 2^m")->capture_default_str();
  cmd->add_option("--c1", cfg.c1, "Sample constant: l = ceil(c1 n ln(n)^2), natural log")->capture_default_str();
  cmd->add_option("--l", cfg.l, "Override the sample/iteration count");
  cmd->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
  cmd->add_flag("--recenter", cfg.recenter, "Fit f - f(X_1) and add the offset back");
  cmd->add_option("--mode", mode, "function | smolyak | random | spin | montecarlo");
  cmd->add_option("--samples", cfg.samples, "CSV of x,y,value samples instead of --function")
      ->check(CLI::ExistingFile);
  cmd->add_option("--mc-points", cfg.mc_points, "Monte Carlo points for L2 errors")->capture_default_str();
  cmd->add_option("--reference", cfg.reference, "Registry function to measure errors against");
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()))) {
    throw IoError("cannot write " + path.string());
  }
}

std::string l2_suffix(const RunConfig& cfg, const BatchEvaluator& approx) {
  if (!cfg.reference) return "";
  const L2Estimate e = l2_error(approx, find_function(*cfg.reference).f, cfg.mc_points, cfg.seed);
  return " l2=" + format_double(e.estimate) + " l2_se=" + format_double(e.std_error);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int run_fit(RunConfig cfg, const std::filesystem::path& out) {
  const auto start = std::chrono::steady_clock::now();
  Model model;
  std::size_t l = 0;
  if (cfg.mode == Mode::smolyak) {
    model = smolyak_model(cfg.function, cfg.m);
  } else if (cfg.mode == Mode::random) {
    const SampleSet samples = gather_samples(cfg);
    l = cfg.samples ? std::min(cfg.l != 0 ? cfg.l : samples.size(), samples.size()) : samples.size();
    model = fit(samples, cfg.m, fit_config(cfg, l));
  } else {
    throw std::invalid_argument("fit supports --mode random or smolyak");
  }
  const double elapsed = seconds_since(start);
  save_model(out, model);
  std::printf("fit m=%d l=%zu seconds=%.6f out=%s%s\n", cfg.m, l, elapsed, out.string().c_str(),
              l2_suffix(cfg, [&](std::span<const Point> p, std::span<double> o) { evaluate_batch(model, p, o); })
                  .c_str());
  return kSuccess;
}

int run_spin_fit(const RunConfig& cfg, const std::filesystem::path& out) {
  const auto start = std::chrono::steady_clock::now();
  const SampleSet samples = gather_samples(cfg);
  const std::size_t l =
      cfg.samples ? std::min(cfg.l != 0 ? cfg.l : samples.size(), samples.size()) : samples.size();
  const SpinEnsemble ensemble = fit_spin(samples, cfg.m, fit_config(cfg, l), cfg.spin_count(), cfg.seed);
  const double elapsed = seconds_since(start);
  save_ensemble(out, ensemble);
  std::printf("spin-fit m=%d l=%zu q=%zu seconds=%.6f out=%s%s\n", cfg.m, l, ensemble.size(), elapsed,
              out.string().c_str(),
              l2_suffix(cfg, [&](std::span<const Point> p, std::span<double> o) { ensemble.evaluate_batch(p, o); })
                  .c_str());
  return kSuccess;
}

int run_grid(const RunConfig& cfg, const std::string& input, const std::string& out_prefix) {
  const Approximant a = input.empty() ? build_approximant(cfg) : load_approximant(input);
  const std::vector<double> values = evaluate_grid(a.evaluate, cfg.grid);
  std::ostringstream csv;
  write_grid_csv(csv, values, cfg.grid);
  std::ostringstream pgm;
  write_grid_pgm(pgm, values, cfg.grid);
  write_file(out_prefix + ".csv", csv.str());
  write_file(out_prefix + ".pgm", pgm.str());
  std::printf("grid g=%zu csv=%s.csv pgm=%s.pgm\n", cfg.grid, out_prefix.c_str(), out_prefix.c_str());
  return kSuccess;
}

int run_integrate(const RunConfig& cfg, const std::string& input) {
  const Approximant a = input.empty() ? build_approximant(cfg) : load_approximant(input);
  if (!a.integral) throw std::invalid_argument("no integral available for this input");
  std::printf("integral=%s", format_double(*a.integral).c_str());
  if (cfg.reference) {
    const auto& ref = find_function(*cfg.reference).reference_integral;
    if (ref) {
      std::printf(" reference=%s error=%s", format_double(*ref).c_str(),
                  format_double(std::abs(*a.integral - *ref)).c_str());
    } else {
      std::fprintf(stderr, "warning: '%s' has no reference integral\n", cfg.reference->c_str());
    }
  }
  std::printf("\n");
  return kSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse dyadic embedding + randomized Kaczmarz reconstruction on the unit square.\n"
               "Default sample count l = ceil(c1 * n * ln(n)^2) with n = 2^m (natural log)."};
  app.require_subcommand(1);
  app.set_version_flag("--version", "mhkz 1.0");

  RunConfig cfg;
  std::string mode;
  std::string out;
  std::string input;
  std::string levels = "3..7";
  bool parent_width = false;
  double perturb = 0.0;

  auto* fit_cmd = app.add_subcommand("fit", "Fit a model from random samples and write it");
  add_common(fit_cmd, cfg, mode);
  fit_cmd->add_option("--out", out, "Model file")->required();

  auto* spin_cmd = app.add_subcommand("spin-fit", "Fit a spin-cycled ensemble into a directory");
  add_common(spin_cmd, cfg, mode);
  spin_cmd->add_option("--spins", cfg.spins, "Number of random torus shifts q (default n)");
  spin_cmd->add_option("--out", out, "Ensemble directory")->required();

  auto* grid_cmd = app.add_subcommand("grid", "Evaluate on a GxG grid, write CSV and PGM");
  add_common(grid_cmd, cfg, mode);
  grid_cmd->add_option("input", input, "Model file or ensemble directory (otherwise --mode)");
  grid_cmd->add_option("--grid", cfg.grid, "Grid resolution G")->capture_default_str();
  grid_cmd->add_option("--spins", cfg.spins, "Spin count for --mode spin (default n)");
  grid_cmd->add_option("--out", out, "Output prefix (writes PREFIX.csv and PREFIX.pgm)")->required();

  auto* int_cmd = app.add_subcommand("integrate", "Integral of a model, ensemble or mode over [0,1)^2");
  add_common(int_cmd, cfg, mode);
  int_cmd->add_option("input", input, "Model file or ensemble directory (otherwise --mode)");
  int_cmd->add_option("--spins", cfg.spins, "Spin count for --mode spin (default n)");

  auto* cmp_cmd = app.add_subcommand("compare", "Error table across levels (CSV)");
  add_common(cmp_cmd, cfg, mode);
  cmp_cmd->remove_option(cmp_cmd->get_option("--m"));
  cmp_cmd->add_option("--m", levels, "Level or range LO..HI")->capture_default_str();
  cmp_cmd->add_option("--trials", cfg.trials, "Seeds per level (medians reported)")->capture_default_str();
  cmp_cmd->add_option("--spins", cfg.spins, "Spin count for the spin column (0 skips it)");
  cmp_cmd->add_option("--out", out, "CSV path (default stdout)");

  auto* verify_cmd = app.add_subcommand("verify", "Run the exact-identity checks");
  int verify_level = 5;
  verify_cmd->add_option("--m", verify_level, "Largest level checked")->capture_default_str();
  verify_cmd->add_flag("--parent-width", parent_width, "Use the rejected weight exponent (must fail)")
      ->group("");
  verify_cmd->add_option("--perturb-weight", perturb, "Add this to w[0] before checking (must fail)")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (!mode.empty()) cfg.mode = parse_mode(mode);
    if (verify_cmd->parsed()) {
      VerifyOptions options;
      options.max_level = verify_level;
      options.exponent = parent_width ? WeightExponent::parent_width : WeightExponent::half_width;
      options.weight_perturbation = perturb;
      std::printf("kernels: %s\n", std::string(simd::isa_name(simd::best_isa())).c_str());
      return report_checks(std::cout, run_exact_checks(options));
    }
    if (cmp_cmd->parsed()) {
      const auto [lo, hi] = parse_level_range(levels);
      cfg.m = lo;
      cfg.validate();
      const auto rows = run_compare(cfg, lo, hi);
      if (out.empty()) {
        write_compare_csv(std::cout, rows);
      } else {
        std::ostringstream csv;
        write_compare_csv(csv, rows);
        write_file(out, csv.str());
      }
      return kSuccess;
    }
    cfg.validate();
    if (fit_cmd->parsed()) return run_fit(cfg, out);
    if (spin_cmd->parsed()) return run_spin_fit(cfg, out);
    if (grid_cmd->parsed()) return run_grid(cfg, input, out);
    if (int_cmd->parsed()) return run_integrate(cfg, input);
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kIoFailure;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  }
  return kUsage;
}
